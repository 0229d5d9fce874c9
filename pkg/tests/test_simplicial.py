import itertools

import pytest

from chainops.complexes import homology, verify_differential
from chainops.rings import ZZ, Zmod
from chainops.simplicial import (
    FiniteSimplicialSet,
    Simplex,
    chains,
    circle_space,
    classifying_space,
    cochains,
    pair_simplex,
    point_space,
    product_space,
    push_degeneracy,
    sphere_space,
    surjection_of_word,
    torus_space,
    word_for_positions,
)


class TestDegeneracyWords:
    def test_push_keeps_strictly_decreasing(self):
        word = ()
        for i in (0, 0, 1, 3, 2):
            word = push_degeneracy(word, i)
            assert all(a > b for a, b in zip(word, word[1:]))

    def test_word_for_positions_roundtrip(self):
        # the collapse set of the word is the position set we started from
        for k in range(4):
            for positions in itertools.combinations(range(5), k):
                word = word_for_positions(positions)
                n = 5
                eta = surjection_of_word(word, n)
                collapsed = {t for t in range(n) if eta[t] == eta[t + 1]}
                assert collapsed == set(positions)

    def test_surjection_is_monotone_surjection(self):
        word = word_for_positions([1, 3])
        eta = surjection_of_word(word, 4)
        assert eta == (0, 1, 1, 2, 2)


class TestFaceRewriting:
    def test_face_of_degenerate_identity_cases(self):
        X = circle_space()
        e = X.nondegenerate("e01")
        se = X.degeneracy(e, 1)
        # d_1 s_1 = d_2 s_1 = id
        assert X.face(se, 1) == e
        assert X.face(se, 2) == e

    def test_simplicial_identities_builtin_spaces(self):
        for X in (point_space(), circle_space(), sphere_space(2),
                  sphere_space(3), classifying_space(2, 4),
                  classifying_space(3, 3), torus_space()):
            assert X.check_simplicial_identities() == []

    def test_vertex_face_endpoints(self):
        X = circle_space()
        e = X.nondegenerate("e01")
        assert X.vertex_face(e, [0]) == X.nondegenerate("v0")
        assert X.vertex_face(e, [1]) == X.nondegenerate("v1")


class TestChains:
    def test_point(self):
        C = chains(point_space(), ZZ)
        assert homology(C, 0).free_rank == 1
        assert homology(C, 1).is_zero()

    def test_circle(self):
        C = chains(circle_space(), ZZ)
        assert verify_differential(C) == []
        assert homology(C, 0).free_rank == 1
        assert homology(C, 1).free_rank == 1

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_spheres(self, n):
        C = chains(sphere_space(n), ZZ)
        assert verify_differential(C) == []
        assert homology(C, 0).free_rank == 1
        assert homology(C, n).free_rank == 1
        for k in range(1, n):
            assert homology(C, k).is_zero()

    def test_torus(self):
        C = chains(torus_space(), ZZ)
        assert verify_differential(C) == []
        assert homology(C, 0).free_rank == 1
        assert homology(C, 1).free_rank == 2
        assert homology(C, 2).free_rank == 1

    def test_cochains_dualize(self):
        X = torus_space()
        D = cochains(X, Zmod(5))
        assert verify_differential(D) == []
        assert homology(D, 1).free_rank == 2


class TestClassifyingSpace:
    def test_bz2_integral_homology(self):
        # oracle: H_*(BZ/2; Z) = Z, Z/2, 0, Z/2, ... below the skeleton cap
        C = chains(classifying_space(2, 6), ZZ)
        assert homology(C, 0).free_rank == 1
        for n in range(1, 6):
            expected = (2,) if n % 2 == 1 else ()
            assert homology(C, n).free_rank == 0
            assert homology(C, n).divisors == expected

    def test_bz3_mod_p_betti_numbers(self):
        # oracle: H^n(BZ/p; Z/p) is one-dimensional in every degree
        C = chains(classifying_space(3, 5), Zmod(3))
        for n in range(5):
            assert homology(C, n).free_rank == 1

    def test_degenerate_inner_faces(self):
        X = classifying_space(3, 3)
        # (1, 2) has inner face (1+2) mod 3 = 0: a degenerate vertex
        f = X.face(X.nondegenerate((1, 2)), 1)
        assert f.is_degenerate
        assert f.base == ()

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            classifying_space(4, 3)


class TestProductSpace:
    def test_pair_simplex_strips_shared_collapses(self):
        X = Y = circle_space()
        a = X.degeneracy(X.nondegenerate("e01"), 0)
        b = Y.degeneracy(Y.nondegenerate("e12"), 0)
        out = pair_simplex(X, Y, a, b)
        assert out.word == (0,)
        assert out.base == (X.nondegenerate("e01"), Y.nondegenerate("e12"))

    def test_nondegenerate_cell_counts_torus(self):
        # 9 vertices, 3*3*2 + 2*3*3 = 27 edges? count via Euler characteristic
        X = torus_space()
        counts = [len(X.simplices(n)) for n in (0, 1, 2)]
        assert counts[0] == 9
        assert counts[0] - counts[1] + counts[2] == 0  # chi(torus) = 0

    def test_product_with_point_is_identity_on_homology(self):
        X = product_space(circle_space(), point_space())
        C = chains(X, ZZ)
        assert homology(C, 0).free_rank == 1
        assert homology(C, 1).free_rank == 1

import itertools

import pytest

from chainops.operads import (
    Operad,
    check_einfinity,
    check_operad_axioms,
    is_surjection_word,
    one_point_operad,
    orientation,
    rename_values,
    surjection_boundary,
    surjection_composition,
    surjection_operad,
    surjection_words,
)
from chainops.rings import ZZ, Zmod


def _degree(u, k):
    return len(u) - k


class TestWords:
    def test_arity_two_is_two_per_degree(self):
        for d in range(6):
            ws = surjection_words(2, d)
            assert len(ws) == 2
            assert all(is_surjection_word(u, 2) for u in ws)

    def test_arity_three_counts(self):
        for d in range(5):
            assert len(surjection_words(3, d)) == 3 * 2 ** (d + 2) - 6

    def test_no_adjacent_repeats(self):
        for u in surjection_words(3, 3):
            assert all(u[i] != u[i + 1] for i in range(len(u) - 1))

    def test_orientation_values(self):
        assert orientation((1, 2)) == 1
        assert orientation((1, 2, 1)) == 1
        # caesuras at positions 0 (value 1) and 1 (value 2) are already
        # in (value, occurrence) order
        assert orientation((1, 2, 1, 2)) == 1
        # (2, 1, 2, 1): caesuras value 2 then value 1, one inversion
        assert orientation((2, 1, 2, 1)) == -1


class TestBoundary:
    def test_squares_to_zero(self):
        for k in (2, 3):
            for d in range(1, 5):
                for u in surjection_words(k, d):
                    acc = {}
                    for w, c in surjection_boundary(u, k).items():
                        for w2, c2 in surjection_boundary(w, k).items():
                            acc[w2] = acc.get(w2, 0) + c * c2
                    assert all(v == 0 for v in acc.values()), u

    def test_degree_drops_by_one(self):
        for u in surjection_words(2, 3):
            for w in surjection_boundary(u, 2):
                assert _degree(w, 2) == 2

    def test_equivariant_under_renaming(self):
        for d in range(4):
            for u in surjection_words(3, d + 1):
                for perm in itertools.permutations((1, 2, 3)):
                    lhs = {rename_values(w, perm): c
                           for w, c in surjection_boundary(u, 3).items()}
                    rhs = surjection_boundary(rename_values(u, perm), 3)
                    assert lhs == rhs


class TestComposition:
    def test_right_unit(self):
        for k in (1, 2, 3):
            for d in range(4):
                for u in surjection_words(k, d):
                    res = surjection_composition(u, k, [(1,)] * k, [1] * k)
                    assert res == {u: 1}

    def test_left_unit(self):
        for j in (1, 2, 3):
            for d in range(4):
                for v in surjection_words(j, d):
                    assert surjection_composition((1,), 1, [v], [j]) \
                        == {v: 1}

    def test_degree_additive(self):
        u = (1, 2, 1)
        v = (1, 2, 1, 2)
        res = surjection_composition(u, 2, [v, (1,)], [2, 1])
        assert res
        for w in res:
            assert _degree(w, 3) == _degree(u, 2) + _degree(v, 2)

    def test_cup_composed_with_itself(self):
        # the two ways of bracketing the cup word (1, 2)
        left = surjection_composition((1, 2), 2, [(1, 2), (1,)], [2, 1])
        right = surjection_composition((1, 2), 2, [(1,), (1, 2)], [1, 2])
        assert left == {(1, 2, 3): 1}
        assert right == {(1, 2, 3): 1}

    def test_chain_map_relation_small(self):
        # d(gamma(u; v, w)) = gamma(du; v, w) + (-1)^|u| gamma(u; dv, w)
        #                     + (-1)^{|u|+|v|} gamma(u; v, dw)
        for du_ in range(3):
            for u in surjection_words(2, du_):
                for dv in range(2):
                    for v in surjection_words(2, dv):
                        lhs = {}
                        for w, c in surjection_composition(
                                u, 2, [v, (1,)], [2, 1]).items():
                            for w2, c2 in surjection_boundary(w, 3).items():
                                lhs[w2] = lhs.get(w2, 0) + c * c2
                        rhs = {}
                        for u2, c in surjection_boundary(u, 2).items():
                            for w, c2 in surjection_composition(
                                    u2, 2, [v, (1,)], [2, 1]).items():
                                rhs[w] = rhs.get(w, 0) + c * c2
                        sgn = (-1) ** du_
                        for v2, c in surjection_boundary(v, 2).items():
                            for w, c2 in surjection_composition(
                                    u, 2, [v2, (1,)], [2, 1]).items():
                                rhs[w] = rhs.get(w, 0) + sgn * c * c2
                        keys = set(lhs) | set(rhs)
                        assert all(lhs.get(w, 0) == rhs.get(w, 0)
                                   for w in keys), (u, v)


class TestSurjectionOperadLevels:
    def test_level_ranks(self):
        O = surjection_operad(3, Zmod(2), 3)
        for d in range(4):
            assert O.level(2).module(d).rank == 2
            assert O.level(3).module(d).rank == 3 * 2 ** (d + 2) - 6

    def test_arity_one_is_the_unit_complex(self):
        O = surjection_operad(2, ZZ, 3)
        assert O.level(1).module(0).rank == 1
        assert O.unit == (1,)

    def test_differentials_square_to_zero(self):
        from chainops.complexes import verify_differential
        O = surjection_operad(3, ZZ, 3)
        for k in (1, 2, 3):
            assert verify_differential(O.level(k)) == []

    def test_group_relations(self):
        O = surjection_operad(3, Zmod(3), 2)
        assert O.group_relation_failures() == []

    def test_cap_guard(self):
        with pytest.raises(ValueError):
            surjection_operad(3, ZZ, 30)


class TestEInfinity:
    def test_arity_two_free_and_acyclic(self):
        for ring in (Zmod(2), ZZ):
            O = surjection_operad(2, ring, 6)
            report = check_einfinity(O, 2, 6)
            assert report["passed"], report["failures"]

    def test_one_point_operad_not_free(self):
        O = one_point_operad(Zmod(2), 2)
        report = check_einfinity(O, 2, 0)
        assert not report["passed"]
        checks = {f["check"] for f in report["failures"]}
        assert checks == {"freeness"}

    def test_one_point_operad_acyclic(self):
        O = one_point_operad(ZZ, 3)
        report = check_einfinity(O, 3, 0)
        assert all(f["check"] != "acyclicity" for f in report["failures"])


class TestOperadAxioms:
    def test_one_point_operad_passes(self):
        O = one_point_operad(ZZ, 3)
        report = check_operad_axioms(O, 3, 0)
        assert report["passed"], report["failures"]

    def test_surjection_operad_small_caps(self):
        O = surjection_operad(2, Zmod(3), 2)
        report = check_operad_axioms(O, 2, 2)
        assert report["passed"], report["failures"]

    def test_corrupted_composition_fails_with_witness(self):
        O = surjection_operad(3, ZZ, 1)
        original = O.compose_basis

        def tampered(u, k, vs, arities):
            out = original(u, k, vs, arities)
            if u == (1, 2) and list(vs) == [(1, 2), (1,)]:
                out = {w: -c for w, c in out.items()}
            return out

        O.compose_basis = tampered
        report = check_operad_axioms(O, 3, 1)
        assert not report["passed"]
        assert any("(1, 2)" in repr(f["witness"])
                   for f in report["failures"])

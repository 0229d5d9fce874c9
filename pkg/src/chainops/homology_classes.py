"""Explicit homology classes: representatives, canonical coordinates,
equality of classes, and maps induced on homology by chain maps.

Over a field the quotient ker/im is handled by row reduction; over Z the
image lattice is put in Hermite form inside kernel coordinates and class
coordinates are canonicalized by division with remainder (so torsion
classes come out reduced mod their divisors).
"""

from __future__ import annotations

import itertools

from .complexes import ChainComplex, ChainMap
from .linalg import (CosetReducer, kernel_matrix, rref,
                     smith_normal_form_matrix, solve_matrix)
from .rings import RingSpec, ZZ


class HomologySpace:
    """H_n of a complex with chosen cycle generators.

    generators: list of cycle columns (dicts label -> coefficient is not
    used here; columns are coordinate lists over the degree-n basis).
    class_vector(v) maps a cycle to canonical coordinates over the
    generators; two cycles are homologous iff their coordinates agree.
    """

    def __init__(self, C: ChainComplex, n: int):
        ring = C.ring
        if not (ring.is_field() or ring.kind == "Z"):
            raise ValueError("field or Z coefficients required")
        self.complex = C
        self.degree = n
        self.ring = ring
        self.basis = C.module(n).basis
        dim = C.module(n).rank
        d_out = C.differential(n)
        d_in = C.differential(n - C.step)
        if dim == 0:
            self._ker = []
        elif d_out.is_zero():
            self._ker = _eye(dim)
        else:
            self._ker = kernel_matrix(d_out.to_matrix(), ring)
        mat_in = d_in.to_matrix()
        self._im = [[mat_in[i][j] for i in range(dim)]
                    for j in range(d_in.source.rank)
                    if any(not ring.is_zero(mat_in[i][j])
                           for i in range(dim))]
        if ring.is_field():
            self._init_field()
        else:
            self._init_integral()

    # -- field backend ------------------------------------------------

    def _init_field(self):
        ring = self.ring
        dim = len(self.basis)
        self._reducer = CosetReducer(ring, self._im, dim)
        reduced = [self._reducer.reduce(col) for col in self._ker]
        gens = []
        seen = []
        for col, red in zip(self._ker, reduced):
            trial = seen + [red]
            _, pivots = rref([list(r) for r in trial], ring)
            if len(pivots) > len(seen):
                gens.append(col)
                seen.append(red)
        self.generators = gens
        self._gen_reduced = seen
        self.divisors = (0,) * len(gens)

    # -- integral backend ----------------------------------------------

    def _init_integral(self):
        k = len(self._ker)
        K = [[self._ker[j][i] for j in range(k)]
             for i in range(len(self.basis))]
        coords = []
        for col in self._im:
            x = solve_matrix(K, list(col), ZZ)
            if x is None:
                raise ValueError("image is not contained in the kernel")
            coords.append([int(v) for v in x])
        # Smith form of the image inside kernel coordinates: in y = U x
        # coordinates the image lattice is spanned by d_i e_i, so the
        # quotient splits as a direct sum of Z/d_i and Z factors.
        Cm = [[coords[j][i] for j in range(len(coords))] for i in range(k)]
        if coords:
            S, U, _ = smith_normal_form_matrix(Cm)
            diag = [S[i][i] if i < len(S[0]) else 0 for i in range(k)]
        else:
            U = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
            diag = [0] * k
        self._U = U
        self._diag = diag
        self._coord_idx = [i for i, d in enumerate(diag) if d != 1]
        # generator for y-coordinate i is K . (U^{-1} e_i)
        gens = []
        for i in self._coord_idx:
            e = [1 if j == i else 0 for j in range(k)]
            x = solve_matrix(U, e, ZZ)
            gen = [sum(K[row][j] * int(x[j]) for j in range(k))
                   for row in range(len(self.basis))]
            gens.append(gen)
        self.generators = gens
        self.divisors = tuple(0 if diag[i] == 0 else diag[i]
                              for i in self._coord_idx)

    # -- shared API -----------------------------------------------------

    @property
    def rank(self):
        return len(self.generators)

    def is_cycle(self, vector):
        d = self.complex.differential(self.degree)
        return all(self.ring.is_zero(c) for c in d.apply(vector).values())

    def class_vector(self, vector):
        """Canonical coordinates of the class of a cycle, or None if the
        input is not a cycle.  vector: dict basis label -> coefficient."""
        if not self.is_cycle(vector):
            return None
        col = [vector.get(b, self.ring.zero()) for b in self.basis]
        if self.ring.is_field():
            red = self._reducer.reduce(col)
            if not self._gen_reduced:
                return ()
            rows = [list(r) for r in zip(*self._gen_reduced)]
            x = solve_matrix(rows, red, self.ring)
            if x is None:
                raise ValueError("cycle outside the computed kernel")
            return tuple(self.ring.normalize(c) for c in x)
        k = len(self._ker)
        K = [[self._ker[j][i] for j in range(k)]
             for i in range(len(self.basis))]
        x = solve_matrix(K, col, ZZ)
        if x is None:
            raise ValueError("cycle outside the computed kernel")
        x = [int(v) for v in x]
        y = [sum(self._U[i][j] * x[j] for j in range(k)) for i in range(k)]
        out = []
        for i in self._coord_idx:
            d = self._diag[i]
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def representative(self, coords):
        """A cycle (dict) whose class has the given generator coordinates."""
        out = {}
        for c, gen in zip(coords, self.generators):
            for i, v in enumerate(gen):
                t = self.ring.add(out.get(self.basis[i], self.ring.zero()),
                                  self.ring.mul(self.ring.normalize(c), v))
                if self.ring.is_zero(t):
                    out.pop(self.basis[i], None)
                else:
                    out[self.basis[i]] = t
        return out

    def same_class(self, u, v):
        return self.class_vector(u) == self.class_vector(v)

    def all_classes(self):
        """Iterate (coords, representative) over every class; finite
        coefficients only."""
        if not self.ring.is_field() or self.ring.kind != "Zmod":
            raise ValueError("finite field coefficients required")
        p = self.ring.modulus
        for coords in itertools.product(range(p), repeat=self.rank):
            yield coords, self.representative(coords)


def induced_map(f: ChainMap, n: int, source_h: HomologySpace = None,
                target_h: HomologySpace = None):
    """Matrix of H_n(f): columns are class vectors of the images of the
    source generators (as a list of coordinate tuples per generator)."""
    if source_h is None:
        source_h = HomologySpace(f.source, n)
    if target_h is None:
        target_h = HomologySpace(f.target, n)
    cols = []
    for j in range(source_h.rank):
        coords = [0] * source_h.rank
        coords[j] = 1
        rep = source_h.representative(coords)
        image = f.component(n).apply(rep)
        cols.append(target_h.class_vector(image))
    return cols


def _eye(n):
    cols = []
    for j in range(n):
        v = [0] * n
        v[j] = 1
        cols.append(v)
    return cols

"""Finite simplicial sets with symbolic degenerate simplices.

A (possibly degenerate) simplex is a pair (word, base): a canonical word of
degeneracy indices applied to a nondegenerate base simplex.  Words are kept
strictly decreasing via s_i s_j = s_{j+1} s_i (i <= j), so simplex equality
is structural.  Face maps rewrite through the word with the simplicial
identities and bottom out in the space's face table.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .complexes import ChainComplex, COHOMOLOGICAL, HOMOLOGICAL
from .freemod import FreeModule, FreeModuleMap
from .rings import RingSpec, _is_prime


class Simplex(NamedTuple):
    word: tuple          # degeneracy indices, strictly decreasing
    base: object         # nondegenerate simplex id
    base_dim: int

    @property
    def dim(self):
        return self.base_dim + len(self.word)

    @property
    def is_degenerate(self):
        return bool(self.word)


def push_degeneracy(word: tuple, i: int) -> tuple:
    """Canonical word for s_i applied on top of a canonical word."""
    out = []
    for a in word:
        if i <= a:
            out.append(a + 1)
        else:
            break
    rest = word[len(out):]
    return tuple(out) + (i,) + rest


def word_for_positions(positions) -> tuple:
    """Canonical word whose collapse set is the given position set."""
    word = ()
    for i in sorted(positions):
        word = push_degeneracy(word, i)
    return word


def surjection_of_word(word: tuple, n: int) -> tuple:
    """The monotone surjection [n] ->> [n - len(word)] the word encodes.

    eta(t) = eta(t+1) exactly at the collapse positions of the word.
    """
    eta = []
    for t in range(n + 1):
        v = t
        for a in word:
            if v > a:
                v -= 1
        eta.append(v)
    return tuple(eta)


class FiniteSimplicialSet:
    """Nondegenerate simplices per dimension plus a face incidence table."""

    def __init__(self, name, simplices, faces, dim_cap):
        """simplices: dim -> list of ids; faces: (dim, id, i) -> Simplex."""
        self.name = name
        self._simplices = {n: list(ids) for n, ids in simplices.items() if ids}
        self._dims = {}
        for n, ids in self._simplices.items():
            for s in ids:
                self._dims[s] = n
        self._faces = dict(faces)
        self.dim_cap = dim_cap

    def dims(self):
        return sorted(self._simplices)

    def simplices(self, n):
        return self._simplices.get(n, [])

    def nondegenerate(self, base) -> Simplex:
        return Simplex((), base, self._dims[base])

    def face(self, sx: Simplex, i: int) -> Simplex:
        """d_i of a possibly degenerate simplex, canonical output."""
        if not sx.word:
            return self._faces[(sx.dim, sx.base, i)]
        j = sx.word[0]
        inner = Simplex(sx.word[1:], sx.base, sx.base_dim)
        if i < j:
            res = self.face(inner, i)
            return Simplex(push_degeneracy(res.word, j - 1), res.base,
                           res.base_dim)
        if i in (j, j + 1):
            return inner
        res = self.face(inner, i - 1)
        return Simplex(push_degeneracy(res.word, j), res.base, res.base_dim)

    def degeneracy(self, sx: Simplex, i: int) -> Simplex:
        return Simplex(push_degeneracy(sx.word, i), sx.base, sx.base_dim)

    def vertex_face(self, sx: Simplex, vertices) -> Simplex:
        """Restrict an n-simplex to a sorted subset of its vertices 0..n."""
        keep = set(vertices)
        out = sx
        for v in range(sx.dim, -1, -1):
            if v not in keep:
                out = self.face(out, v)
        return out

    def check_simplicial_identities(self):
        """Exhaustive d_i d_j = d_{j-1} d_i (i < j) on nondegenerate simplices."""
        bad = []
        for n in self.dims():
            if n < 2:
                continue
            for base in self.simplices(n):
                sx = self.nondegenerate(base)
                for j in range(1, n + 1):
                    for i in range(j):
                        lhs = self.face(self.face(sx, j), i)
                        rhs = self.face(self.face(sx, i), j - 1)
                        if lhs != rhs:
                            bad.append((base, i, j))
        return bad


# ---------------------------------------------------------------------------
# chains and cochains
# ---------------------------------------------------------------------------

def chains(X: FiniteSimplicialSet, ring: RingSpec) -> ChainComplex:
    """Normalized chains: free on nondegenerate simplices, d = sum (-1)^i d_i."""
    modules = {n: FreeModule(ring, list(X.simplices(n))) for n in X.dims()}
    diffs = {}
    for n in X.dims():
        if n == 0 or (n - 1) not in modules:
            continue
        entries = {}
        for base in X.simplices(n):
            for i in range(n + 1):
                f = X.face(X.nondegenerate(base), i)
                if f.is_degenerate:
                    continue
                key = (f.base, base)
                entries[key] = ring.add(entries.get(key, ring.zero()),
                                        ring.normalize((-1) ** i))
        diffs[n] = FreeModuleMap(modules[n], modules[n - 1], entries)
    return ChainComplex(ring, modules, diffs, HOMOLOGICAL)


def cochains(X: FiniteSimplicialSet, ring: RingSpec) -> ChainComplex:
    """Normalized cochains, the linear dual of `chains`, degree +1 differential."""
    C = chains(X, ring)
    modules = dict(C.modules)
    diffs = {}
    for n in sorted(modules):
        d = C.differentials.get(n + 1)
        if d is None:
            continue
        dual_entries = {(s, t): c for (t, s), c in d.entries.items()}
        diffs[n] = FreeModuleMap(modules[n], modules[n + 1], dual_entries)
    return ChainComplex(ring, modules, diffs, COHOMOLOGICAL)


# ---------------------------------------------------------------------------
# built-in spaces
# ---------------------------------------------------------------------------

def point_space() -> FiniteSimplicialSet:
    return FiniteSimplicialSet("point", {0: ["*"]}, {}, 0)


def circle_space() -> FiniteSimplicialSet:
    """Triangulated circle: 3 vertices, 3 oriented edges."""
    simplices = {0: ["v0", "v1", "v2"], 1: ["e01", "e12", "e20"]}
    faces = {}
    for (e, tail, head) in (("e01", "v0", "v1"), ("e12", "v1", "v2"),
                            ("e20", "v2", "v0")):
        faces[(1, e, 0)] = Simplex((), head, 0)
        faces[(1, e, 1)] = Simplex((), tail, 0)
    return FiniteSimplicialSet("circle", simplices, faces, 1)


def sphere_space(n: int) -> FiniteSimplicialSet:
    """Minimal simplicial n-sphere: a point and a single n-cell."""
    if n == 0:
        return FiniteSimplicialSet("sphere0", {0: ["n", "s"]}, {}, 0)
    simplices = {0: ["*"], n: ["cell"]}
    basept = Simplex(word_for_positions(range(n - 1)), "*", 0)
    faces = {(n, "cell", i): basept for i in range(n + 1)}
    return FiniteSimplicialSet(f"sphere{n}", simplices, faces, n)


def classifying_space(p: int, nmax: int) -> FiniteSimplicialSet:
    """nmax-skeleton of the bar-construction classifying space of Z/p.

    Nondegenerate n-simplices are n-tuples of nonzero residues mod p; the
    inner faces add adjacent entries mod p (a zero sum makes the face
    degenerate), the outer faces drop the first or last entry.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if nmax > 10:
        raise ValueError("dimension cap exceeded (nmax <= 10)")
    simplices = {0: [()]}
    faces = {}
    for n in range(1, nmax + 1):
        cells = [tuple(t) for t in itertools.product(range(1, p), repeat=n)]
        simplices[n] = cells
        for g in cells:
            for i in range(n + 1):
                if i == 0:
                    f = g[1:]
                elif i == n:
                    f = g[:-1]
                else:
                    f = g[:i - 1] + ((g[i - 1] + g[i]) % p,) + g[i + 1:]
                faces[(n, g, i)] = _bar_simplex(f)
    return FiniteSimplicialSet(f"bz{p}", simplices, faces, nmax)


def _bar_simplex(tup) -> Simplex:
    """Canonical simplex for a bar tuple that may contain zero entries.

    A zero at position j means the simplex lies in the image of s_j; the
    nondegenerate core is the tuple with the zeros removed.
    """
    zeros = [pos for pos, g in enumerate(tup) if g == 0]
    core = tuple(g for g in tup if g != 0)
    return Simplex(word_for_positions(zeros), core, len(core))


def product_space(X: FiniteSimplicialSet, Y: FiniteSimplicialSet,
                  dim_cap=None, name=None) -> FiniteSimplicialSet:
    """Materialized product simplicial set, truncated at dim_cap.

    Nondegenerate n-simplices are pairs (s_I x, s_J y) with x, y
    nondegenerate and disjoint degeneracy position sets I, J.
    """
    cap = dim_cap if dim_cap is not None else (max(X.dims()) + max(Y.dims()))
    simplices = {}
    for n in range(cap + 1):
        cells = []
        for px in X.dims():
            if px > n:
                continue
            for py in Y.dims():
                if py > n or (n - px) + (n - py) > n:
                    continue
                for a_id in X.simplices(px):
                    for b_id in Y.simplices(py):
                        positions = range(n)
                        for I in itertools.combinations(positions, n - px):
                            rest = [t for t in positions if t not in I]
                            for J in itertools.combinations(rest, n - py):
                                a = Simplex(word_for_positions(I), a_id, px)
                                b = Simplex(word_for_positions(J), b_id, py)
                                cells.append((a, b))
        if cells:
            simplices[n] = sorted(cells)
    faces = {}
    for n in sorted(simplices):
        if n == 0:
            continue
        for (a, b) in simplices[n]:
            for i in range(n + 1):
                faces[(n, (a, b), i)] = pair_simplex(X, Y, X.face(a, i),
                                                     Y.face(b, i))
    return FiniteSimplicialSet(name or f"{X.name}x{Y.name}", simplices,
                               faces, cap)


def pair_simplex(X, Y, a: Simplex, b: Simplex) -> Simplex:
    """Canonical (word, (a', b')) form of a pair of component simplices.

    Shared collapse positions are stripped with d_i (using d_i s_i = id)
    until the pair is jointly nondegenerate.
    """
    stripped = []
    while True:
        ea = surjection_of_word(a.word, a.dim)
        eb = surjection_of_word(b.word, b.dim)
        shared = next((i for i in range(a.dim)
                       if ea[i] == ea[i + 1] and eb[i] == eb[i + 1]), None)
        if shared is None:
            break
        a = X.face(a, shared)
        b = Y.face(b, shared)
        stripped.append(shared)
    word = ()
    for i in reversed(stripped):
        word = push_degeneracy(word, i)
    return Simplex(word, (a, b), a.dim)


def torus_space() -> FiniteSimplicialSet:
    return product_space(circle_space(), circle_space(), name="torus")

"""Simplicial modules and the normalization / denormalization equivalence.

normalize takes the intersection of the kernels of the faces d_i, i >= 1,
with the differential induced by d_0; denormalize rebuilds a simplicial
module from a complex by placing one copy of L_r for every monotone
surjection [n] ->> [r], with operators acting through the epi-mono
factorization of the composed surjection.  The two are exact mutual
inverses on the nose (N o DN = id), which the tests exercise heavily.
"""

from __future__ import annotations

import itertools

from .complexes import ChainComplex, HOMOLOGICAL
from .freemod import FreeModule, FreeModuleMap
from .linalg import kernel_matrix, solve_matrix
from .rings import RingSpec


class SimplicialModule:
    """Graded free modules with faces d_0..d_n and degeneracies s_0..s_n."""

    def __init__(self, ring: RingSpec, modules, faces, degeneracies):
        """faces[(n, i)]: M_n -> M_{n-1}; degeneracies[(n, i)]: M_n -> M_{n+1}."""
        self.ring = ring
        self.modules = {n: m for n, m in modules.items() if m.rank > 0}
        self.faces = {}
        self.degeneracies = {}
        for (n, i), f in faces.items():
            if f.source != self.module(n) or f.target != self.module(n - 1):
                raise ValueError(f"face ({n},{i}) does not match modules")
            if not f.is_zero():
                self.faces[(n, i)] = f
        for (n, i), f in degeneracies.items():
            if f.source != self.module(n) or f.target != self.module(n + 1):
                raise ValueError(f"degeneracy ({n},{i}) does not match modules")
            if not f.is_zero():
                self.degeneracies[(n, i)] = f

    def module(self, n) -> FreeModule:
        return self.modules.get(n, FreeModule(self.ring, []))

    def face(self, n, i) -> FreeModuleMap:
        f = self.faces.get((n, i))
        if f is None:
            return FreeModuleMap.zero(self.module(n), self.module(n - 1))
        return f

    def degeneracy(self, n, i) -> FreeModuleMap:
        f = self.degeneracies.get((n, i))
        if f is None:
            return FreeModuleMap.zero(self.module(n), self.module(n + 1))
        return f

    def top_degree(self):
        return max(self.modules, default=-1)

    def check_identities(self):
        """All five simplicial identity families; returns violation tags.

        Families whose composites would leave the stored degree range (the
        module is a truncation) are skipped at the boundary.
        """
        bad = []
        top = self.top_degree()
        for n in range(top + 1):
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.face(n - 1, i).compose(self.face(n, j))
                        rhs = self.face(n - 1, j - 1).compose(self.face(n, i))
                        if lhs != rhs:
                            bad.append(("dd", n, i, j))
            if n + 2 <= top:
                for j in range(n + 1):
                    for i in range(j + 1):
                        lhs = self.degeneracy(n + 1, j + 1).compose(
                            self.degeneracy(n, i))
                        rhs = self.degeneracy(n + 1, i).compose(
                            self.degeneracy(n, j))
                        if lhs != rhs:
                            bad.append(("ss", n, i, j))
            if n + 1 <= top:
                for j in range(n + 1):
                    sj = self.degeneracy(n, j)
                    for i in range(n + 2):
                        lhs = self.face(n + 1, i).compose(sj)
                        if i in (j, j + 1):
                            rhs = FreeModuleMap.identity(self.module(n))
                        elif i < j:
                            rhs = self.degeneracy(n - 1, j - 1).compose(
                                self.face(n, i))
                        else:
                            rhs = self.degeneracy(n - 1, j).compose(
                                self.face(n, i - 1))
                        if lhs != rhs:
                            bad.append(("ds", n, i, j))
        return bad


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normalize(K: SimplicialModule) -> ChainComplex:
    """Kernel-intersection normalization with differential induced by d_0.

    Kernel columns that are unit vectors keep the underlying basis label, so
    the roundtrip normalize(denormalize(L)) reproduces L literally.
    """
    ring = K.ring
    modules = {}
    inclusions = {}
    for n in sorted(K.modules):
        Kn = K.modules[n]
        if n == 0:
            cols = [_unit(Kn.rank, j) for j in range(Kn.rank)]
        else:
            rows = []
            for i in range(1, n + 1):
                rows.extend(K.face(n, i).to_matrix())
            cols = (kernel_matrix(rows, ring) if rows
                    else [_unit(Kn.rank, j) for j in range(Kn.rank)])
        if not cols:
            continue
        labels = []
        for idx, col in enumerate(cols):
            hits = [j for j, v in enumerate(col) if not ring.is_zero(v)]
            if len(hits) == 1 and col[hits[0]] == ring.one():
                labels.append(Kn.basis[hits[0]])
            else:
                labels.append(("N", n, idx))
        Nn = FreeModule(ring, labels)
        modules[n] = Nn
        inclusions[n] = FreeModuleMap.from_columns(
            Nn, Kn,
            {lab: {Kn.basis[j]: v for j, v in enumerate(col)
                   if not ring.is_zero(v)}
             for lab, col in zip(labels, cols)})
    diffs = {}
    for n in sorted(modules):
        if n == 0 or (n - 1) not in modules:
            continue
        prev = inclusions[n - 1].to_matrix()
        Kprev = K.modules[n - 1]
        entries = {}
        for lab in modules[n].basis:
            image = K.face(n, 0).apply(inclusions[n].column(lab))
            b = [image.get(t, ring.zero()) for t in Kprev.basis]
            x = solve_matrix(prev, b, ring)
            if x is None:
                raise ValueError("d_0 does not preserve the normalized part")
            for j, v in enumerate(x):
                v = ring.normalize(v)
                if not ring.is_zero(v):
                    entries[(modules[n - 1].basis[j], lab)] = v
        diffs[n] = FreeModuleMap(modules[n], modules[n - 1], entries)
    return ChainComplex(ring, modules, diffs, HOMOLOGICAL)


def _unit(n, j):
    v = [0] * n
    v[j] = 1
    return v


# ---------------------------------------------------------------------------
# denormalization
# ---------------------------------------------------------------------------

def surjections(n, r):
    """Monotone surjections [n] ->> [r] as value tuples."""
    out = []
    for S in itertools.combinations(range(n), n - r):
        collapsed = set(S)
        eta = []
        drops = 0
        for t in range(n + 1):
            eta.append(t - drops)
            if t in collapsed:
                drops += 1
        out.append(tuple(eta))
    return out


def _summand_label(eta, r, n, x):
    return x if r == n else ("s", eta, x)


def denormalize(L: ChainComplex, nmax: int) -> SimplicialModule:
    """Inverse of normalize: one copy of L_r per surjection [n] ->> [r]."""
    if L.direction != HOMOLOGICAL:
        raise ValueError("homological input required")
    if any(n < 0 for n in L.modules):
        raise ValueError("negative-degree content")
    ring = L.ring
    summands = {}   # n -> list of (eta, r)
    modules = {}
    for n in range(nmax + 1):
        pieces = []
        if n in L.modules:
            pieces.append((tuple(range(n + 1)), n))
        for r in sorted(L.modules, reverse=True):
            if r >= n:
                continue
            pieces.extend((eta, r) for eta in surjections(n, r))
        basis = []
        for eta, r in pieces:
            basis.extend(_summand_label(eta, r, n, x)
                         for x in L.module(r).basis)
        summands[n] = pieces
        if basis:
            modules[n] = FreeModule(ring, basis)
    mods = {n: m for n, m in modules.items()}
    faces = {}
    degens = {}
    for n in range(nmax + 1):
        if n not in modules:
            continue
        for i in range(n + 1):
            if n >= 1:
                phi = tuple(t if t < i else t + 1 for t in range(n))
                faces[(n, i)] = _operator_map(L, ring, modules, summands,
                                              n, n - 1, phi)
            if n + 1 <= nmax:
                phi = tuple(t if t <= i else t - 1 for t in range(n + 2))
                degens[(n, i)] = _operator_map(L, ring, modules, summands,
                                               n, n + 1, phi)
    return SimplicialModule(ring, mods, faces, degens)


def _operator_map(L, ring, modules, summands, n, m, phi):
    """Action of a monotone phi: [m] -> [n] on the surjection-indexed sum.

    eta o phi factors as delta o eta'; the identity injection acts as the
    identity, the injection missing 0 acts through the differential, every
    other injection acts as zero.
    """
    src = modules.get(n, FreeModule(ring, []))
    tgt = modules.get(m, FreeModule(ring, []))
    entries = {}
    for eta, r in summands.get(n, []):
        psi = tuple(eta[phi[t]] for t in range(m + 1))
        vals = set(psi)
        if vals == set(range(r + 1)):
            for x in L.module(r).basis:
                entries[(_summand_label(psi, r, m, x),
                         _summand_label(eta, r, n, x))] = ring.one()
        elif vals == set(range(1, r + 1)):
            eta2 = tuple(v - 1 for v in psi)
            d = L.differential(r)
            for (t, s), c in d.entries.items():
                key = (_summand_label(eta2, r - 1, m, t),
                       _summand_label(eta, r, n, s))
                entries[key] = ring.add(entries.get(key, ring.zero()), c)
    return FreeModuleMap(src, tgt, entries)

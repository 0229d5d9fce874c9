"""Alexander-Whitney and Eilenberg-Zilber maps on normalized chains.

Both maps relate the chains of a materialized product simplicial set to
the tensor product of the factors' chains.  On normalized chains the
composite AW o EZ is the identity on the nose; the other composite is
only chain homotopic to the identity (tested on homology).
"""

from __future__ import annotations

import itertools

from .complexes import ChainComplex, ChainMap, tensor_complexes
from .freemod import FreeModuleMap
from .rings import RingSpec
from .simplicial import (FiniteSimplicialSet, Simplex, chains, product_space,
                         word_for_positions)


def alexander_whitney(X: FiniteSimplicialSet, Y: FiniteSimplicialSet,
                      ring: RingSpec, product: FiniteSimplicialSet = None,
                      dim_cap: int = None) -> ChainMap:
    """Front-face/back-face diagonal C(X x Y) -> C(X) (x) C(Y).

    AW(a, b) = sum_i (vertices 0..i of a) (x) (vertices i..n of b);
    degenerate pieces are dropped (normalized chains).
    """
    P = product if product is not None else product_space(X, Y,
                                                          dim_cap=dim_cap)
    src = chains(P, ring)
    tgt = tensor_complexes(chains(X, ring), chains(Y, ring))
    comps = {}
    for n in P.dims():
        entries = {}
        for (a, b) in P.simplices(n):
            for i in range(n + 1):
                front = X.vertex_face(a, range(i + 1))
                back = Y.vertex_face(b, range(i, n + 1))
                if front.is_degenerate or back.is_degenerate:
                    continue
                key = ((front.base, back.base), (a, b))
                entries[key] = ring.add(entries.get(key, ring.zero()),
                                        ring.one())
        comps[n] = FreeModuleMap(src.module(n), tgt.module(n), entries)
    return ChainMap(src, tgt, comps)


def eilenberg_zilber(X: FiniteSimplicialSet, Y: FiniteSimplicialSet,
                     ring: RingSpec, product: FiniteSimplicialSet = None,
                     dim_cap: int = None) -> ChainMap:
    """Shuffle product C(X) (x) C(Y) -> C(X x Y).

    EZ(x (x) y) = sum over (p, q)-shuffles of +-(s_B x, s_A y) where A, B
    partition the positions 0..p+q-1 and the sign counts the inversions
    between the two blocks.  Every term is a nondegenerate product cell.
    """
    P = product if product is not None else product_space(X, Y,
                                                          dim_cap=dim_cap)
    src = tensor_complexes(chains(X, ring), chains(Y, ring))
    tgt = chains(P, ring)
    cap = max(P.dims(), default=-1)
    comps = {}
    for n in range(cap + 1):
        entries = {}
        for p in X.dims():
            q = n - p
            if q not in Y.dims():
                continue
            for x in X.simplices(p):
                for y in Y.simplices(q):
                    for A in itertools.combinations(range(n), p):
                        B = tuple(t for t in range(n) if t not in A)
                        inv = sum(1 for u in A for v in B if u > v)
                        cell = (Simplex(word_for_positions(B), x, p),
                                Simplex(word_for_positions(A), y, q))
                        key = (cell, (x, y))
                        entries[key] = ring.add(
                            entries.get(key, ring.zero()),
                            ring.normalize((-1) ** inv))
                    # A = positions where the first factor is undegenerate
        comps[n] = FreeModuleMap(src.module(n), tgt.module(n), entries)
    return ChainMap(_bounded(src, cap), tgt, comps)


def _bounded(C: ChainComplex, cap: int) -> ChainComplex:
    if all(n <= cap for n in C.modules):
        return C
    return ChainComplex(C.ring,
                        {n: m for n, m in C.modules.items() if n <= cap},
                        {n: d for n, d in C.differentials.items()
                         if n <= cap}, C.direction)

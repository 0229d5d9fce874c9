"""Seeded random complexes for property sweeps and round-trip checks.

Differentials are built degree by degree inside the kernel of the previous
one, so d o d = 0 holds by construction and every generated complex is a
genuine bounded chain complex.
"""

from __future__ import annotations

import random

from .complexes import ChainComplex, HOMOLOGICAL
from .freemod import FreeModule, FreeModuleMap
from .linalg import kernel
from .rings import RingSpec


def random_chain_complex(ring: RingSpec, length: int, max_rank: int,
                         rng: random.Random, coeff_bound: int = 3) -> ChainComplex:
    """Random homological complex supported in degrees [0, length]."""
    ranks = [rng.randint(0, max_rank) for _ in range(length + 1)]
    modules = {n: FreeModule(ring, [("x", n, i) for i in range(r)])
               for n, r in enumerate(ranks) if r}
    diffs = {}
    prev_kernel = None   # inclusion ker(d_{n-1}) -> C_{n-1}
    for n in range(1, length + 1):
        src = modules.get(n)
        tgt = modules.get(n - 1)
        if src is None or tgt is None:
            prev_kernel = None
            continue
        if prev_kernel is None:
            # unconstrained random map
            entries = {}
            for t in tgt.basis:
                for s in src.basis:
                    entries[(t, s)] = rng.randint(-coeff_bound, coeff_bound)
            d = FreeModuleMap(src, tgt, entries)
        else:
            # random combination of kernel generators per source basis vector
            cols = {}
            kbasis = prev_kernel.source.basis
            for s in src.basis:
                vec = {}
                for kb in kbasis:
                    c = rng.randint(-coeff_bound, coeff_bound)
                    if c:
                        vec[kb] = c
                col = prev_kernel.apply({k: ring.normalize(v)
                                         for k, v in vec.items()})
                cols[s] = col
            d = FreeModuleMap.from_columns(src, tgt, cols)
        if not d.is_zero():
            diffs[n] = d
        prev_kernel = kernel(d)
    return ChainComplex(ring, modules, diffs, HOMOLOGICAL)

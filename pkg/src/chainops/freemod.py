"""Labeled free modules and sparse exact maps between them.

FreeModuleMap is the universal carrier for every differential and structure
map in the engine.  Entries are stored sparsely as (target label, source
label) -> nonzero ring element; maps compare by structural equality.
All values are immutable after construction.
"""

from __future__ import annotations

from .rings import RingSpec


class FreeModule:
    """Free module over a RingSpec with an ordered basis of opaque labels."""

    __slots__ = ("ring", "basis", "index")

    def __init__(self, ring: RingSpec, basis):
        basis = tuple(basis)
        if len(set(basis)) != len(basis):
            raise ValueError("basis labels must be pairwise distinct")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "index", {b: i for i, b in enumerate(basis)})

    def __setattr__(self, *a):
        raise AttributeError("FreeModule is immutable")

    @property
    def rank(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, FreeModule)
                and self.ring == other.ring and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ring, self.basis))

    def __repr__(self):
        return f"FreeModule({self.ring}, rank {self.rank})"

    def tensor(self, other: "FreeModule") -> "FreeModule":
        if self.ring != other.ring:
            raise ValueError("ring mismatch in tensor")
        return FreeModule(self.ring,
                          [(a, b) for a in self.basis for b in other.basis])

    def zero_vector(self):
        return {}

    def basis_vector(self, label):
        if label not in self.index:
            raise KeyError(label)
        return {label: self.ring.one()}


def vec_add(ring, u, v):
    out = dict(u)
    for k, c in v.items():
        s = ring.add(out.get(k, ring.zero()), c)
        if ring.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out

def vec_scale(ring, c, u):
    c = ring.normalize(c)
    if ring.is_zero(c):
        return {}
    out = {}
    for k, a in u.items():
        s = ring.mul(c, a)
        if not ring.is_zero(s):
            out[k] = s
    return out

def vec_sub(ring, u, v):
    return vec_add(ring, u, vec_scale(ring, -1 if ring.kind != "Q" else ring.normalize(-1), v))


class FreeModuleMap:
    """Sparse linear map, entries indexed (target label, source label)."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: FreeModule, target: FreeModule, entries):
        if source.ring != target.ring:
            raise ValueError("source and target must share a ring")
        ring = source.ring
        clean = {}
        for (t, s), c in entries.items():
            if t not in target.index:
                raise KeyError(f"unknown target label {t!r}")
            if s not in source.index:
                raise KeyError(f"unknown source label {s!r}")
            c = ring.normalize(c)
            if not ring.is_zero(c):
                clean[(t, s)] = c
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, *a):
        raise AttributeError("FreeModuleMap is immutable")

    @property
    def ring(self):
        return self.source.ring

    def __eq__(self, other):
        return (isinstance(other, FreeModuleMap)
                and self.source == other.source
                and self.target == other.target
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source, self.target,
                     tuple(sorted(((self.target.index[t], self.source.index[s])
                                   for (t, s) in self.entries)))))

    def __repr__(self):
        return (f"FreeModuleMap({self.source.rank}->{self.target.rank}, "
                f"{len(self.entries)} entries)")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(source, target):
        return FreeModuleMap(source, target, {})

    @staticmethod
    def identity(module):
        one = module.ring.one()
        return FreeModuleMap(module, module,
                             {(b, b): one for b in module.basis})

    @staticmethod
    def from_columns(source, target, columns):
        """columns: source label -> vector (dict target label -> coeff)."""
        entries = {}
        for s, col in columns.items():
            for t, c in col.items():
                entries[(t, s)] = c
        return FreeModuleMap(source, target, entries)

    @staticmethod
    def from_matrix(source, target, rows):
        """rows[i][j] = coefficient of target.basis[i] in image of source.basis[j]."""
        entries = {}
        for i, t in enumerate(target.basis):
            for j, s in enumerate(source.basis):
                entries[(t, s)] = rows[i][j]
        return FreeModuleMap(source, target, entries)

    # -- linear algebra as label algebra ------------------------------------

    def apply(self, vector):
        """Apply to a sparse source-indexed vector; returns target-indexed."""
        ring = self.ring
        out = {}
        for (t, s), c in self.entries.items():
            a = vector.get(s)
            if a is None:
                continue
            val = ring.add(out.get(t, ring.zero()), ring.mul(c, a))
            if ring.is_zero(val):
                out.pop(t, None)
            else:
                out[t] = val
        return out

    def column(self, src_label):
        return {t: c for (t, s), c in self.entries.items() if s == src_label}

    def compose(self, first: "FreeModuleMap") -> "FreeModuleMap":
        """self o first."""
        if first.target != self.source:
            raise ValueError("composition mismatch")
        ring = self.ring
        entries = {}
        for (mid, s), c in first.entries.items():
            for (t, mid2), c2 in self.entries.items():
                if mid2 != mid:
                    continue
                key = (t, s)
                val = ring.add(entries.get(key, ring.zero()), ring.mul(c2, c))
                if ring.is_zero(val):
                    entries.pop(key, None)
                else:
                    entries[key] = val
        return FreeModuleMap(first.source, self.target, entries)

    def add(self, other: "FreeModuleMap") -> "FreeModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("addition mismatch")
        ring = self.ring
        entries = dict(self.entries)
        for k, c in other.entries.items():
            val = ring.add(entries.get(k, ring.zero()), c)
            if ring.is_zero(val):
                entries.pop(k, None)
            else:
                entries[k] = val
        return FreeModuleMap(self.source, self.target, entries)

    def scale(self, c) -> "FreeModuleMap":
        ring = self.ring
        return FreeModuleMap(self.source, self.target,
                             {k: ring.mul(c, v) for k, v in self.entries.items()})

    def is_zero(self):
        return not self.entries

    def to_matrix(self):
        """Dense row-major matrix (target rows, source columns)."""
        rows = [[self.ring.zero()] * self.source.rank
                for _ in range(self.target.rank)]
        for (t, s), c in self.entries.items():
            rows[self.target.index[t]][self.source.index[s]] = c
        return rows

    def is_diagonal(self):
        return all(self.target.index[t] == self.source.index[s]
                   for (t, s) in self.entries)


def tensor_map(f: FreeModuleMap, g: FreeModuleMap) -> FreeModuleMap:
    """(f (x) g)(a (x) b) = f(a) (x) g(b) on the pair-label bases."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch in tensor_map")
    ring = f.ring
    source = f.source.tensor(g.source)
    target = f.target.tensor(g.target)
    entries = {}
    for (t1, s1), c1 in f.entries.items():
        for (t2, s2), c2 in g.entries.items():
            entries[((t1, t2), (s1, s2))] = ring.mul(c1, c2)
    return FreeModuleMap(source, target, entries)

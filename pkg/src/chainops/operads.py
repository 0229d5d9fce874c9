"""Operads in chain complexes with executable axiom checks.

The concrete instance is the surjection operad: the degree-d piece of
arity k is spanned by the nondegenerate surjections {1..k+d} ->> {1..k}
(no adjacent repeats).  Its differential deletes letters, its composition
substitutes words with overlapping splittings, and it acts on normalized
simplicial cochains by interval cuts; the arity-2 part reproduces the cup
and cup-i products.

Sign conventions follow the orientation formalism: a word u carries the
orientation sign or(u), the number of inversions among its caesura
letters (letters whose value recurs later) relative to the
(value, occurrence)-sorted order.  All structure maps are defined by a
pure Koszul rule in the oriented basis and transported back, which is
what makes d^2 = 0, the chain-map property of gamma, associativity and
equivariance come out exactly.
"""

from __future__ import annotations

import itertools

from .complexes import ChainComplex, ChainMap, HOMOLOGICAL, homology
from .freemod import FreeModule, FreeModuleMap
from .rings import RingSpec
from .simplicial import FiniteSimplicialSet, cochains


# ---------------------------------------------------------------------------
# surjection words
# ---------------------------------------------------------------------------

def is_surjection_word(u, k) -> bool:
    """Onto {1..k} with no adjacent repeats."""
    if set(u) != set(range(1, k + 1)):
        return False
    return all(u[i] != u[i + 1] for i in range(len(u) - 1))


def surjection_words(k: int, degree: int):
    """All nondegenerate surjections {1..k+degree} ->> {1..k}, sorted."""
    if k == 0:
        return [()] if degree == 0 else []
    out = []
    for u in itertools.product(range(1, k + 1), repeat=k + degree):
        if is_surjection_word(u, k):
            out.append(u)
    return out


def letter_info(u):
    """Per letter: (value, occurrence index from 1, is_caesura).

    A caesura is a letter whose value recurs later in the word; caesuras
    are the degree-1 letters, final occurrences have degree 0.
    """
    last = {}
    for i, v in enumerate(u):
        last[v] = i
    seen = {}
    out = []
    for i, v in enumerate(u):
        seen[v] = seen.get(v, 0) + 1
        out.append((v, seen[v], last[v] != i))
    return out


def occurrence_counts(u):
    occ = {}
    for v in u:
        occ[v] = occ.get(v, 0) + 1
    return occ


def orientation(u) -> int:
    """Sign relating position order to (value, occurrence) order of the
    caesura letters."""
    info = letter_info(u)
    keys = [(v, t) for v, t, c in info]
    caes = [c for _, _, c in info]
    inv = sum(1 for i in range(len(u)) for j in range(i + 1, len(u))
              if caes[i] and caes[j] and keys[i] > keys[j])
    return -1 if inv % 2 else 1


def surjection_boundary(u, k):
    """Differential: signed deletion of single letters.

    Deleting the t-th occurrence of value v carries the sign
    or(u) * or(du) * (-1)^(t-1) * (-1)^(caesuras of smaller values);
    deletions that break surjectivity or create adjacent repeats drop out.
    """
    info = letter_info(u)
    occ = occurrence_counts(u)
    su = orientation(u)
    out = {}
    for i in range(len(u)):
        v, t, _ = info[i]
        if occ[v] == 1:
            continue
        w = u[:i] + u[i + 1:]
        if not is_surjection_word(w, k):
            continue
        pre = sum(occ[x] - 1 for x in occ if x < v)
        s = su * orientation(w) * (-1) ** (pre + t - 1)
        out[w] = out.get(w, 0) + s
    return {w: c for w, c in out.items() if c}


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def _overlapping_splittings(length, pieces):
    """Cut-point tuples 1 = c_0 <= c_1 <= ... <= c_pieces = length; piece t
    spans positions c_{t-1}..c_t, so consecutive pieces share a letter."""
    if pieces == 0:
        return [(1,)] if length == 0 else []
    out = []
    for cuts in itertools.combinations_with_replacement(
            range(1, length + 1), pieces - 1):
        out.append((1,) + cuts + (length,))
    return out


def _caesuras_sorted(u):
    """Positions (1-based) of the caesuras in (value, occurrence) order."""
    info = letter_info(u)
    caes = [(v, t, i) for i, (v, t, c) in enumerate(info) if c]
    caes.sort(key=lambda z: (z[0], z[1]))
    return [i + 1 for _, _, i in caes]


def _match_sign(src, tgt):
    """Sign of the permutation matching two orderings of the same items."""
    rest = list(tgt)
    sign = 1
    for x in src:
        j = rest.index(x)
        if j % 2:
            sign = -sign
        rest.pop(j)
    return sign


def surjection_composition(u, k, vs, arities):
    """gamma(u; v_1..v_k): substitute v_s for the occurrences of s.

    Each v_s is split into as many overlapping pieces as s has
    occurrences; the pieces replace the occurrences in order, values are
    renumbered by block offsets, and results with adjacent repeats or
    missing values are dropped.  The sign is
    or(u) * prod or(v_s) * or(w) * (caesura matching sign): duplicated
    cut letters account for the caesuras of u, transported letters for
    the caesuras of the v_s, and the matching permutation of these
    degree-1 letters against the caesuras of the result w gives the
    Koszul sign.
    """
    occ = occurrence_counts(u)
    offsets = {}
    off = 0
    for s in range(1, k + 1):
        offsets[s] = off
        off += arities[s - 1]
    splits = []
    for s in range(1, k + 1):
        sp = _overlapping_splittings(len(vs[s - 1]), occ.get(s, 0))
        if not sp:
            return {}
        splits.append(sp)
    base = orientation(u)
    for v in vs:
        base *= orientation(v)
    src = []
    for s in range(1, k + 1):
        for t in range(1, occ.get(s, 0)):
            src.append(("u", s, t))
    for s in range(1, k + 1):
        for pos in _caesuras_sorted(vs[s - 1]):
            src.append(("v", s, pos))
    out = {}
    for choice in itertools.product(*splits):
        used = {s: 0 for s in range(1, k + 1)}
        w = []
        tags = []
        for v in u:
            t = used[v] = used[v] + 1
            cuts = choice[v - 1]
            for pos in range(cuts[t - 1], cuts[t] + 1):
                w.append(vs[v - 1][pos - 1] + offsets[v])
                if pos == cuts[t] and t < occ[v]:
                    tags.append(("u", v, t))
                else:
                    tags.append(("v", v, pos))
        w = tuple(w)
        if not is_surjection_word(w, off):
            continue
        info = letter_info(w)
        wc = [(val, t, i) for i, (val, t, c) in enumerate(info) if c]
        wc.sort(key=lambda z: (z[0], z[1]))
        tgt = [tags[i] for _, _, i in wc]
        sign = base * orientation(w) * _match_sign(src, tgt)
        out[w] = out.get(w, 0) + sign
    return {w: c for w, c in out.items() if c}


def rename_values(u, perm):
    """Unsigned symmetric-group action: value v becomes perm[v-1]."""
    return tuple(perm[v - 1] for v in u)


# ---------------------------------------------------------------------------
# symmetric sequences and operads
# ---------------------------------------------------------------------------

class SymmetricSequence:
    """Arity-indexed complexes with symmetric group actions.

    The action is stored on the adjacent transpositions (i, i+1) as chain
    maps; arbitrary permutations act through a deterministic bubble-sort
    factorization.
    """

    def __init__(self, ring: RingSpec, levels: dict,
                 transpositions: dict):
        """levels: arity -> ChainComplex; transpositions:
        arity -> list of ChainMap for (1 2), (2 3), ..., (k-1 k)."""
        self.ring = ring
        self.levels = dict(levels)
        self.transpositions = dict(transpositions)

    def arities(self):
        return sorted(self.levels)

    def level(self, k) -> ChainComplex:
        return self.levels[k]

    def permutation_action(self, k: int, perm) -> ChainMap:
        """Chain map for the permutation sending v to perm[v-1]."""
        C = self.level(k)
        comps = {n: FreeModuleMap.identity(C.module(n)) for n in C.modules}
        result = ChainMap(C, C, comps)
        for i in reversed(_adjacent_factorization(perm)):
            result = self.transpositions[k][i - 1].compose(result)
        return result

    def group_relation_failures(self, degree_cap=None):
        """Generator relations of the symmetric groups as map equalities."""
        bad = []
        for k in self.arities():
            gens = self.transpositions.get(k, [])
            ident = self.permutation_action(k, tuple(range(1, k + 1)))
            for i, g in enumerate(gens, start=1):
                if g.compose(g) != ident:
                    bad.append((k, "square", i))
            for i in range(1, len(gens)):
                lhs = gens[i - 1].compose(gens[i]).compose(gens[i - 1])
                rhs = gens[i].compose(gens[i - 1]).compose(gens[i])
                if lhs != rhs:
                    bad.append((k, "braid", i))
            for i in range(1, len(gens) + 1):
                for j in range(i + 2, len(gens) + 1):
                    lhs = gens[i - 1].compose(gens[j - 1])
                    rhs = gens[j - 1].compose(gens[i - 1])
                    if lhs != rhs:
                        bad.append((k, "commute", i, j))
        return bad


def _adjacent_factorization(perm):
    """Adjacent transposition word for the permutation v -> perm[v-1],
    by bubble sort (deterministic; indices are 1-based generators)."""
    arr = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(arr) - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i + 1)
                changed = True
    word.reverse()
    return word


class Operad(SymmetricSequence):
    """Symmetric sequence with composition and unit.

    compose_basis(u, k, vs, arities) evaluates gamma on basis elements
    and returns a dict {result label: coefficient}; unit is the basis
    label of the arity-1 identity in degree 0.
    """

    def __init__(self, ring, levels, transpositions, compose_basis, unit,
                 degree_cap=None):
        super().__init__(ring, levels, transpositions)
        self.compose_basis = compose_basis
        self.unit = unit
        self.degree_cap = degree_cap

    def basis_degree(self, k, label):
        C = self.level(k)
        for n in C.modules:
            if label in C.module(n).index:
                return n
        raise KeyError(label)


class WeightedOperad:
    """Weight-graded wrapper: one copy of each level per weight, with a
    composition that adds weights."""

    def __init__(self, operad: Operad, weights):
        self.operad = operad
        self.weights = sorted(weights)

    def level(self, k, m) -> ChainComplex:
        if m not in self.weights:
            raise KeyError(m)
        return self.operad.level(k)

    def compose_basis(self, labeled, k, inputs, arities):
        """labeled: (basis label, weight); inputs: list of the same."""
        u, m0 = labeled
        vs = [lab for lab, _ in inputs]
        total = m0 + sum(m for _, m in inputs)
        raw = self.operad.compose_basis(u, k, vs, arities)
        return {(w, total): c for w, c in raw.items()}


class OperadAlgebra:
    """A complex with structure maps theta_k: O(k) (x) A^(x k) -> A.

    theta(u, k, xs) evaluates on basis elements; xs is a list of
    (label, degree) pairs of the algebra's basis.
    """

    def __init__(self, operad: Operad, complex_: ChainComplex, theta):
        self.operad = operad
        self.complex = complex_
        self.theta = theta


# ---------------------------------------------------------------------------
# the surjection operad
# ---------------------------------------------------------------------------

def surjection_operad(arity: int, ring: RingSpec, degree_cap: int) -> Operad:
    """Arities 1..arity of the surjection operad, degrees 0..degree_cap.

    Each level keeps one guard degree above the cap so that homology
    through the cap is that of the full (infinite) complex.
    """
    if arity < 1:
        raise ValueError("arity must be at least 1")
    if degree_cap > 10:
        raise ValueError("degree cap too large for exhaustive levels")
    levels = {}
    transpositions = {}
    stored = degree_cap + 1
    for k in range(1, arity + 1):
        top = stored if k > 1 else 0
        modules = {d: FreeModule(ring, surjection_words(k, d))
                   for d in range(top + 1)}
        diffs = {}
        for d in range(1, top + 1):
            entries = {}
            for u in modules[d].basis:
                for w, c in surjection_boundary(u, k).items():
                    entries[(w, u)] = ring.normalize(c)
            diffs[d] = FreeModuleMap(modules[d], modules[d - 1], entries)
        levels[k] = ChainComplex(ring, modules, diffs, HOMOLOGICAL)
        gens = []
        for i in range(1, k):
            perm = list(range(1, k + 1))
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
            comps = {}
            for d in range(top + 1):
                entries = {(rename_values(u, perm), u): ring.one()
                           for u in modules[d].basis}
                comps[d] = FreeModuleMap(modules[d], modules[d], entries)
            gens.append(ChainMap(levels[k], levels[k], comps))
        transpositions[k] = gens

    def compose(u, k, vs, arities):
        return surjection_composition(u, k, vs, arities)

    return Operad(ring, levels, transpositions, compose, (1,),
                  degree_cap=degree_cap)


def one_point_operad(ring: RingSpec, arity: int) -> Operad:
    """O(k) = the unit complex for every k, trivial action and gamma.

    Acyclic but not free: the basis point is fixed by everything."""
    levels = {}
    transpositions = {}
    for k in range(1, arity + 1):
        modules = {0: FreeModule(ring, [("pt", k)])}
        levels[k] = ChainComplex(ring, modules, {}, HOMOLOGICAL)
        gens = []
        for _ in range(1, k):
            comps = {0: FreeModuleMap.identity(modules[0])}
            gens.append(ChainMap(levels[k], levels[k], comps))
        transpositions[k] = gens

    def compose(u, k, vs, arities):
        return {("pt", sum(arities)): 1}

    return Operad(ring, levels, transpositions, compose, ("pt", 1),
                  degree_cap=0)

# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------

def _basis_with_degrees(C: ChainComplex, degree_cap):
    out = []
    for n in sorted(C.modules):
        if n > degree_cap:
            continue
        for lab in C.module(n).basis:
            out.append((lab, n))
    return out


def _apply_boundary(O: Operad, k, label, degree):
    """Boundary of a basis element as {label: coefficient}."""
    C = O.level(k)
    d = C.differentials.get(degree)
    if d is None:
        return {}
    out = {}
    for (t, s), c in d.entries.items():
        if s == label:
            out[t] = c
    return out


def _scaled(ring, vec, c):
    out = {}
    for kk, v in vec.items():
        t = ring.mul(ring.normalize(c), v)
        if not ring.is_zero(t):
            out[kk] = t
    return out


def _accumulate(ring, acc, vec, c=1):
    for kk, v in vec.items():
        t = ring.add(acc.get(kk, ring.zero()),
                     ring.mul(ring.normalize(c), v))
        if ring.is_zero(t):
            acc.pop(kk, None)
        else:
            acc[kk] = t


def _arity_tuples(total_max, k):
    return itertools.product(range(1, total_max + 1), repeat=k)


def check_operad_axioms(O: Operad, arity_cap: int, degree_cap: int) -> dict:
    """Exhaustive diagram checks on basis elements within the caps.

    Covers: the symmetric group generator relations, gamma commuting with
    the differentials, both unit diagrams, associativity, and the two
    equivariance diagrams (outer block permutation and inner block sum).
    Returns {"passed", "checked", "failures"} with named witnesses.
    """
    ring = O.ring
    failures = []
    checked = 0

    for rel in O.group_relation_failures():
        failures.append({"check": "group-relations", "witness": rel})

    def deg_of(k, lab):
        return O.basis_degree(k, lab)

    def gamma_boundary_defect(k, u, js, vs):
        ds = [deg_of(js[s], vs[s]) for s in range(k)]
        du = deg_of(k, u)
        j = sum(js)
        lhs = {}
        for w, c in O.compose_basis(u, k, vs, js).items():
            _accumulate(ring, lhs,
                        _apply_boundary(O, j, w, du + sum(ds)), c)
        rhs = {}
        for u2, c in _apply_boundary(O, k, u, du).items():
            _accumulate(ring, rhs, O.compose_basis(u2, k, vs, js), c)
        sgn = (-1) ** du
        for s in range(k):
            for v2, c in _apply_boundary(O, js[s], vs[s], ds[s]).items():
                vs2 = list(vs)
                vs2[s] = v2
                _accumulate(ring, rhs, O.compose_basis(u, k, vs2, js),
                            ring.mul(ring.normalize(sgn), c))
            sgn *= (-1) ** ds[s]
        return lhs == rhs

    arities = [k for k in O.arities() if k <= arity_cap]
    for k in arities:
        outer = _basis_with_degrees(O.level(k), degree_cap)
        for js in _arity_tuples(arity_cap, k):
            if sum(js) > arity_cap or any(j not in O.levels for j in js):
                continue
            pools = [_basis_with_degrees(O.level(j), degree_cap) for j in js]
            for (u, du) in outer:
                for chosen in itertools.product(*pools):
                    vs = [lab for lab, _ in chosen]
                    total = du + sum(d for _, d in chosen)
                    if total > degree_cap:
                        continue
                    checked += 1
                    if not gamma_boundary_defect(k, u, list(js), vs):
                        failures.append({"check": "composition-chain-map",
                                         "witness": (k, u, tuple(vs))})
                    # unit diagram: gamma(u; units)
                    units = [O.unit] * k
                    if O.compose_basis(u, k, units, [1] * k) != {u: 1}:
                        failures.append({"check": "right-unit",
                                         "witness": (k, u)})
                    break_inner = False

    # left unit and equivariance / associativity sweeps
    for j in arities:
        for (v, dv) in _basis_with_degrees(O.level(j), degree_cap):
            checked += 1
            if O.compose_basis(O.unit, 1, [v], [j]) != {v: 1}:
                failures.append({"check": "left-unit", "witness": (j, v)})

    _check_equivariance(O, arity_cap, degree_cap, failures)
    _check_associativity(O, arity_cap, degree_cap, failures)

    failures.sort(key=repr)
    return {"passed": not failures, "checked": checked,
            "failures": failures}


def _act_on_label(O: Operad, k, perm, label, degree):
    """Image of a basis element under a permutation, as a dict."""
    vec = {label: O.ring.one()}
    for i in reversed(_adjacent_factorization(perm)):
        vec = O.transpositions[k][i - 1].component(degree).apply(vec)
    return vec


def _koszul_permutation_sign(degrees, perm):
    """Sign from permuting graded tensor factors: factor s moves to the
    slot where perm places it (inputs reordered as perm inverse)."""
    k = len(degrees)
    sign = 1
    for a in range(k):
        for b in range(a + 1, k):
            if perm[a] > perm[b]:
                if degrees[perm[b] - 1] * degrees[perm[a] - 1] % 2:
                    sign = -sign
    return sign


def _check_equivariance(O: Operad, arity_cap, degree_cap, failures):
    ring = O.ring
    arities = [k for k in O.arities() if 2 <= k <= arity_cap]
    for k in arities:
        outer = _basis_with_degrees(O.level(k), degree_cap)
        perms = list(itertools.permutations(range(1, k + 1)))[1:]
        for js in _arity_tuples(arity_cap, k):
            if sum(js) > arity_cap or any(j not in O.levels for j in js):
                continue
            pools = [_basis_with_degrees(O.level(j), degree_cap) for j in js]
            for (u, du) in outer:
                for chosen in itertools.product(*pools):
                    if du + sum(d for _, d in chosen) > degree_cap:
                        continue
                    vs = [lab for lab, _ in chosen]
                    ds = [d for _, d in chosen]
                    for perm in perms:
                        # outer action on u, same inputs
                        lhs = {}
                        for u2, c in _act_on_label(O, k, perm, u,
                                                   du).items():
                            _accumulate(ring, lhs,
                                        O.compose_basis(u2, k, vs,
                                                        list(js)), c)
                        # permuted inputs, then the block permutation of
                        # the output, with the Koszul sign of the input
                        # rearrangement
                        vs_in = [vs[perm[s] - 1] for s in range(k)]
                        js_in = [js[perm[s] - 1] for s in range(k)]
                        sgn = _koszul_permutation_sign(ds, perm)
                        inner = O.compose_basis(u, k, vs_in, js_in)
                        block = _block_permutation(js, perm)
                        j = sum(js)
                        rhs = {}
                        for w, c in inner.items():
                            dd = du + sum(ds)
                            img = _act_on_label(O, j, block, w, dd)
                            _accumulate(ring, rhs, img,
                                        ring.mul(ring.normalize(sgn), c))
                        if lhs != rhs:
                            failures.append(
                                {"check": "outer-equivariance",
                                 "witness": (k, u, tuple(vs), perm)})
                    # inner block-sum equivariance
                    for s in range(k):
                        if js[s] < 2:
                            continue
                        for tau in list(itertools.permutations(
                                range(1, js[s] + 1)))[1:]:
                            lhs = {}
                            for v2, c in _act_on_label(
                                    O, js[s], tau, vs[s], ds[s]).items():
                                vs2 = list(vs)
                                vs2[s] = v2
                                _accumulate(ring, lhs,
                                            O.compose_basis(u, k, vs2,
                                                            list(js)), c)
                            blocksum = _block_sum(js, s, tau)
                            inner = O.compose_basis(u, k, vs, list(js))
                            rhs = {}
                            j = sum(js)
                            for w, c in inner.items():
                                dd = du + sum(ds)
                                img = _act_on_label(O, j, blocksum, w, dd)
                                _accumulate(ring, rhs, img, c)
                            if lhs != rhs:
                                failures.append(
                                    {"check": "inner-equivariance",
                                     "witness": (k, u, tuple(vs), s + 1,
                                                 tau)})


def _block_permutation(js, perm):
    """Permutation of {1..sum js} moving the s-th block (size js[s-1]) to
    where perm sends it, preserving the order inside blocks."""
    k = len(js)
    js_in = [js[perm[s] - 1] for s in range(k)]
    offin = [0]
    for x in js_in:
        offin.append(offin[-1] + x)
    offout = [0]
    for x in js:
        offout.append(offout[-1] + x)
    out = [0] * sum(js)
    for s in range(k):
        for local in range(1, js_in[s] + 1):
            out[offin[s] + local - 1] = offout[perm[s] - 1] + local
    return tuple(out)


def _block_sum(js, s, tau):
    """id + ... + tau + ... + id acting on the s-th block (0-based s)."""
    off = sum(js[:s])
    out = list(range(1, sum(js) + 1))
    for local in range(js[s]):
        out[off + local] = off + tau[local]
    return tuple(out)


def _check_associativity(O: Operad, arity_cap, degree_cap, failures):
    ring = O.ring
    arities = [k for k in O.arities() if k <= arity_cap]
    for k in arities:
        outer = _basis_with_degrees(O.level(k), degree_cap)
        for js in _arity_tuples(arity_cap, k):
            if sum(js) > arity_cap or any(j not in O.levels for j in js):
                continue
            j = sum(js)
            pools = [_basis_with_degrees(O.level(x), degree_cap) for x in js]
            for ls in _arity_tuples(arity_cap, j):
                if sum(ls) > arity_cap or any(l not in O.levels for l in ls):
                    continue
                wpools = [_basis_with_degrees(O.level(x), degree_cap)
                          for x in ls]
                for (u, du) in outer:
                    for chosen in itertools.product(*pools):
                        vs = [lab for lab, _ in chosen]
                        dvs = [d for _, d in chosen]
                        for wchosen in itertools.product(*wpools):
                            ws = [lab for lab, _ in wchosen]
                            dws = [d for _, d in wchosen]
                            if du + sum(dvs) + sum(dws) > degree_cap:
                                continue
                            if not _associativity_holds(
                                    O, ring, k, u, js, vs, dvs, ls, ws,
                                    dws, du):
                                failures.append(
                                    {"check": "associativity",
                                     "witness": (k, u, tuple(vs),
                                                 tuple(ws))})


def _associativity_holds(O, ring, k, u, js, vs, dvs, ls, ws, dws, du):
    left = {}
    for m, c in O.compose_basis(u, k, vs, list(js)).items():
        _accumulate(ring, left,
                    O.compose_basis(m, sum(js), ws, list(ls)), c)
    prefix = [0]
    for x in js:
        prefix.append(prefix[-1] + x)
    koszul = 1
    inner_results = []
    for s in range(k):
        block = ws[prefix[s]:prefix[s + 1]]
        bls = list(ls[prefix[s]:prefix[s + 1]])
        dblock = sum(dws[prefix[s]:prefix[s + 1]])
        dlater = sum(dvs[s + 1:])
        if (dblock * dlater) % 2:
            koszul = -koszul
        inner_results.append(O.compose_basis(vs[s], js[s], block, bls))
    right = {}
    for combo in itertools.product(*[list(m.items())
                                     for m in inner_results]):
        newvs = [lab for lab, _ in combo]
        coeff = ring.normalize(koszul)
        for _, c in combo:
            coeff = ring.mul(coeff, c)
        _accumulate(ring, right,
                    O.compose_basis(u, k, newvs, [sum(ls[prefix[s]:
                                                        prefix[s + 1]])
                                                  for s in range(k)]),
                    coeff)
    return left == right


def check_einfinity(O: Operad, arity_cap: int, degree_cap: int) -> dict:
    """Freeness of the symmetric group actions and acyclicity per level.

    Freeness: every non-identity permutation must permute the basis in
    each degree with no fixed basis vector.  Acyclicity: homology is
    rank 1 in degree 0 and vanishes in degrees 1..cap.
    """
    failures = []
    checked = 0
    ring = O.ring
    for k in [k for k in O.arities() if k <= arity_cap]:
        C = O.level(k)
        for perm in list(itertools.permutations(range(1, k + 1)))[1:]:
            act = O.permutation_action(k, perm)
            for n in sorted(C.modules):
                if n > degree_cap:
                    continue
                f = act.component(n)
                cols = {}
                for (t, s), c in f.entries.items():
                    cols.setdefault(s, []).append((t, c))
                for s in C.module(n).basis:
                    checked += 1
                    col = cols.get(s, [])
                    if len(col) != 1:
                        failures.append({"check": "freeness",
                                         "witness": (k, perm, n, s)})
                        continue
                    t, c = col[0]
                    if t == s or ring.is_zero(c):
                        failures.append({"check": "freeness",
                                         "witness": (k, perm, n, s)})
        for n in range(degree_cap + 1):
            checked += 1
            H = homology(C, n)
            want_rank = 1 if n == 0 else 0
            if H.free_rank != want_rank or tuple(H.divisors) != ():
                failures.append({"check": "acyclicity",
                                 "witness": (k, n, H.free_rank,
                                             tuple(H.divisors))})
    failures.sort(key=repr)
    return {"passed": not failures, "checked": checked,
            "failures": failures}

# ---------------------------------------------------------------------------
# interval-cut action on normalized cochains
# ---------------------------------------------------------------------------

def _compositions(total, parts):
    if parts == 0:
        yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _cut_sign(u, lens, tpts):
    """Sign of one interval-cut term.

    Three factors: the Koszul sign of regrouping the sequence
    interval_1, [caesura_1], interval_2, ... by value (intervals graded
    by their length, caesuras by 1); a factor -1 per pair of caesuras
    whose occurrence spans meet (crossing, nested, or sharing an
    endpoint); and a factor -1 per caesura whose interval ends at an
    odd vertex.
    """
    info = letter_info(u)
    k = len(set(u))
    poss = {}
    for i, v in enumerate(u):
        poss.setdefault(v, []).append(i)
    src = []
    for i in range(len(u)):
        src.append((("i", i), lens[i]))
        if info[i][2]:
            src.append((("c", i), 1))
    tgt = []
    for s in range(1, k + 1):
        for i in poss[s]:
            tgt.append((("i", i), lens[i]))
            if info[i][2]:
                tgt.append((("c", i), 1))
    pos = {it[0]: j for j, it in enumerate(src)}
    inv = 0
    for a in range(len(tgt)):
        for b in range(a + 1, len(tgt)):
            if pos[tgt[a][0]] > pos[tgt[b][0]]:
                inv += tgt[a][1] * tgt[b][1]
    spans = [(i, poss[v][t]) for i, (v, t, c) in enumerate(info) if c]
    extra = sum(tpts[i + 1] for i, _ in spans)
    for a in range(len(spans)):
        for b in range(a + 1, len(spans)):
            (i, i2), (j, j2) = sorted([spans[a], spans[b]])
            if i < j <= i2:
                extra += 1
    return -1 if (inv + extra) % 2 else 1


def interval_cut_action(X: FiniteSimplicialSet, ring: RingSpec, u, k, xs):
    """theta(u; x_1..x_k) on normalized cochains of X.

    xs: list of (cochain, degree) pairs, where a cochain is either a
    basis simplex label or a dict mapping labels to coefficients.  A
    surjection of degree d lowers the total degree by d: the result is
    the cochain whose value on an n-simplex is the signed sum over all
    ways of cutting 0..n into k+d intervals, assigned to the values of
    u in order, of the product of the x_s evaluated on the
    concatenations of their intervals.
    """
    d = len(u) - k
    ns = [deg for _, deg in xs]
    n = sum(ns) - d
    if n < 0 or n not in X.dims():
        return {}
    occ = occurrence_counts(u)
    poss = {}
    for i, v in enumerate(u):
        poss.setdefault(v, []).append(i)
    per_value = []
    for s in range(1, k + 1):
        free = ns[s - 1] - occ[s] + 1
        if free < 0:
            return {}
        per_value.append(list(_compositions(free, occ[s])))
    out = {}
    for sigma in X.simplices(n):
        sx = X.nondegenerate(sigma)
        total = ring.zero()
        for combo in itertools.product(*per_value):
            lens = [0] * len(u)
            used = {s: 0 for s in range(1, k + 1)}
            for i, v in enumerate(u):
                t = used[v] = used[v] + 1
                lens[i] = combo[v - 1][t - 1]
            tpts = [0]
            for l in lens:
                tpts.append(tpts[-1] + l)
            coeff = ring.one()
            for s in range(1, k + 1):
                verts = []
                for i in poss[s]:
                    verts.extend(range(tpts[i], tpts[i + 1] + 1))
                if any(verts[j] == verts[j + 1]
                       for j in range(len(verts) - 1)):
                    coeff = ring.zero()
                    break
                face = X.vertex_face(sx, verts)
                if face.is_degenerate:
                    coeff = ring.zero()
                    break
                entry = xs[s - 1][0]
                if isinstance(entry, dict):
                    c = entry.get(face.base, ring.zero())
                    if ring.is_zero(c):
                        coeff = ring.zero()
                        break
                    coeff = ring.mul(coeff, ring.normalize(c))
                elif face.base != entry:
                    coeff = ring.zero()
                    break
            if ring.is_zero(coeff):
                continue
            sgn = ring.normalize(_cut_sign(u, lens, tpts))
            total = ring.add(total, ring.mul(sgn, coeff))
        if not ring.is_zero(total):
            out[sigma] = total
    return out


def cochain_algebra(X: FiniteSimplicialSet, ring: RingSpec,
                    arity_cap: int, degree_cap: int = None) -> OperadAlgebra:
    """Normalized cochains of X as an algebra over the surjection operad.

    The arity-2 degree-0 element acts as the cup product and the
    degree-i elements as the cup-i products.
    """
    if degree_cap is None:
        degree_cap = max(X.dims(), default=0) * max(arity_cap, 1)
    O = surjection_operad(arity_cap, ring, degree_cap)
    A = cochains(X, ring)

    def theta(u, k, xs):
        return interval_cut_action(X, ring, u, k, xs)

    alg = OperadAlgebra(O, A, theta)
    alg.space = X
    return alg


def cup_product(X: FiniteSimplicialSet, ring: RingSpec, x, p, y, q):
    """x cup y on cochain basis elements, via the arity-2 action."""
    return interval_cut_action(X, ring, (1, 2), 2, [(x, p), (y, q)])


def cup_i_product(X: FiniteSimplicialSet, ring: RingSpec, i, x, p, y, q):
    """The cup-i product: the degree-i arity-2 surjection acting on x, y."""
    word = tuple((1, 2)[j % 2] for j in range(i + 2))
    return interval_cut_action(X, ring, word, 2, [(x, p), (y, q)])

# ---------------------------------------------------------------------------
# algebra axiom checks
# ---------------------------------------------------------------------------

def _coboundary_of_basis(C: ChainComplex, lab, n):
    d = C.differentials.get(n)
    if d is None:
        return {}
    return {t: c for (t, s), c in d.entries.items() if s == lab}


def _theta_linear(alg: OperadAlgebra, u, k, xs_mixed):
    """theta extended linearly: entries of xs_mixed may be a basis pair
    (label, degree) or a pair (dict, degree)."""
    slots = []
    for entry, deg in xs_mixed:
        if isinstance(entry, dict):
            slots.append([((lab, deg), c) for lab, c in entry.items()])
        else:
            slots.append([((entry, deg), 1)])
    ring = alg.complex.ring
    out = {}
    for combo in itertools.product(*slots):
        xs = [pair for pair, _ in combo]
        coeff = ring.one()
        for _, c in combo:
            coeff = ring.mul(coeff, ring.normalize(c))
        _accumulate(ring, out, alg.theta(u, k, xs), coeff)
    return out


def check_algebra_axioms(alg: OperadAlgebra, arity_cap: int,
                         degree_cap: int) -> dict:
    """Exhaustive checks of the algebra diagrams on basis elements.

    Covers: theta commuting with the differentials, the unit acting as
    the identity, compatibility of theta with the operad composition,
    and the commutativity diagram (the symmetric action on the operad
    side absorbs permutations of the arguments up to Koszul signs).
    """
    O = alg.operad
    C = alg.complex
    ring = C.ring
    failures = []
    checked = 0
    adeg = [(lab, n) for n in sorted(C.modules) if n <= degree_cap
            for lab in C.module(n).basis]

    def theta(u, k, xs):
        return alg.theta(u, k, list(xs))

    arities = [k for k in O.arities() if k <= arity_cap]
    for k in arities:
        ops = _basis_with_degrees(O.level(k), degree_cap)
        for (u, du) in ops:
            for xs in itertools.product(adeg, repeat=k):
                ns = [n for _, n in xs]
                if sum(ns) > degree_cap:
                    continue
                checked += 1
                # differential compatibility
                n_out = sum(ns) - du
                lhs = {}
                for lab, c in theta(u, k, xs).items():
                    _accumulate(ring, lhs,
                                _coboundary_of_basis(C, lab, n_out), c)
                rhs = {}
                for u2, c in _apply_boundary(O, k, u, du).items():
                    _accumulate(ring, rhs, theta(u2, k, xs), c)
                sgn = (-1) ** du
                for s in range(k):
                    for lab2, c in _coboundary_of_basis(
                            C, xs[s][0], ns[s]).items():
                        xs2 = list(xs)
                        xs2[s] = (lab2, ns[s] + 1)
                        _accumulate(ring, rhs, theta(u, k, xs2),
                                    ring.mul(ring.normalize(sgn), c))
                    sgn *= (-1) ** ns[s]
                if lhs != rhs:
                    failures.append({"check": "action-chain-map",
                                     "witness": (k, u, tuple(xs))})
                # commutativity diagram
                for perm in list(itertools.permutations(
                        range(1, k + 1)))[1:]:
                    acted = {}
                    for u2, c in _act_on_label(O, k, perm, u, du).items():
                        _accumulate(ring, acted, theta(u2, k, xs), c)
                    xs_in = [xs[perm[s] - 1] for s in range(k)]
                    sgn = _koszul_permutation_sign(ns, perm)
                    direct = _scaled(ring, theta(u, k, xs_in), sgn)
                    if acted != direct:
                        failures.append({"check": "commutativity",
                                         "witness": (k, u, tuple(xs),
                                                     perm)})

    # unit diagram
    for (lab, n) in adeg:
        checked += 1
        if theta(O.unit, 1, [(lab, n)]) != {lab: ring.one()}:
            failures.append({"check": "unit-action", "witness": (lab, n)})

    # composition compatibility
    for k in arities:
        ops = _basis_with_degrees(O.level(k), degree_cap)
        for js in _arity_tuples(arity_cap, k):
            if sum(js) > arity_cap or any(j not in O.levels for j in js):
                continue
            pools = [_basis_with_degrees(O.level(j), degree_cap)
                     for j in js]
            prefix = [0]
            for x in js:
                prefix.append(prefix[-1] + x)
            for (u, du) in ops:
                for chosen in itertools.product(*pools):
                    vs = [lab for lab, _ in chosen]
                    dvs = [d for _, d in chosen]
                    for xs in itertools.product(adeg, repeat=sum(js)):
                        ns = [n for _, n in xs]
                        if du + sum(dvs) + sum(ns) > degree_cap:
                            continue
                        checked += 1
                        lhs = {}
                        for w, c in O.compose_basis(u, k, vs,
                                                    list(js)).items():
                            _accumulate(ring, lhs,
                                        theta(w, sum(js), xs), c)
                        sgn = 1
                        inner = []
                        for s in range(k):
                            block = xs[prefix[s]:prefix[s + 1]]
                            before = sum(ns[:prefix[s]])
                            if (dvs[s] * before) % 2:
                                sgn = -sgn
                            val = theta(vs[s], js[s], block)
                            m = sum(n for _, n in block) - dvs[s]
                            inner.append((val, m))
                        rhs = _scaled(ring,
                                      _theta_linear(alg, u, k, inner),
                                      sgn)
                        if lhs != rhs:
                            failures.append(
                                {"check": "composition-compatibility",
                                 "witness": (k, u, tuple(vs), tuple(xs))})
    failures.sort(key=repr)
    return {"passed": not failures, "checked": checked,
            "failures": failures}


def weighted_wrap(O: Operad, weights) -> WeightedOperad:
    """One copy of every level per weight; composition adds weights."""
    return WeightedOperad(O, weights)


def check_weight_additivity(W: WeightedOperad, arity_cap: int,
                            degree_cap: int) -> dict:
    """gamma must land in the weight that is the sum of the inputs'."""
    O = W.operad
    failures = []
    checked = 0
    for k in [k for k in O.arities() if k <= arity_cap]:
        for js in _arity_tuples(arity_cap, k):
            if sum(js) > arity_cap or any(j not in O.levels for j in js):
                continue
            pools = [_basis_with_degrees(O.level(j), degree_cap)
                     for j in js]
            for (u, du) in _basis_with_degrees(O.level(k), degree_cap):
                for chosen in itertools.product(*pools):
                    if du + sum(d for _, d in chosen) > degree_cap:
                        continue
                    for ws in itertools.product(W.weights,
                                                repeat=k + 1):
                        if sum(ws) not in W.weights:
                            continue
                        checked += 1
                        inputs = [(lab, m) for (lab, _), m
                                  in zip(chosen, ws[1:])]
                        res = W.compose_basis((u, ws[0]), k, inputs,
                                              list(js))
                        for (w, m) in res:
                            if m != sum(ws):
                                failures.append(
                                    {"check": "weight-additivity",
                                     "witness": (k, u, ws, w, m)})
    failures.sort(key=repr)
    return {"passed": not failures, "checked": checked,
            "failures": failures}

"""Exact sparse/dense linear algebra over Z, Z/m and Q.

Everything here works on dense row-major lists of exact ring elements;
the desk-scale matrices this engine meets (<= a few thousand nonzeros)
make dense exact arithmetic the simplest correct choice.  Smith normal
form uses smallest-absolute-value pivoting with (row, column) tie-break,
so all outputs are deterministic and suitable for golden tests.
"""

from __future__ import annotations

import random

from .freemod import FreeModule, FreeModuleMap
from .rings import RingSpec, ZZ


# ---------------------------------------------------------------------------
# integer Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form_matrix(m_rows):
    """Return (S, U, V) with U*M*V = S, U, V unimodular, S diagonal with
    d1 | d2 | ... and nonnegative diagonal entries."""
    R = len(m_rows)
    C = len(m_rows[0]) if R else 0
    S = [list(map(int, row)) for row in m_rows]
    U = [[1 if i == j else 0 for j in range(R)] for i in range(R)]
    V = [[1 if i == j else 0 for j in range(C)] for i in range(C)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):          # row_i += c * row_j
        S[i] = [a + c * b for a, b in zip(S[i], S[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def add_col(i, j, c):          # col_i += c * col_j
        for row in S:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while True:
        pivot = None
        for i in range(t, R):
            for j in range(t, C):
                if S[i][j] != 0:
                    cand = (abs(S[i][j]), i, j)
                    if pivot is None or cand < pivot:
                        pivot = cand
        if pivot is None:
            break
        _, pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        # clear row and column t; pivot may need re-selection after reduction
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, R):
                if S[i][t] != 0:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, C):
                if S[t][j] != 0:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        if S[t][t] < 0:
            negate_row(t)
        t += 1
        if t >= min(R, C):
            break

    # enforce divisibility d1 | d2 | ...
    rank = t
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            a, b = S[i][i], S[i + 1][i + 1]
            if b % a != 0:
                # fold entry b into position i via the classical 2x2 trick
                add_col(i, i + 1, 1)
                q = S[i + 1][i] // S[i][i]
                add_row(i + 1, i, -q)
                if S[i + 1][i] != 0:
                    # gcd landed below; redo the 2x2 block from scratch
                    _rediagonalize_block(S, U, V, i)
                else:
                    add_col(i + 1, i, -(S[i][i + 1] // S[i][i]))
                if S[i][i] < 0:
                    negate_row(i)
                if S[i + 1][i + 1] < 0:
                    negate_row(i + 1)
                changed = True
    return S, U, V


def _rediagonalize_block(S, U, V, t):
    """Re-run elimination on the trailing block starting at (t, t)."""
    R, C = len(S), len(S[0])
    while True:
        pivot = None
        for i in range(t, R):
            for j in range(t, C):
                if S[i][j] != 0:
                    cand = (abs(S[i][j]), i, j)
                    if pivot is None or cand < pivot:
                        pivot = cand
        if pivot is None:
            return
        _, pi, pj = pivot
        if pi != t:
            S[t], S[pi] = S[pi], S[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in S:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]
        done = True
        for i in range(t + 1, R):
            if S[i][t] != 0:
                q = S[i][t] // S[t][t]
                S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if S[i][t] != 0:
                    done = False
        for j in range(t + 1, C):
            if S[t][j] != 0:
                q = S[t][j] // S[t][t]
                for row in S:
                    row[j] -= q * row[t]
                for row in V:
                    row[j] -= q * row[t]
                if S[t][j] != 0:
                    done = False
        if done:
            if S[t][t] < 0:
                S[t] = [-a for a in S[t]]
                U[t] = [-a for a in U[t]]
            t += 1
            if t >= min(R, C):
                return


def smith_normal_form(M: FreeModuleMap):
    """SNF of an integer FreeModuleMap: returns (S, U, V) with U o M o V = S."""
    if M.ring != ZZ:
        raise ValueError("smith_normal_form requires coefficients in Z")
    S, U, V = smith_normal_form_matrix(M.to_matrix())
    s_map = FreeModuleMap.from_matrix(M.source, M.target, S)
    u_map = FreeModuleMap.from_matrix(M.target, M.target, U)
    v_map = FreeModuleMap.from_matrix(M.source, M.source, V)
    return s_map, u_map, v_map


def det_unimodular(rows):
    """Determinant of a small integer matrix by fraction-free expansion."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    det = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        det += (-1) ** j * rows[0][j] * det_unimodular(minor)
    return det


# ---------------------------------------------------------------------------
# echelon forms
# ---------------------------------------------------------------------------

def rref(rows, ring: RingSpec):
    """Reduced row echelon form over a field; returns (rref_rows, pivot_cols)."""
    if not ring.is_field():
        raise ValueError("rref needs a field")
    A = [[ring.normalize(x) for x in row] for row in rows]
    R = len(A)
    C = len(A[0]) if R else 0
    pivots = []
    r = 0
    for c in range(C):
        pr = None
        for i in range(r, R):
            if not ring.is_zero(A[i][c]):
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = ring.inv(A[r][c])
        A[r] = [ring.mul(inv, x) for x in A[r]]
        for i in range(R):
            if i != r and not ring.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == R:
            break
    return A, pivots


def hnf_rows(rows):
    """Row-style Hermite normal form of an integer matrix (unique echelon
    with positive pivots and entries above pivots reduced)."""
    A = [list(map(int, r)) for r in rows]
    R = len(A)
    C = len(A[0]) if R else 0
    r = 0
    for c in range(C):
        # gcd-reduce column c below row r
        while True:
            nz = [i for i in range(r, R) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(A[i][c]), i))
            A[r], A[i0] = A[i0], A[r]
            done = True
            for i in range(r + 1, R):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
        if r < R and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
            if r == R:
                break
    A = [row for row in A if any(row)]
    return A


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def kernel_matrix(rows, ring: RingSpec):
    """Basis of ker(A) as a list of column vectors, canonicalized.

    Over a field: RREF null space.  Over Z: SNF kernel lattice, put in HNF.
    Over Z/m (m composite): integer kernel of [A | mI], reduced mod m.
    """
    R = len(rows)
    C = len(rows[0]) if R else 0
    if C == 0:
        return []
    if R == 0:
        eye = []
        for j in range(C):
            v = [ring.zero()] * C
            v[j] = ring.one()
            eye.append(v)
        return eye
    if ring.is_field():
        A, pivots = rref(rows, ring)
        free = [c for c in range(C) if c not in pivots]
        basis = []
        for fc in free:
            v = [ring.zero()] * C
            v[fc] = ring.one()
            for r_i, pc in enumerate(pivots):
                v[pc] = ring.neg(A[r_i][fc])
            basis.append(v)
        return basis
    if ring.kind == "Z":
        S, U, V = smith_normal_form_matrix(rows)
        rank = sum(1 for i in range(min(R, C)) if S[i][i] != 0)
        cols = []
        for j in range(rank, C):
            cols.append([V[i][j] for i in range(C)])
        if not cols:
            return []
        h = hnf_rows([list(col) for col in cols])
        return [list(row) for row in h]
    # Z/m, m composite: integer kernel of [A | mI] projected to the A-part
    m = ring.modulus
    lifted = [[int(x) for x in row] + [m if j == i else 0 for j in range(R)]
              for i, row in enumerate(rows)]
    int_kernel = kernel_matrix(lifted, ZZ)
    cand = [[ring.normalize(v[j]) for j in range(C)] for v in int_kernel]
    cand = [v for v in cand if any(not ring.is_zero(x) for x in v)]
    # deduplicate the mod-m span deterministically
    seen = []
    for v in sorted(cand):
        if v not in seen:
            seen.append(v)
    return seen


def kernel(M: FreeModuleMap) -> FreeModuleMap:
    """Inclusion map of ker(M) into M.source, with a canonical basis."""
    cols = kernel_matrix(M.to_matrix(), M.ring)
    src = FreeModule(M.ring, [("ker", i) for i in range(len(cols))])
    entries = {}
    for j, col in enumerate(cols):
        for i, c in enumerate(col):
            entries[(M.source.basis[i], ("ker", j))] = c
    return FreeModuleMap(src, M.source, entries)


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

def solve_matrix(rows, b, ring: RingSpec, rng: random.Random | None = None):
    """One solution x of A x = b over the ring, or None if unsolvable.

    Free variables default to zero; pass an rng to sample them instead
    (used to generate independently seeded solutions of the same system).
    """
    R = len(rows)
    C = len(rows[0]) if R else 0
    if len(b) != R:
        raise ValueError("dimension mismatch in solve")
    if C == 0:
        return None if any(not ring.is_zero(x) for x in b) else []
    if ring.is_field():
        aug = [list(row) + [b[i]] for i, row in enumerate(rows)]
        A, pivots = rref(aug, ring)
        for row in A:
            if all(ring.is_zero(x) for x in row[:-1]) and not ring.is_zero(row[-1]):
                return None
        if C in pivots:
            return None
        x = [ring.zero()] * C
        free = [c for c in range(C) if c not in pivots]
        if rng is not None:
            for fc in free:
                x[fc] = ring.normalize(rng.randrange(0, 64))
        for r_i, pc in enumerate(pivots):
            val = A[r_i][C]
            for fc in free:
                val = ring.sub(val, ring.mul(A[r_i][fc], x[fc]))
            x[pc] = val
        return x
    if ring.kind == "Z":
        S, U, V = smith_normal_form_matrix(rows)
        ub = [sum(U[i][j] * b[j] for j in range(R)) for i in range(R)]
        rank = sum(1 for i in range(min(R, C)) if S[i][i] != 0)
        z = [0] * C
        for i in range(min(R, C)):
            if S[i][i] != 0:
                if ub[i] % S[i][i] != 0:
                    return None
                z[i] = ub[i] // S[i][i]
            elif ub[i] != 0:
                return None
        for i in range(min(R, C), R):
            if ub[i] != 0:
                return None
        if rng is not None:
            for i in range(rank, C):
                z[i] = rng.randrange(-8, 9)
        return [sum(V[i][j] * z[j] for j in range(C)) for i in range(C)]
    # Z/m with m composite: lift to Z with the extra relations m*e_i = 0
    m = ring.modulus
    lifted = [[int(x) for x in row] + [m if j == i else 0 for j in range(R)]
              for i, row in enumerate(rows)]
    bb = [int(x) for x in b]
    sol = solve_matrix(lifted, bb, ZZ, rng=rng)
    if sol is None:
        return None
    return [ring.normalize(sol[j]) for j in range(C)]


def solve_linear(M: FreeModuleMap, b, rng: random.Random | None = None):
    """Solve M x = b for a sparse target-indexed vector b.

    Returns a sparse source-indexed vector, or None when unsolvable."""
    ring = M.ring
    for t in b:
        if t not in M.target.index:
            raise ValueError(f"vector label {t!r} not in target basis")
    bvec = [ring.normalize(b.get(t, ring.zero())) for t in M.target.basis]
    x = solve_matrix(M.to_matrix(), bvec, ring, rng=rng)
    if x is None:
        return None
    out = {}
    for j, s in enumerate(M.source.basis):
        c = ring.normalize(x[j])
        if not ring.is_zero(c):
            out[s] = c
    return out


# ---------------------------------------------------------------------------
# quotients (homology backends)
# ---------------------------------------------------------------------------

def integer_quotient(ker_cols, im_cols):
    """Invariant factors of (lattice spanned by ker_cols)/(lattice spanned by
    im_cols) inside Z^n; im must be contained in ker.  Returns (free_rank,
    [divisors > 1])."""
    k = len(ker_cols)
    if k == 0:
        return 0, []
    n = len(ker_cols[0])
    K = [[ker_cols[j][i] for j in range(k)] for i in range(n)]
    coords = []
    for col in im_cols:
        x = solve_matrix(K, list(col), ZZ)
        if x is None:
            raise ValueError("image is not contained in kernel")
        coords.append(x)
    if not coords:
        return k, []
    Cm = [[coords[j][i] for j in range(len(coords))] for i in range(k)]
    S, _, _ = smith_normal_form_matrix(Cm)
    divisors = []
    rank = 0
    for i in range(min(len(S), len(S[0]) if S else 0)):
        d = S[i][i]
        if d != 0:
            rank += 1
            if d != 1:
                divisors.append(d)
    return k - rank, sorted(divisors)


class CosetReducer:
    """Canonical coset representatives modulo a subspace over a field.

    Build from the columns spanning the subspace; reduce(v) then returns
    the canonical representative of v + subspace, so two vectors are in
    the same coset iff their reductions are equal.
    """

    def __init__(self, ring: RingSpec, span_cols, dim):
        self.ring = ring
        self.dim = dim
        rows = [list(col) for col in span_cols]
        if rows:
            A, pivots = rref(rows, ring)
            self.rows = [A[i] for i in range(len(pivots))]
            self.pivots = pivots
        else:
            self.rows = []
            self.pivots = []

    def reduce(self, v):
        ring = self.ring
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not ring.is_zero(c):
                v = [ring.sub(x, ring.mul(c, y)) for x, y in zip(v, row)]
        return v

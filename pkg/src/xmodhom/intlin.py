"""Exact linear algebra over the integers.

Smith normal form, finitely generated abelian groups presented as integer
matrix cokernels, chain complexes, bicomplexes, total complexes, homology
with explicit cycle representatives, induced and connecting maps.

Matrices are 2-D numpy arrays.  Working dtype is int64; routines that can
grow entries (Hermite/Smith reduction) monitor magnitudes and promote to
Python-int (object dtype) arrays before any operation could overflow, so
all results are exact.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

# promote to arbitrary precision before a linear combination could reach this
_GUARD = 1 << 62


class SizeCapError(Exception):
    """A requested computation exceeds the configured desk-scale cap."""


class _Overflow(Exception):
    """Internal: int64 working matrix got too large, restart in object mode."""


def as_matrix(m, rows=None, cols=None):
    """Coerce to a 2-D integer ndarray, with an explicit shape for empties."""
    a = np.asarray(m)
    if a.size == 0:
        r = rows if rows is not None else (a.shape[0] if a.ndim == 2 else 0)
        c = cols if cols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return np.zeros((r, c), dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if a.dtype == object:
        return a
    return a.astype(np.int64)


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n):
    return np.eye(n, dtype=np.int64)


def _egcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    old_r, r = int(a), int(b)
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(t)) for t in a.flat)
    return int(np.abs(a).max())


def _demote(m):
    """Return an int64 copy when entries fit, else the object array."""
    if m.dtype != object:
        return m
    if m.size and _maxabs(m) >= _GUARD:
        return m
    return m.astype(np.int64)


class ColumnReduction:
    """Incremental integer column echelon form of a stream of columns.

    Columns are reduced against the pivot columns found so far; echelon
    structure is maintained on the first ``rows`` entries.  With
    ``track=True`` callers feed columns stacked over unit vectors, enabling
    exact integer solves and kernel extraction.

    Every pivot update is a unimodular column operation, so the pivot
    columns always span exactly the lattice generated by the columns fed
    in so far.  Fully deterministic.
    """

    def __init__(self, rows, track=False):
        self.rows = rows
        self.track = track
        self.pivots = []       # (pivot_row, column), sorted by pivot_row
        self._prs = []         # pivot rows, kept parallel to ``pivots``
        self.n_fed = 0
        self.kernel_cols = []  # bottom parts of columns that reduced to zero
        self._object_mode = False

    def _promote(self):
        if not self._object_mode:
            self._object_mode = True
            self.pivots = [(r, c.astype(object)) for r, c in self.pivots]

    def _combine(self, col, x, piv, y):
        """x*col + y*piv, promoting before any possible int64 overflow."""
        if not self._object_mode:
            bound = abs(x) * _maxabs(col) + abs(y) * _maxabs(piv)
            if bound >= _GUARD:
                self._promote()
        if self._object_mode:
            if col.dtype != object:
                col = col.astype(object)
            if piv.dtype != object:
                piv = piv.astype(object)
        return x * col + y * piv

    def reduce(self, col, exact_only=False):
        """Reduce ``col`` against the pivots.  With ``exact_only`` the pivots
        are left untouched and reduction fails (returns None) as soon as a
        non-divisible leading entry is met; otherwise gcd steps update the
        pivots.  Returns the residual column, whose first nonzero top entry
        (if any) sits at a row with no pivot.

        The pivots stay in column echelon form: each pivot column is zero
        above its own pivot row.  Reduction therefore always works at the
        current first nonzero row of ``col``, which keeps every gcd update
        a combination of two columns vanishing above that row.
        """
        if self._object_mode and col.dtype != object:
            col = col.astype(object)
        while True:
            r = self._first_nonzero_top(col)
            if r is None:
                return col
            k = bisect.bisect_left(self._prs, r)
            if k == len(self._prs) or self._prs[k] != r:
                return col
            pr, piv = self.pivots[k]
            a = int(piv[r])
            b = int(col[r])
            if b % a == 0:
                col = self._combine(col, 1, piv, -(b // a))
            elif exact_only:
                return None
            else:
                g, x, y = _egcd(a, b)
                new_piv = self._combine(piv, x, col, y)
                col = self._combine(col, a // g, piv, -(b // g))
                self.pivots[k] = (pr, new_piv)

    def _first_nonzero_top(self, col):
        top = col[: self.rows]
        if top.dtype == object:
            for i, t in enumerate(top):
                if t:
                    return i
            return None
        nz = np.nonzero(top)[0]
        return int(nz[0]) if nz.size else None

    def add(self, col):
        """Feed one column (already stacked when tracking).  Returns True if
        it reduced to zero (no new pivot)."""
        self.n_fed += 1
        col = np.array(col, copy=True)
        if col.dtype != object:
            col = col.astype(np.int64)
        col = self.reduce(col)
        r = self._first_nonzero_top(col)
        if r is None:
            if self.track:
                bottom = col[self.rows:]
                if _maxabs(bottom):
                    self.kernel_cols.append(bottom)
            return True
        if int(col[r]) < 0:
            col = -col
        idx = bisect.bisect_left(self._prs, r)
        self._prs.insert(idx, r)
        self.pivots.insert(idx, (r, col))
        return False

    def add_matrix(self, m):
        for j in range(m.shape[1]):
            self.add(m[:, j])

    @property
    def rank(self):
        return len(self.pivots)

    def is_full_unit_lattice(self):
        """True iff the pivot lattice (top block) is all of Z^rows."""
        return (len(self.pivots) == self.rows
                and all(int(c[r]) == 1 for r, c in self.pivots))

    def contains(self, col):
        """Membership of ``col`` (length ``rows``) in the column lattice."""
        col = np.asarray(col)
        big = self._object_mode or col.dtype == object or _maxabs(col) >= _GUARD
        work = col.astype(object if big else np.int64, copy=True)
        if self.track and self.pivots:
            pad = np.zeros(self.pivots[0][1].shape[0] - self.rows,
                           dtype=work.dtype)
            work = np.concatenate([work, pad])
        for pr, piv in self.pivots:
            b = int(work[pr])
            if b == 0:
                continue
            a = int(piv[pr])
            if b % a != 0:
                return False
            work = self._combine(work, 1, piv, -(b // a))
        return _maxabs(work[: self.rows]) == 0

    def solve(self, col):
        """Integer combination of the fed columns equal to ``col`` (length
        ``rows``), or None.  Requires track=True."""
        assert self.track
        col = np.asarray(col)
        big = self._object_mode or col.dtype == object or _maxabs(col) >= _GUARD
        total = self.rows + self.n_fed
        work = np.zeros(total, dtype=object if big else np.int64)
        work[: len(col)] = col
        for pr, piv in self.pivots:
            b = int(work[pr])
            if b == 0:
                continue
            a = int(piv[pr])
            if b % a != 0:
                return None
            work = self._combine(work, 1, piv, -(b // a))
        if _maxabs(work[: self.rows]):
            return None
        return -work[self.rows: self.rows + self.n_fed]

    def hnf(self):
        """Canonical column Hermite form (top block) of the lattice."""
        pivs = [(r, c[: self.rows].astype(object)) for r, c in self.pivots]
        for k, (pr, piv) in enumerate(pivs):
            v = int(piv[pr])
            for j in range(k):
                q = int(pivs[j][1][pr]) // v
                if q:
                    pivs[j] = (pivs[j][0], pivs[j][1] - q * piv)
        h = np.zeros((self.rows, len(pivs)), dtype=object)
        for k, (_, piv) in enumerate(pivs):
            h[:, k] = piv
        return _demote(h)


def column_hnf(m, rows=None):
    """Hermite basis (as columns) of the column lattice of ``m``."""
    m = as_matrix(m, rows=rows)
    if m.shape[1] > 1 and m.dtype != object:
        m = np.unique(m, axis=1)  # dedupe; order is canonical, lattice unchanged
    red = ColumnReduction(m.shape[0])
    for j in range(m.shape[1]):
        if red.is_full_unit_lattice():
            break
        red.add(m[:, j])
    return red.hnf()


def kernel_basis(m):
    """Columns generating the integer kernel lattice of ``m``."""
    m = as_matrix(m)
    rows, cols = m.shape
    red = ColumnReduction(rows, track=True)
    for j in range(cols):
        stacked = np.zeros(rows + cols, dtype=m.dtype)
        stacked[:rows] = m[:, j]
        stacked[rows + j] = 1
        red.add(stacked)
    if not red.kernel_cols:
        return zeros(cols, 0)
    k = np.stack([c.astype(object) for c in red.kernel_cols], axis=1)
    return column_hnf(k)


def solve_columns(m, b):
    """Solve m @ x = b exactly over the integers, columnwise.

    Returns x of shape (cols(m), cols(b)), or None when unsolvable.
    """
    m = as_matrix(m)
    b = as_matrix(b, rows=m.shape[0])
    rows, cols = m.shape
    red = ColumnReduction(rows, track=True)
    for j in range(cols):
        stacked = np.zeros(rows + cols, dtype=m.dtype)
        stacked[:rows] = m[:, j]
        stacked[rows + j] = 1
        red.add(stacked)
    out = np.zeros((cols, b.shape[1]), dtype=object)
    for j in range(b.shape[1]):
        x = red.solve(b[:, j])
        if x is None:
            return None
        out[:, j] = x
    return _demote(out)


def lattice_contains(m, b):
    """True iff every column of ``b`` lies in the column lattice of ``m``."""
    m = as_matrix(m)
    b = as_matrix(b, rows=m.shape[0])
    red = ColumnReduction(m.shape[0])
    red.add_matrix(m)
    return all(red.contains(b[:, j]) for j in range(b.shape[1]))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFResult:
    d: np.ndarray
    u: np.ndarray
    v: np.ndarray
    uinv: np.ndarray
    vinv: np.ndarray

    @property
    def diagonal(self):
        k = min(self.d.shape)
        return [int(self.d[i, i]) for i in range(k)]


def smith_normal_form(m):
    """Return (d, u, v) with u @ m @ v = d, u and v unimodular, d diagonal
    with non-negative entries forming a divisibility chain.

    Pivot: minimal nonzero absolute value, ties broken by lowest (row, col).
    Deterministic; arbitrary precision, so never inexact.
    """
    r = _snf(m)
    return r.d, r.u, r.v


def _snf(m, transforms=True):
    m0 = as_matrix(m)
    try:
        if m0.dtype != object:
            return _snf_work(m0.copy(), transforms, guarded=True)
    except _Overflow:
        pass
    return _snf_work(m0.astype(object), transforms, guarded=False)


def _snf_work(m, transforms, guarded):
    rows, cols = m.shape
    dtype = m.dtype
    if transforms:
        u = np.eye(rows, dtype=dtype)
        uinv = np.eye(rows, dtype=dtype)
        v = np.eye(cols, dtype=dtype)
        vinv = np.eye(cols, dtype=dtype)
    else:
        u = uinv = v = vinv = None

    def check(*mats):
        if guarded:
            for a in mats:
                if a is not None and a.size and np.abs(a).max() >= _GUARD:
                    raise _Overflow

    def pivot_pos(t):
        sub = m[t:, t:]
        if sub.size == 0:
            return None
        a = np.abs(sub)
        nz = a != 0
        if not nz.any():
            return None
        big = a.max() + 1
        a = np.where(nz, a, big)
        flat = int(np.argmin(a))  # first occurrence = lowest (row, col)
        return t + flat // (cols - t), t + flat % (cols - t)

    def row_swap(i, j):
        if i == j:
            return
        m[[i, j], :] = m[[j, i], :]
        if transforms:
            u[[i, j], :] = u[[j, i], :]
            uinv[:, [i, j]] = uinv[:, [j, i]]

    def col_swap(i, j):
        if i == j:
            return
        m[:, [i, j]] = m[:, [j, i]]
        if transforms:
            v[:, [i, j]] = v[:, [j, i]]
            vinv[[i, j], :] = vinv[[j, i], :]

    def row_negate(i):
        m[i, :] = -m[i, :]
        if transforms:
            u[i, :] = -u[i, :]
            uinv[:, i] = -uinv[:, i]

    n = min(rows, cols)
    rank = n
    for t in range(n):
        while True:
            pos = pivot_pos(t)
            if pos is None:
                rank = t
                break
            row_swap(t, pos[0])
            col_swap(t, pos[1])
            if int(m[t, t]) < 0:
                row_negate(t)
            p = int(m[t, t])
            # clear below and to the right with floored quotients
            qv = m[t + 1:, t] // p
            if qv.size and np.any(qv != 0):
                m[t + 1:, :] -= np.outer(qv, m[t, :])
                if transforms:
                    u[t + 1:, :] -= np.outer(qv, u[t, :])
                    uinv[:, t] += uinv[:, t + 1:] @ qv
                check(m, u, uinv)
            qh = m[t, t + 1:] // p
            if qh.size and np.any(qh != 0):
                m[:, t + 1:] -= np.outer(m[:, t], qh)
                if transforms:
                    v[:, t + 1:] -= np.outer(v[:, t], qh)
                    vinv[t, :] += qh @ vinv[t + 1:, :]
                check(m, v, vinv)
            if not (np.any(m[t + 1:, t] != 0) or np.any(m[t, t + 1:] != 0)):
                break
        if rank == t:
            break

    # enforce the divisibility chain d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for t in range(rank - 1):
            a, b = int(m[t, t]), int(m[t + 1, t + 1])
            if b % a == 0:
                continue
            changed = True
            # col_t += col_{t+1}, then a 2x2 unimodular row transform
            m[t + 1, t] = b
            if transforms:
                v[:, t] += v[:, t + 1]
                vinv[t + 1, :] -= vinv[t, :]
            g, x, y = _egcd(a, b)
            r0 = x * m[t, :] + y * m[t + 1, :]
            r1 = -(b // g) * m[t, :] + (a // g) * m[t + 1, :]
            m[t, :], m[t + 1, :] = r0, r1
            if transforms:
                u0 = x * u[t, :] + y * u[t + 1, :]
                u1 = -(b // g) * u[t, :] + (a // g) * u[t + 1, :]
                u[t, :], u[t + 1, :] = u0, u1
                c0 = (a // g) * uinv[:, t] + (b // g) * uinv[:, t + 1]
                c1 = -y * uinv[:, t] + x * uinv[:, t + 1]
                uinv[:, t], uinv[:, t + 1] = c0, c1
            # clear residue in column t / row t
            q = int(m[t, t + 1]) // g
            if q:
                m[:, t + 1] -= q * m[:, t]
                if transforms:
                    v[:, t + 1] -= q * v[:, t]
                    vinv[t, :] += q * vinv[t + 1, :]
            check(m, u, uinv, v, vinv)
    for t in range(rank):
        if int(m[t, t]) < 0:
            row_negate(t)

    if transforms:
        return SNFResult(_demote(m), _demote(u), _demote(v),
                         _demote(uinv), _demote(vinv))
    return SNFResult(_demote(m), None, None, None, None)


def snf_diagonal(m):
    """Diagonal of the Smith normal form, without transform matrices."""
    m = as_matrix(m)
    if m.shape[1] > m.shape[0] + 4:
        # the column lattice determines the cokernel; reduce width first
        m = column_hnf(m)
    return _snf(m, transforms=False).diagonal


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAbelian:
    """Canonical invariant-factor form Z^rank + Z/d1 + ... with d_i | d_{i+1}."""

    rank: int
    divisors: tuple

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(int(d) for d in self.divisors))
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a:
                raise ValueError("divisors must form a divisibility chain")
        if any(d < 2 for d in self.divisors):
            raise ValueError("divisors must be >= 2")

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def is_trivial(self):
        return self.rank == 0 and not self.divisors

    def __str__(self):
        terms = []
        if self.rank == 1:
            terms.append("Z")
        elif self.rank > 1:
            terms.append(f"Z^{self.rank}")
        terms.extend(f"Z/{d}" for d in self.divisors)
        return " + ".join(terms) if terms else "0"


TRIVIAL_AB = FgAbelian(0, ())
Z = FgAbelian(1, ())


@dataclass(frozen=True)
class PresentedAb:
    """Abelian group presented as coker of ``relations``: Z^gens / col-span."""

    gens: int
    relations: np.ndarray

    def __post_init__(self):
        rel = as_matrix(self.relations, rows=self.gens)
        if rel.shape[0] != self.gens:
            raise ValueError("relation matrix must have one row per generator")
        object.__setattr__(self, "relations", rel)

    @staticmethod
    def free(n):
        return PresentedAb(n, zeros(n, 0))

    @staticmethod
    def cyclic(d):
        return PresentedAb(1, np.array([[d]], dtype=np.int64))

    def is_free(self):
        return self.relations.size == 0 or not _maxabs(self.relations)


def canonical_form(a: PresentedAb) -> FgAbelian:
    diag = snf_diagonal(a.relations)
    nonzero = [d for d in diag if d]
    return FgAbelian(a.gens - len(nonzero), tuple(d for d in nonzero if d > 1))


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """Bounded complex term(N) -d_N-> ... -d_1-> term(0)."""

    def __init__(self, terms, boundaries):
        self.terms = list(terms)
        self.boundaries = [None] + [
            as_matrix(d, rows=self.terms[n - 1].gens, cols=self.terms[n].gens)
            for n, d in enumerate(boundaries, start=1)
        ]
        if len(self.boundaries) != len(self.terms):
            raise ValueError("need exactly one boundary per positive degree")
        for n in range(1, len(self.terms)):
            d = self.boundaries[n]
            if d.shape != (self.terms[n - 1].gens, self.terms[n].gens):
                raise ValueError(f"boundary {n} has shape {d.shape}")

    @property
    def length(self):
        return len(self.terms) - 1

    def boundary(self, n):
        return self.boundaries[n]

    def validate(self):
        """Check d.d = 0 and d(relations) = 0, both modulo relations."""
        for n in range(1, self.length + 1):
            d = self.boundaries[n]
            rel_lo = self.terms[n - 1].relations
            img = d @ self.terms[n].relations
            if img.size and _maxabs(img):
                if not lattice_contains(rel_lo, img):
                    raise ValueError(f"d_{n} does not preserve relations")
            if n >= 2:
                sq = self.boundaries[n - 1] @ d
                if sq.size and _maxabs(sq):
                    rel2 = self.terms[n - 2].relations
                    if not lattice_contains(rel2, sq):
                        raise ValueError(f"d_{n-1} d_{n} != 0 at degree {n}")
        return True


class HomologyData:
    """Homology group at one degree, with explicit cycle representatives.

    ``cycles`` columns are a basis of the cycle lattice in the free cover of
    the degree-n term; ``reps`` columns represent the canonical generators
    (torsion generators first, in divisor order, then free generators).
    """

    def __init__(self, group, cycles, reps, gen_divisors, solver, u, kept):
        self.group = group
        self.cycles = cycles
        self.reps = reps
        self.gen_divisors = gen_divisors  # 0 marks a free generator
        self._solver = solver
        self._u = u
        self._kept = kept

    @property
    def num_gens(self):
        return len(self.gen_divisors)

    def class_of(self, vec):
        """Canonical coordinates of a cycle given in free-cover coordinates."""
        y = self._solver.solve(np.asarray(vec))
        if y is None:
            raise ValueError("vector is not a cycle at this degree")
        c = self._u @ y if self.num_gens or len(y) else y
        out = np.zeros(self.num_gens, dtype=np.int64)
        for t, i in enumerate(self._kept):
            val = int(c[i])
            d = self.gen_divisors[t]
            out[t] = val % d if d else val
        return out


def homology_of_complex(c: ChainComplex, n: int) -> HomologyData:
    """Exact homology of ``c`` at degree ``n`` with generator lifts.

    Cycles are vectors in the free cover of term n whose boundary lands in
    the relation span of term n-1; they are quotiented by boundaries from
    degree n+1 together with the degree-n relations.
    """
    if not 0 <= n <= c.length:
        raise ValueError("degree out of range")
    term = c.terms[n]
    if n == 0:
        cycles = eye(term.gens)
    else:
        d = c.boundaries[n]
        rel_lo = c.terms[n - 1].relations
        stacked = np.hstack([d, rel_lo]) if rel_lo.shape[1] else d
        cycles = column_hnf(kernel_basis(stacked)[: term.gens, :])

    parts = [term.relations]
    if n < c.length:
        parts.append(column_hnf(c.boundaries[n + 1]))
    bmat = column_hnf(np.hstack([as_matrix(p, rows=term.gens) for p in parts]))

    nz = cycles.shape[1]
    solver = ColumnReduction(term.gens, track=True)
    for j in range(nz):
        stacked = np.zeros(term.gens + nz, dtype=cycles.dtype)
        stacked[: term.gens] = cycles[:, j]
        stacked[term.gens + j] = 1
        solver.add(stacked)
    if bmat.shape[1]:
        coords = solve_columns(cycles, bmat)
        if coords is None:
            raise ValueError("boundaries are not cycles; invalid complex")
    else:
        coords = zeros(nz, 0)

    snf = _snf(coords)
    diag = snf.diagonal
    kept, divisors = [], []
    for i in range(nz):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        kept.append(i)
        divisors.append(d)
    order = sorted(range(len(kept)), key=lambda t: (divisors[t] == 0, t))
    kept = [kept[t] for t in order]
    divisors = [divisors[t] for t in order]
    group = FgAbelian(sum(1 for d in divisors if d == 0),
                      tuple(d for d in divisors if d > 1))
    if kept:
        reps = _demote(np.asarray(cycles @ snf.uinv)[:, kept])
    else:
        reps = zeros(term.gens, 0)
    return HomologyData(group, cycles, reps, divisors, solver, snf.u, kept)


def check_chain_map(f_maps, src: ChainComplex, dst: ChainComplex, degrees):
    """Verify that ``f_maps[n]`` commutes with boundaries modulo relations."""
    for n in degrees:
        f = as_matrix(f_maps[n], rows=dst.terms[n].gens, cols=src.terms[n].gens)
        img = f @ src.terms[n].relations
        if img.size and _maxabs(img):
            if not lattice_contains(dst.terms[n].relations, img):
                raise ValueError(f"chain map breaks relations at degree {n}")
        if n >= 1 and (n - 1) in degrees:
            f_lo = as_matrix(f_maps[n - 1], rows=dst.terms[n - 1].gens,
                             cols=src.terms[n - 1].gens)
            diff = dst.boundaries[n] @ f - f_lo @ src.boundaries[n]
            if diff.size and _maxabs(diff):
                if not lattice_contains(dst.terms[n - 1].relations, diff):
                    raise ValueError(f"not a chain map at degree {n}")
    return True


def induced_map_on_homology(f_maps, src: ChainComplex, dst: ChainComplex, n,
                            src_h=None, dst_h=None, check=True):
    """Matrix of the induced map H_n(src) -> H_n(dst) on canonical generators."""
    if check:
        degs = [d for d in (n - 1, n, n + 1)
                if 0 <= d <= min(src.length, dst.length) and d < len(f_maps)]
        check_chain_map(f_maps, src, dst, degs)
    src_h = src_h if src_h is not None else homology_of_complex(src, n)
    dst_h = dst_h if dst_h is not None else homology_of_complex(dst, n)
    f = as_matrix(f_maps[n], rows=dst.terms[n].gens, cols=src.terms[n].gens)
    out = np.zeros((dst_h.num_gens, src_h.num_gens), dtype=np.int64)
    for j in range(src_h.num_gens):
        out[:, j] = dst_h.class_of(f @ src_h.reps[:, j])
    return out, src_h, dst_h


@dataclass
class ComplexSES:
    """Levelwise short exact sequence 0 -> sub -> mid -> quot -> 0."""

    sub: ChainComplex
    mid: ChainComplex
    quot: ChainComplex
    inject: list
    project: list

    def validate(self, degrees):
        for n in degrees:
            a, b, c = self.sub.terms[n], self.mid.terms[n], self.quot.terms[n]
            i = as_matrix(self.inject[n], rows=b.gens, cols=a.gens)
            j = as_matrix(self.project[n], rows=c.gens, cols=b.gens)
            if not check_exactness_at(i, j, a, b, c):
                raise ValueError(f"sequence not exact at middle, degree {n}")
            if not lattice_contains(np.hstack([j, c.relations]), eye(c.gens)):
                raise ValueError(f"projection not surjective at degree {n}")
            ker = kernel_basis(np.hstack([i, b.relations]))[: a.gens, :]
            if ker.shape[1] and not lattice_contains(a.relations, ker):
                raise ValueError(f"injection not injective at degree {n}")
        return True


def connecting_homomorphism(ses: ComplexSES, n, quot_h=None, sub_h=None):
    """Snake map H_n(quot) -> H_{n-1}(sub) by zig-zag lifting."""
    if n < 1:
        raise ValueError("connecting map needs degree >= 1")
    quot_h = quot_h if quot_h is not None else homology_of_complex(ses.quot, n)
    sub_h = sub_h if sub_h is not None else homology_of_complex(ses.sub, n - 1)
    jmat = as_matrix(ses.project[n], rows=ses.quot.terms[n].gens,
                     cols=ses.mid.terms[n].gens)
    imat = as_matrix(ses.inject[n - 1], rows=ses.mid.terms[n - 1].gens,
                     cols=ses.sub.terms[n - 1].gens)
    relq = ses.quot.terms[n].relations
    relb = ses.mid.terms[n - 1].relations
    out = np.zeros((sub_h.num_gens, quot_h.num_gens), dtype=np.int64)
    for jcol in range(quot_h.num_gens):
        z = quot_h.reps[:, jcol]
        lift = solve_columns(np.hstack([jmat, relq]),
                             as_matrix(z.reshape(-1, 1)))
        if lift is None:
            raise ValueError("lifting failed; sequence is not exact")
        b = lift[: jmat.shape[1], 0]
        w = ses.mid.boundaries[n] @ b
        back = solve_columns(np.hstack([imat, relb]),
                             as_matrix(np.asarray(w).reshape(-1, 1)))
        if back is None:
            raise ValueError("lifting failed; sequence is not exact")
        out[:, jcol] = sub_h.class_of(np.asarray(back[: imat.shape[1], 0]))
    return out, quot_h, sub_h


def check_exactness_at(f, g, a: PresentedAb, b: PresentedAb, c: PresentedAb):
    """Exactness of A -f-> B -g-> C at B, decided by lattice membership."""
    f = as_matrix(f, rows=b.gens, cols=a.gens)
    g = as_matrix(g, rows=c.gens, cols=b.gens)
    comp = g @ f
    if comp.size and _maxabs(comp):
        if not lattice_contains(c.relations, comp):
            raise ValueError("composite g.f is nonzero modulo relations")
    image = np.hstack([f, b.relations])
    kernel = kernel_basis(np.hstack([g, c.relations]))[: b.gens, :]
    kernel = np.hstack([as_matrix(kernel, rows=b.gens), b.relations])
    return lattice_contains(image, kernel) and lattice_contains(kernel, image)


# ---------------------------------------------------------------------------
# bicomplexes


class BiComplexAb:
    """First-quadrant grid of presented abelian groups with commuting maps.

    ``vertical[(p, q)]`` maps (p, q) -> (p, q-1); ``horizontal[(p, q)]`` maps
    (p, q) -> (p-1, q).  Maps are stored commuting; the total differential
    twists the vertical map at column p by (-1)^p, which makes every square
    anticommute so the total differential squares to zero.
    """

    def __init__(self, entries, vertical, horizontal):
        self.entries = dict(entries)
        self.vertical = {k: as_matrix(v) for k, v in vertical.items()}
        self.horizontal = {k: as_matrix(v) for k, v in horizontal.items()}

    def degrees(self):
        return sorted({p + q for p, q in self.entries})

    def validate_squares(self):
        for (p, q) in self.entries:
            if p >= 1 and q >= 1 and (p - 1, q - 1) in self.entries:
                lhs = self.vertical[(p - 1, q)] @ self.horizontal[(p, q)]
                rhs = self.horizontal[(p, q - 1)] @ self.vertical[(p, q)]
                diff = lhs - rhs
                if diff.size and _maxabs(diff):
                    rel = self.entries[(p - 1, q - 1)].relations
                    if not lattice_contains(rel, diff):
                        raise ValueError(f"square at ({p},{q}) does not commute")
        return True


def total_complex(b: BiComplexAb):
    """Direct-sum total complex; returns (complex, block offset map).

    Blocks of total degree n are ordered by ascending column p.  The offset
    map sends (p, q) to (n, first generator index of the block).
    """
    degrees = b.degrees()
    nmax = max(degrees) if degrees else 0
    offsets = {}
    terms = []
    for n in range(nmax + 1):
        blocks = [(p, n - p) for p in range(n + 1) if (p, n - p) in b.entries]
        gens = 0
        for key in blocks:
            offsets[key] = (n, gens)
            gens += b.entries[key].gens
        rel_cols = sum(b.entries[key].relations.shape[1] for key in blocks)
        rel = zeros(gens, rel_cols)
        col = 0
        for key in blocks:
            r = b.entries[key].relations
            _, off = offsets[key]
            rel[off:off + b.entries[key].gens, col:col + r.shape[1]] = r
            col += r.shape[1]
        terms.append(PresentedAb(gens, rel))
    boundaries = []
    for n in range(1, nmax + 1):
        d = zeros(terms[n - 1].gens, terms[n].gens)
        for p in range(n + 1):
            key = (p, n - p)
            if key not in b.entries:
                continue
            _, coff = offsets[key]
            w = b.entries[key].gens
            if p >= 1 and (p - 1, n - p) in b.entries:
                _, roff = offsets[(p - 1, n - p)]
                h = b.horizontal[key]
                d[roff:roff + h.shape[0], coff:coff + w] += h
            if n - p >= 1 and (p, n - p - 1) in b.entries:
                _, roff = offsets[(p, n - p - 1)]
                v = b.vertical[key]
                sign = -1 if p % 2 else 1
                d[roff:roff + v.shape[0], coff:coff + w] += sign * v
        boundaries.append(d)
    return ChainComplex(terms, boundaries), offsets


def assemble_total_map(entry_maps, src_offsets, dst_offsets,
                       src_cx: ChainComplex, dst_cx: ChainComplex):
    """Assemble per-entry bicomplex maps into a total chain map list."""
    nmax = min(src_cx.length, dst_cx.length)
    out = [zeros(dst_cx.terms[n].gens, src_cx.terms[n].gens)
           for n in range(nmax + 1)]
    for key, mat in entry_maps.items():
        if key not in src_offsets or key not in dst_offsets:
            continue
        sn, soff = src_offsets[key]
        dn, doff = dst_offsets[key]
        if sn != dn or sn > nmax:
            continue
        mat = as_matrix(mat)
        out[sn][doff:doff + mat.shape[0], soff:soff + mat.shape[1]] = mat
    return out

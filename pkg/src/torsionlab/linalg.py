"""Sparse exact linear algebra over the rationals, plus integer Smith forms.

Vectors are dicts {row index: nonzero rational}; matrices are lists of
column dicts.  The central object is Elim, a streaming column
elimination.  Columns are fed in a caller-chosen order and the pivot
COLUMN set is the greedy independent subset in that order, which is a
basis-free mathematical invariant of the matrix; hence every frame
derived from an Elim is reproducible no matter how pivot ROWS are
chosen.  Pivot rows are picked to limit fill-in.

All arithmetic is exact; nothing here ever touches floating point.
"""

from __future__ import annotations

import heapq

from .field import Q, QONE, QZERO


# ---------------------------------------------------------------------------
# sparse vectors


def vec_scaled_add(dst: dict, c, src: dict) -> None:
    """dst += c*src in place, dropping entries that cancel."""
    for i, v in src.items():
        w = dst.get(i)
        if w is None:
            dst[i] = c * v
        else:
            w = w + c * v
            if w:
                dst[i] = w
            else:
                del dst[i]


def vec_scale(v: dict, c) -> dict:
    return {i: c * x for i, x in v.items()}


def vec_dot(u: dict, v: dict):
    if len(u) > len(v):
        u, v = v, u
    s = QZERO
    for i, x in u.items():
        y = v.get(i)
        if y is not None:
            s += x * y
    return s


def vec_from_list(xs) -> dict:
    return {i: Q(x) for i, x in enumerate(xs) if x}


def cols_from_rows(rows) -> list:
    """Dense row-of-lists matrix -> list of sparse columns."""
    ncols = len(rows[0]) if rows else 0
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                cols[j][i] = Q(x)
    return cols


def transpose_cols(cols, nrows: int) -> list:
    out = [dict() for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, x in col.items():
            out[i][j] = x
    return out


# ---------------------------------------------------------------------------
# streaming column elimination


class Elim:
    """Column-by-column Gaussian elimination with exact arithmetic.

    Feeding column a_j either creates pivot j (a_j independent of the
    pivots so far) or records j as free.  For free columns the unique
    expression of a_j over the earlier pivot columns is recoverable,
    which yields the canonical kernel basis: the vector supported on
    {j} + earlier pivot columns with coefficient 1 at j.

    The reduced pivot columns u_i are normalized to 1 at their pivot
    row; the lower-triangular bookkeeping needed to translate between
    the u basis and the original pivot columns is kept per pivot, so
    solve() can return coordinates over the original columns.
    """

    def __init__(self, row_weight=None):
        self._u = []            # reduced, normalized pivot columns
        self._rows = []         # pivot row of each pivot
        self._lead = []         # leading coefficient before normalization
        self._lred = []         # per pivot: [(earlier pivot idx, coef)] used reducing it
        self._row2piv = {}
        self.pivot_cols = []    # original column indices that became pivots
        self.free_cols = []
        self._row_weight = row_weight or {}
        self._ncols_fed = 0

    @property
    def rank(self) -> int:
        return len(self._u)

    def reduce(self, col: dict):
        """Reduce col against the current pivots.

        Returns (residual, gamma) with residual supported off all pivot
        rows and gamma the list of (pivot index, coefficient) such that
        col = sum(gamma_i * u_i) + residual.  Read-only.
        """
        work = dict(col)
        gamma = []
        heap = [self._row2piv[r] for r in work if r in self._row2piv]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            i = heapq.heappop(heap)
            seen.discard(i)
            c = work.get(self._rows[i])
            if not c:
                continue
            gamma.append((i, c))
            u = self._u[i]
            for r, v in u.items():
                w = work.get(r)
                if w is None:
                    work[r] = -c * v
                else:
                    w = w - c * v
                    if w:
                        work[r] = w
                    else:
                        del work[r]
                        continue
                p = self._row2piv.get(r)
                if p is not None and p > i and p not in seen:
                    seen.add(p)
                    heapq.heappush(heap, p)
        return work, gamma

    def _pick_row(self, residual: dict) -> int:
        best = None
        bw = None
        for r in residual:
            w = (self._row_weight.get(r, 0), r)
            if bw is None or w < bw:
                bw = w
                best = r
        return best

    def add_column(self, j: int, col: dict) -> bool:
        """Feed column j.  Returns True if it became a pivot."""
        self._ncols_fed += 1
        residual, gamma = self.reduce(col)
        if not residual:
            self.free_cols.append(j)
            return False
        r = self._pick_row(residual)
        lead = residual[r]
        inv = QONE / lead
        u = {rr: v * inv for rr, v in residual.items() if rr != r}
        u[r] = QONE
        i = len(self._u)
        self._u.append(u)
        self._rows.append(r)
        self._lead.append(lead)
        self._lred.append(gamma)
        self._row2piv[r] = i
        self.pivot_cols.append(j)
        return True

    def _back_substitute(self, gamma):
        """Translate u-basis coefficients to original-pivot-column ones."""
        g = {i: c for i, c in gamma if c}
        heap = [-i for i in g]
        heapq.heapify(heap)
        queued = set(g)
        x = {}
        while heap:
            i = -heapq.heappop(heap)
            queued.discard(i)
            c = g.pop(i, None)
            if not c:
                continue
            xi = c / self._lead[i]
            x[i] = xi
            for k, ck in self._lred[i]:
                w = g.get(k, QZERO) - xi * ck
                if w:
                    g[k] = w
                    if k not in queued:
                        queued.add(k)
                        heapq.heappush(heap, -k)
                else:
                    g.pop(k, None)
        return x

    def solve(self, b: dict):
        """Coordinates of b over the original pivot columns, or None."""
        residual, gamma = self.reduce(b)
        if residual:
            return None
        x = self._back_substitute(gamma)
        return {self.pivot_cols[i]: v for i, v in x.items()}

    def kernel_vector(self, j: int, col: dict) -> dict:
        """Canonical kernel vector for a dependent column j.

        col must be the original column j and must reduce to zero.  The
        result has coefficient 1 at j and is supported otherwise on the
        pivot columns that precede j.
        """
        x = self.solve(col)
        if x is None:
            raise ValueError("column %d is independent; no kernel vector" % j)
        v = {k: -c for k, c in x.items()}
        v[j] = QONE
        return v


def row_weights(cols) -> dict:
    w = {}
    for col in cols:
        for r in col:
            w[r] = w.get(r, 0) + 1
    return w


# ---------------------------------------------------------------------------
# determinants


def det_cols(cols, n: int):
    """Determinant of an n x n matrix given as sparse columns.

    Elimination order is fill-reducing; the value is exact.  Returns 0
    for singular input.
    """
    if n == 0:
        return QONE
    if len(cols) != n:
        raise ValueError("need %d columns, got %d" % (n, len(cols)))
    el = Elim(row_weight=row_weights(cols))
    det = QONE
    for j, col in enumerate(cols):
        if not el.add_column(j, col):
            return QZERO
        det *= el._lead[-1]
    # parity of the pivot-row arrangement (row labels may be arbitrary)
    rows = el._rows
    pos = {r: i for i, r in enumerate(sorted(rows))}
    perm = [pos[r] for r in rows]
    return det if _perm_sign(perm) > 0 else -det


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        ln = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        if ln % 2 == 0:
            sign = -sign
    return sign


def det_with_unit_columns(cols, n: int, unit_rows):
    """det of [M | U] where the trailing columns U are unit vectors.

    cols holds only the leading block M (in order); unit_rows lists the
    unit rows of U in column order.  Laplace expansion along the unit
    columns reduces this to a minor of M; the sign bookkeeping is done
    exactly.
    """
    k = len(cols)
    if k + len(unit_rows) != n:
        raise ValueError("column count mismatch")
    if len(set(unit_rows)) != len(unit_rows):
        return QZERO
    sign = 1
    live = sorted(set(range(n)) - set(unit_rows))
    # expand repeatedly along the last column; track live row positions
    removed = set()
    size = n
    for r in reversed(unit_rows):
        p = r - sum(1 for q in removed if q < r)
        # cofactor sign (-1)^{i+j} at 1-indexed (p+1, size)
        if (p + 1 + size) % 2 == 1:
            sign = -sign
        removed.add(r)
        size -= 1
    remap = {r: i for i, r in enumerate(live)}
    minor = [{remap[r]: v for r, v in col.items() if r in remap} for col in cols]
    d = det_cols(minor, k)
    return d if sign > 0 else -d


# ---------------------------------------------------------------------------
# small dense helpers (fiber-sized matrices)


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), QZERO) for j in range(p)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum((a[i][k] * v[k] for k in range(len(v))), QZERO) for i in range(len(a))]


def mat_transpose(a):
    return [list(row) for row in zip(*a)] if a else []

def mat_identity(n):
    return [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]


def mat_det(a):
    n = len(a)
    m = [row[:] for row in a]
    det = QONE
    for j in range(n):
        p = None
        for i in range(j, n):
            if m[i][j]:
                p = i
                break
        if p is None:
            return QZERO
        if p != j:
            m[j], m[p] = m[p], m[j]
            det = -det
        det *= m[j][j]
        inv = QONE / m[j][j]
        for i in range(j + 1, n):
            if m[i][j]:
                c = m[i][j] * inv
                for k in range(j, n):
                    m[i][k] = m[i][k] - c * m[j][k]
    return det


def mat_inv(a):
    n = len(a)
    m = [row[:] + [QONE if i == j else QZERO for j in range(n)]
         for i, row in enumerate(a)]
    for j in range(n):
        p = None
        for i in range(j, n):
            if m[i][j]:
                p = i
                break
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[j], m[p] = m[p], m[j]
        inv = QONE / m[j][j]
        m[j] = [x * inv for x in m[j]]
        for i in range(n):
            if i != j and m[i][j]:
                c = m[i][j]
                m[i] = [x - c * y for x, y in zip(m[i], m[j])]
    return [row[n:] for row in m]


# ---------------------------------------------------------------------------
# integer normal forms (homology over Z)


def kernel_basis_int(cols, nrows: int):
    """Lattice basis of the integer kernel of an integer matrix.

    Columns are euclidean-reduced left to right while the same column
    operations are mirrored on an identity block; transformer columns
    under zeroed matrix columns form a basis of the kernel lattice.
    """
    ncols = len(cols)
    work = [dict(c) for c in cols]
    trans = [{j: 1} for j in range(ncols)]
    live = list(range(ncols))
    for r in range(nrows):
        while True:
            nz = [j for j in live if work[j].get(r)]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: (abs(work[j][r]), j))
            a = nz[0]
            for b in nz[1:]:
                qv = work[b][r] // work[a][r]
                if qv:
                    _int_axpy(work[b], -qv, work[a])
                    _int_axpy(trans[b], -qv, trans[a])
        nz = [j for j in live if work[j].get(r)]
        if nz:
            live.remove(nz[0])
    return [trans[j] for j in live if not work[j]]


def _int_axpy(dst, c, src):
    for i, v in src.items():
        w = dst.get(i, 0) + c * v
        if w:
            dst[i] = w
        else:
            dst.pop(i, None)


def smith_normal_form(rows):
    """Smith form of an integer matrix given as dense rows.

    Returns (diag, U) with U unimodular, U*A*V = diag(d_1..d_r, 0...)
    for some unimodular V (not returned), d_i | d_{i+1}.  U is what a
    quotient Z^m / column-lattice(A) needs to read off coordinates.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    t = 0
    while t < min(m, n):
        # locate smallest nonzero entry in the remaining block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        a[t], a[i0] = a[i0], a[t]
        u[t], u[i0] = u[i0], u[t]
        for r in a:
            r[t], r[j0] = r[j0], r[t]
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                qv = a[i][t] // a[t][t]
                if qv:
                    a[i] = [x - qv * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - qv * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                qv = a[t][j] // a[t][t]
                if qv:
                    for r in a:
                        r[j] -= qv * r[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility sweep: pivot must divide the rest of the block
        ok = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    a[t] = [x + y for x, y in zip(a[t], a[i])]
                    u[t] = [x + y for x, y in zip(u[t], u[i])]
                    ok = False
                    break
            if not ok:
                break
        if ok:
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            t += 1
    diag = [a[i][i] for i in range(min(m, n)) if i < t]
    return diag, u

"""Shared test utilities: random complexes and an independent dense
torsion oracle.

The oracle deliberately avoids the package's sparse elimination and
determinant code: dense row matrices, textbook Gaussian elimination and
cofactor determinants only.  Expected values asserted in the suites
were computed with it.
"""

import random

from torsionlab.chaincx import ChainComplexData
from torsionlab.detline import GradedDims
from torsionlab.field import Q, QONE, QZERO


def naive_det(rows):
    n = len(rows)
    if n == 0:
        return QONE
    if n == 1:
        return Q(rows[0][0])
    total = QZERO
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = Q(rows[0][j]) * naive_det(minor)
        total += term if j % 2 == 0 else -term
    return total


def rand_unimodular(rng, n, ops=None):
    """Random integer matrix with determinant +-1 (elementary ops on I)."""
    m = [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]
    if n <= 1:
        return m
    for _ in range(ops if ops is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        c = Q(rng.choice([-2, -1, 1, 2]))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    if rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        m[i], m[j] = m[j], m[i]
    return m


def random_complex(rng, m, dmax=4, even_chi=False, alpha_top_zero=False):
    """Random valid chain complex, built from a canonical form conjugated
    by random unimodular basis changes (so d∘d = 0 holds by construction)."""
    while True:
        dims = [rng.randint(0, dmax) for _ in range(m + 1)]
        chi = sum(d if q % 2 == 0 else -d for q, d in enumerate(dims))
        if even_chi and chi % 2:
            continue
        if alpha_top_zero and sum(dims) % 2:
            continue
        break
    # ranks: r[q] = rank of d_q, with r[q] + r[q+1] <= dims[q]
    r = [0] * (m + 2)
    for q in range(m, 0, -1):
        hi = min(dims[q], dims[q - 1])
        r[q] = rng.randint(0, hi)
    # repair violations r[q] + r[q+1] > dims[q]
    for q in range(m, 0, -1):
        over = r[q + 1] + r[q] - dims[q]
        if over > 0:
            r[q] = max(0, r[q] - over)
    for q in range(1, m + 1):
        assert r[q] + r[q + 1] <= dims[q] and r[q] <= dims[q - 1]
    # canonical boundaries: coords of C_q = [kernel block | lift block],
    # the lift block maps to the first r_q kernel coordinates below
    canon = [None]
    for q in range(1, m + 1):
        cols = [dict() for _ in range(dims[q])]
        k = dims[q] - r[q]
        for t in range(r[q]):
            cols[k + t][t] = QONE
        canon.append(cols)
    # conjugate by random unimodular changes per degree
    mats = [rand_unimodular(rng, dims[q]) for q in range(m + 1)]
    from torsionlab.linalg import mat_inv

    invs = [mat_inv(mm) for mm in mats]
    bnd = [None]
    for q in range(1, m + 1):
        cols = []
        for j in range(dims[q]):
            # (M_{q-1} * d_q * M_q^{-1}) e_j
            acc = {}
            for t in range(dims[q]):
                c = invs[q][t][j]
                if c:
                    for i, v in canon[q][t].items():
                        acc[i] = acc.get(i, QZERO) + c * v
            out = {}
            for i, v in acc.items():
                if not v:
                    continue
                for ii in range(dims[q - 1]):
                    w = mats[q - 1][ii][i] * v
                    if w:
                        out[ii] = out.get(ii, QZERO) + w
            cols.append({i: v for i, v in out.items() if v})
        bnd.append(cols)
    return ChainComplexData(GradedDims(tuple(dims)), bnd)


# ---------------------------------------------------------------------------
# dense independent torsion oracle


def dense_boundaries(cx: ChainComplexData):
    out = [None]
    for q in range(1, cx.top_degree + 1):
        rows = [[QZERO] * cx.dims.dims[q] for _ in range(cx.dims.dims[q - 1])]
        for j, col in enumerate(cx.boundaries[q]):
            for i, v in col.items():
                rows[i][j] = v
        out.append(rows)
    return out


def _dense_image_lift(rows, ncols):
    """Greedy columns of `rows` with independent images; dense echelon."""
    if not rows:
        return [], []
    picked = []
    basis = []  # echelon vectors (lists)
    for j in range(ncols):
        v = [rows[i][j] for i in range(len(rows))]
        w = v[:]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if w[lead]:
                c = w[lead] / b[lead]
                w = [x - c * y for x, y in zip(w, b)]
        if any(w):
            picked.append(j)
            basis.append(w)
    return picked, basis


def brute_torsion_scalar(cx: ChainComplexData, reps=None):
    """Independent evaluation of the chain-to-homology determinant map on
    the standard chain frame, relative to the given homology
    representatives (cycles per degree, dense lists).  Returns the
    scalar in front of the homology generator, sign refinement included.
    """
    m = cx.top_degree
    dims = cx.dims.dims
    db = dense_boundaries(cx)
    reps = reps or {}
    # image lifts per degree
    lifts = {0: []}
    for q in range(1, m + 1):
        picked, _ = _dense_image_lift(db[q], dims[q])
        lifts[q] = picked
    hdims = []
    for q in range(m + 1):
        rank_q = len(lifts.get(q, []))
        rank_q1 = len(lifts.get(q + 1, [])) if q < m else 0
        hdims.append(dims[q] - rank_q - rank_q1)
    # residue N
    a = s = 0
    alpha = []
    for d in dims:
        s = (s + d) % 2
        alpha.append(s)
    s = 0
    beta = []
    for d in hdims:
        s = (s + d) % 2
        beta.append(s)
    bigN = sum(x * y for x, y in zip(alpha, beta)) % 2
    value = QONE
    for q in range(m + 1):
        n = dims[q]
        cols = []
        if q < m:
            for j in lifts[q + 1]:
                cols.append([db[q + 1][i][j] for i in range(n)])
        for h in reps.get(q, []):
            cols.append([Q(h[i]) for i in range(n)])
        for j in lifts[q]:
            cols.append([QONE if i == j else QZERO for i in range(n)])
        assert len(cols) == n, "homology representatives missing"
        det = naive_det([[cols[j][i] for j in range(n)] for i in range(n)])
        assert det, "degenerate basis change"
        value = value / det if q % 2 == 0 else value * det
    return -value if bigN else value

"""Finite chain complexes over the rationals and their torsion map.

The torsion isomorphism carries a point of det C to a point of
det H_*(C).  Its value is a determinant product over per-degree basis
changes [image lifts | homology representatives | lifts] relative to
the chain frame, times a parity sign computed from the dimension data.

Frames here are deterministic: pivot columns are the greedy independent
column set in index order (a basis-free invariant), kernel vectors are
the canonical echelon ones, and homology representatives are the first
kernel vectors that complete the boundary image.  Every reported scalar
is therefore reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import InvalidComplex, StructureError
from .detline import (
    DetElement,
    GradedDims,
    GradedFrame,
    frame_change,
    residues,
    standard_frame,
)
from .field import Q, QONE, QZERO
from .linalg import Elim, det_with_unit_columns, row_weights, vec_scaled_add


@dataclass
class ChainComplexData:
    """Boundary matrices d_q: C_q -> C_{q-1} as sparse columns, q = 1..m."""

    dims: GradedDims
    boundaries: list  # boundaries[q] = list of column dicts, boundaries[0] unused
    label: str = ""

    def __post_init__(self):
        m = self.dims.top_degree
        if len(self.boundaries) != m + 1:
            raise StructureError("need one boundary slot per degree 1..m")
        for q in range(1, m + 1):
            if len(self.boundaries[q]) != self.dims.dims[q]:
                raise StructureError("boundary %d has wrong column count" % q)

    @property
    def top_degree(self) -> int:
        return self.dims.top_degree

    def chi(self) -> int:
        return self.dims.chi()

    def validate(self) -> None:
        """Check d∘d = 0 exactly."""
        for q in range(2, self.top_degree + 1):
            dq = self.boundaries[q]
            dq1 = self.boundaries[q - 1]
            for j, col in enumerate(dq):
                acc = {}
                for i, c in col.items():
                    vec_scaled_add(acc, c, dq1[i])
                if acc:
                    raise InvalidComplex(
                        "d_%d∘d_%d != 0 at column %d" % (q - 1, q, j))

    def boundary_of(self, q: int, vec: dict) -> dict:
        """Image of a degree-q vector under d_q."""
        if q == 0 or q > self.top_degree:
            return {}
        out = {}
        cols = self.boundaries[q]
        for j, c in vec.items():
            vec_scaled_add(out, c, cols[j])
        return out

    def standard_frame(self) -> GradedFrame:
        return standard_frame(self.dims, self.label)


def zero_boundaries(dims: GradedDims) -> list:
    return [None] + [[dict() for _ in range(dims.dims[q])]
                     for q in range(1, dims.top_degree + 1)]


@dataclass
class _DegreeData:
    outer: Elim
    inner: Elim
    pivot_cols: list
    free_cols: list
    free_pos: dict
    rep_cols: list      # free columns chosen as homology representatives
    reps: list          # the corresponding cycle vectors
    image_count: int    # rank of d_{q+1}; inner columns 0..image_count-1


class HomologyFrames:
    """Deterministic homology bases plus solve structures per degree."""

    def __init__(self, complex_: ChainComplexData, reverse_columns=False):
        complex_.validate()
        self.complex = complex_
        self._deg = []
        m = complex_.top_degree
        order = {}
        for q in range(m + 1):
            n = complex_.dims.dims[q]
            cols = complex_.boundaries[q] if q >= 1 else [dict() for _ in range(n)]
            outer = Elim(row_weight=row_weights(cols))
            feed = range(n - 1, -1, -1) if reverse_columns else range(n)
            for j in feed:
                outer.add_column(j, cols[j])
            order[q] = (outer, cols)
        for q in range(m + 1):
            outer, cols = order[q]
            free = outer.free_cols
            fpos = {j: t for t, j in enumerate(free)}
            if q < m:
                up_outer, up_cols = order[q + 1]
                image_cols = [up_cols[j] for j in up_outer.pivot_cols]
            else:
                image_cols = []
            inner = Elim()
            for t, col in enumerate(image_cols):
                # kernel coordinates of a cycle are its entries at the free
                # columns; pivot-column entries are determined by those
                k = {fpos[j]: v for j, v in col.items() if j in fpos}
                inner.add_column(t, k)
            rep_cols = []
            base = len(image_cols)
            for t, j in enumerate(free):
                if inner.add_column(base + t, {t: QONE}):
                    rep_cols.append(j)
            reps = [outer.kernel_vector(j, cols[j]) for j in rep_cols]
            self._deg.append(_DegreeData(
                outer=outer, inner=inner, pivot_cols=outer.pivot_cols,
                free_cols=free, free_pos=fpos, rep_cols=rep_cols, reps=reps,
                image_count=len(image_cols)))
        self.hdims = GradedDims(tuple(len(d.reps) for d in self._deg))

    # -- queries ------------------------------------------------------------

    def betti(self) -> tuple:
        return self.hdims.dims

    def reps(self, q: int) -> list:
        return self._deg[q].reps

    def lift_cols(self, q: int) -> list:
        """Columns of C_q whose boundary images form the chosen image basis."""
        return self._deg[q].pivot_cols

    def frame(self) -> GradedFrame:
        label = "H(%s)" % (self.complex.label or "C")
        return standard_frame(self.hdims, label)

    def class_coords(self, q: int, z: dict) -> list:
        """Coordinates of the cycle z in the degree-q homology frame."""
        d = self._deg[q]
        n = self.complex.dims.dims[q]
        if any(not (0 <= j < n) for j in z):
            raise StructureError("vector outside degree-%d chain space" % q)
        if self.complex.boundary_of(q, z):
            raise StructureError("class_coords needs a cycle")
        kappa = {}
        for j, v in z.items():
            t = d.free_pos.get(j)
            if t is not None:
                kappa[t] = v
        x = d.inner.solve(kappa)
        if x is None:
            raise StructureError("cycle failed to resolve against homology frame")
        base = d.image_count
        out = []
        for j in d.rep_cols:
            out.append(x.get(base + d.free_pos[j], QZERO))
        return out

    def is_exact(self) -> bool:
        return all(h == 0 for h in self.hdims.dims)


def homology(complex_: ChainComplexData) -> HomologyFrames:
    """Deterministic homology frames of a valid complex."""
    return HomologyFrames(complex_)


def torsion_iso(complex_: ChainComplexData, c: DetElement,
                H: HomologyFrames, alt_lifts: HomologyFrames = None) -> DetElement:
    """The canonical map det C -> det H_*(C) applied to c.

    Returns the image as a point of the deterministic homology frame.
    When alt_lifts is given, its pivot data replaces the image lifts
    (the value must not change; tests exercise exactly that).
    """
    if c.frame.dims != complex_.dims:
        raise StructureError("det element does not match the complex dims")
    lifts = alt_lifts if alt_lifts is not None else H
    m = complex_.top_degree
    res = residues(complex_.dims, H.hdims)
    value = c.coeff * frame_change(c.frame, complex_.standard_frame())
    for q in range(m + 1):
        n = complex_.dims.dims[q]
        if q < m:
            up = complex_.boundaries[q + 1]
            image_cols = [up[j] for j in lifts._deg[q + 1].outer.pivot_cols]
        else:
            image_cols = []
        lead = image_cols + H._deg[q].reps
        unit_rows = list(lifts._deg[q].outer.pivot_cols)
        if len(lead) + len(unit_rows) != n:
            raise StructureError("degree %d basis change is not square" % q)
        det = det_with_unit_columns(lead, n, unit_rows)
        if not det:
            raise StructureError(
                "degenerate basis change in degree %d (invalid input)" % q)
        value = value / det if q % 2 == 0 else value * det
    if res.N:
        value = -value
    return DetElement(H.frame(), value)


def direct_sum(a: ChainComplexData, b: ChainComplexData) -> ChainComplexData:
    """Block sum; per degree the first complex's basis precedes the second's."""
    if a.top_degree != b.top_degree:
        raise StructureError("direct sum needs equal top degrees")
    dims = GradedDims(tuple(x + y for x, y in zip(a.dims.dims, b.dims.dims)))
    bnd = [None]
    for q in range(1, a.top_degree + 1):
        off_r = a.dims.dims[q - 1]
        cols = [dict(col) for col in a.boundaries[q]]
        cols += [{i + off_r: v for i, v in col.items()} for col in b.boundaries[q]]
        bnd.append(cols)
    return ChainComplexData(dims, bnd, label=_sum_label(a.label, b.label))


def _sum_label(la, lb):
    if la or lb:
        return "(%s)⊕(%s)" % (la or "C", lb or "C")
    return ""


def dual_complex(c: ChainComplexData, m: int = None) -> ChainComplexData:
    """Degree-reversed dual: degree q holds the dual of degree m-q.

    The boundary from dual degree j is the transpose of the boundary
    into degree m-j+1, times (-1)^{m-j+1}; this is what makes the
    evaluation pairing descend to homology.
    """
    if m is None:
        m = c.top_degree
    if m != c.top_degree:
        raise StructureError("top degree mismatch")
    dims = c.dims.reversed()
    bnd = [None]
    for j in range(1, m + 1):
        src = c.boundaries[m - j + 1]
        ncols_new = c.dims.dims[m - j]
        cols = [dict() for _ in range(ncols_new)]
        sgn = -1 if (m - j + 1) % 2 else 1
        for col_idx, col in enumerate(src):
            for row_idx, v in col.items():
                cols[row_idx][col_idx] = -v if sgn < 0 else v
        bnd.append(cols)
    return ChainComplexData(dims, bnd, label=(c.label + "'") if c.label else "dual")

"""Determinant lines of graded vector spaces.

A graded space V_0 + ... + V_m over the rationals has the one
dimensional line det(V_0) x det(V_1)^{-1} x ... with alternating
exponents.  Points of that line are only ever represented here as a
scalar coefficient relative to an explicit ordered frame per degree;
every map between lines is a scalar relative to declared input and
output frames, so no silent basis choices can creep in.

The three sign residues below (one for the chain-to-homology map, one
for fusing two graded spaces, one for the degree-reversing dual) are
the bookkeeping that makes those maps compatible with each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import StructureError
from .field import Q, QONE
from .linalg import mat_det, mat_inv, mat_transpose


@dataclass(frozen=True)
class GradedDims:
    """Dimensions of a graded vector space, degree 0 up to top_degree."""

    dims: tuple

    def __post_init__(self):
        if not self.dims:
            raise StructureError("graded space needs at least degree 0")
        if any(d < 0 for d in self.dims):
            raise StructureError("negative dimension")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def alpha(self) -> tuple:
        """Prefix dimension sums mod 2, one entry per degree."""
        out = []
        s = 0
        for d in self.dims:
            s = (s + d) % 2
            out.append(s)
        return tuple(out)

    def chi(self) -> int:
        return sum(d if q % 2 == 0 else -d for q, d in enumerate(self.dims))

    def reversed(self) -> "GradedDims":
        return GradedDims(tuple(reversed(self.dims)))


@dataclass(frozen=True)
class SignResidues:
    """Parities controlling the sign conventions of the line maps."""

    alpha: tuple
    beta: tuple
    N: int
    M: int
    s: int


def residues(dims: GradedDims, hdims: GradedDims) -> SignResidues:
    """Sign data of a complex with chain dims `dims` and homology `hdims`.

    N is the parity entering the chain-to-homology isomorphism, M the
    fusion parity of the pair (dims, hdims) read as two graded spaces,
    s the duality parity of `dims`.
    """
    if dims.top_degree != hdims.top_degree:
        raise StructureError("chain and homology dims must share the top degree")
    a = dims.alpha()
    b = hdims.alpha()
    n = sum(x * y for x, y in zip(a, b)) % 2
    return SignResidues(alpha=a, beta=b, N=n,
                        M=fusion_parity(dims, hdims),
                        s=duality_parity(dims))


def fusion_parity(v: GradedDims, w: GradedDims) -> int:
    """Parity of the sign relating det V x det W to det(V + W)."""
    if v.top_degree != w.top_degree:
        raise StructureError("fusion needs equal top degrees")
    av, aw = v.alpha(), w.alpha()
    return sum(av[q - 1] * aw[q] for q in range(1, len(av))) % 2


def duality_parity(v: GradedDims) -> int:
    """Parity of the sign of the degree-reversing duality on det V (odd top)."""
    a = v.alpha()
    m = v.top_degree
    s = sum(a[q - 1] * a[q] for q in range(1, m + 1))
    s += sum(a[2 * q] for q in range(0, (m - 1) // 2 + 1))
    return s % 2


# ---------------------------------------------------------------------------
# frames

# A frame assigns each degree an ordered basis of Q^{dims[q]}.  Since
# big frames (one rank-d block per cell) dominate this package, a frame
# spec per degree is one of:
#   None                       the standard basis
#   ("blocks", [B1, B2, ...])  block-diagonal, dense square blocks in order
#   ("matrix", M)              columns of M are the basis vectors


def _spec_det(spec):
    if spec is None:
        return QONE
    kind, data = spec
    if kind == "blocks":
        d = QONE
        for b in data:
            d *= mat_det(b)
        return d
    if kind == "matrix":
        return mat_det(data)
    raise StructureError("unknown frame spec %r" % (kind,))


def _spec_dual(spec):
    """Spec of the dual basis under the standard dual-coordinates identification."""
    if spec is None:
        return None
    kind, data = spec
    if kind == "blocks":
        return ("blocks", [mat_transpose(mat_inv(b)) for b in data])
    return ("matrix", mat_transpose(mat_inv(data)))


@dataclass
class GradedFrame:
    """An explicit ordered basis per degree of a graded coordinate space."""

    dims: GradedDims
    specs: list = None
    label: str = ""

    def __post_init__(self):
        if self.specs is None:
            self.specs = [None] * (self.dims.top_degree + 1)
        if len(self.specs) != self.dims.top_degree + 1:
            raise StructureError("one frame spec per degree required")

    def degree_det(self, q: int):
        return _spec_det(self.specs[q])

    def det_to_standard(self):
        """Scalar c with frame generator = c * standard generator."""
        c = QONE
        for q in range(self.dims.top_degree + 1):
            d = self.degree_det(q)
            c = c * d if q % 2 == 0 else c / d
        return c

    def __eq__(self, other):
        if not isinstance(other, GradedFrame):
            return NotImplemented
        return self.dims == other.dims and self.specs == other.specs

    def descriptor(self) -> dict:
        return {"dims": list(self.dims.dims), "label": self.label or "standard"}


def standard_frame(dims: GradedDims, label: str = "") -> GradedFrame:
    return GradedFrame(dims, None, label)


@dataclass
class DetElement:
    """A point of the determinant line of a graded space: frame + scalar."""

    frame: GradedFrame
    coeff: object

    def is_zero(self) -> bool:
        return not self.coeff

    def scaled(self, c) -> "DetElement":
        return DetElement(self.frame, self.coeff * c)


def frame_change(src: GradedFrame, dst: GradedFrame):
    """Scalar c with generator(src) = c * generator(dst).

    Both frames must span the same graded coordinate space.
    """
    if src.dims != dst.dims:
        raise StructureError("frames live on different graded spaces")
    return src.det_to_standard() / dst.det_to_standard()


def convert(a: DetElement, dst: GradedFrame) -> DetElement:
    return DetElement(dst, a.coeff * frame_change(a.frame, dst))


def _concat_specs(sa, sb, da: int, db: int):
    if sa is None and sb is None:
        return None
    blocks = []
    for spec, d in ((sa, da), (sb, db)):
        if spec is None:
            blocks.append(("blocks", [mat_identity_cached(d)] if d else []))
        else:
            blocks.append(spec)
    out = []
    for spec in blocks:
        kind, data = spec
        if kind != "blocks":
            return _concat_dense(sa, sb, da, db)
        out.extend(data)
    return ("blocks", out)


def _concat_dense(sa, sb, da, db):
    from .linalg import mat_identity

    def as_matrix(spec, d):
        if spec is None:
            return mat_identity(d)
        kind, data = spec
        if kind == "matrix":
            return data
        m = [[Q(0)] * d for _ in range(d)]
        off = 0
        for b in data:
            k = len(b)
            for i in range(k):
                for j in range(k):
                    m[off + i][off + j] = b[i][j]
            off += k
        return m

    ma, mb = as_matrix(sa, da), as_matrix(sb, db)
    n = da + db
    m = [[Q(0)] * n for _ in range(n)]
    for i in range(da):
        for j in range(da):
            m[i][j] = ma[i][j]
    for i in range(db):
        for j in range(db):
            m[da + i][da + j] = mb[i][j]
    return ("matrix", m)


_ID_CACHE = {}


def mat_identity_cached(n):
    if n not in _ID_CACHE:
        from .linalg import mat_identity

        _ID_CACHE[n] = mat_identity(n)
    return _ID_CACHE[n]


def concat_frames(a: GradedFrame, b: GradedFrame, label: str = "") -> GradedFrame:
    """Degreewise concatenation, first block then second block."""
    if a.dims.top_degree != b.dims.top_degree:
        raise StructureError("concatenation needs equal top degrees")
    dims = GradedDims(tuple(x + y for x, y in zip(a.dims.dims, b.dims.dims)))
    specs = [_concat_specs(a.specs[q], b.specs[q], a.dims.dims[q], b.dims.dims[q])
             for q in range(dims.top_degree + 1)]
    return GradedFrame(dims, specs, label)


def fuse(a: DetElement, b: DetElement) -> DetElement:
    """Sign-corrected product det V x det W -> det(V + W).

    The output frame is always the degreewise concatenation with the
    first factor's block leading.
    """
    v, w = a.frame.dims, b.frame.dims
    m = fusion_parity(v, w)
    out = concat_frames(a.frame, b.frame,
                        label=_join_labels(a.frame.label, b.frame.label))
    c = a.coeff * b.coeff
    return DetElement(out, -c if m else c)


def _join_labels(la, lb):
    if la or lb:
        return "(%s)+(%s)" % (la or "std", lb or "std")
    return ""


def dual_frame(f: GradedFrame, label: str = "") -> GradedFrame:
    """Frame of the degree-reversed dual space: dual bases, degree q -> m-q."""
    m = f.dims.top_degree
    dims = f.dims.reversed()
    specs = [_spec_dual(f.specs[m - q]) for q in range(m + 1)]
    return GradedFrame(dims, specs, label or (f.label + "^*" if f.label else "dual"))


def graded_dual(a: DetElement) -> DetElement:
    """The duality isomorphism det V -> det V' for odd top degree.

    V'_q is the dual of V_{m-q}; the output frame is the degreewise
    dual basis of the input frame and the coefficient picks up the
    duality parity sign.
    """
    m = a.frame.dims.top_degree
    if m % 2 == 0:
        raise StructureError("duality needs an odd top degree, got %d" % m)
    s = duality_parity(a.frame.dims)
    return DetElement(dual_frame(a.frame), -a.coeff if s else a.coeff)

"""Simplicial and CW complexes, and the combinatorial path calculus.

Simplices are sorted vertex tuples; their orientation is the increasing
vertex order and incidence numbers follow the alternating face rule, so
every boundary matrix is reproducible from the vertex order alone.  CW
complexes carry user-supplied integer incidence matrices instead.

Paths (spiders, subdivision tracks, the barycenter-to-barycenter chain)
are stored as steps inside closed simplices between combinatorial tags;
a tag names either a vertex, the barycenter of a cell, or the
barycenter of a subdivision flag.  The retraction sending a tag to the
minimal vertex of the smallest face it names converts any such path
into an edge chain; it is a simplicial approximation of the identity,
so induced 1-homology classes are the geometrically correct ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import InvalidComplex, NonOrientable, NotAManifold, StructureError
from .field import Q
from .linalg import Elim, kernel_basis_int, mat_inv, smith_normal_form


# ---------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """Finite simplicial complex on totally ordered vertices 0..n-1."""

    def __init__(self, nverts: int, simplices, label: str = ""):
        self.nverts = nverts
        self.simplices = [list(level) for level in simplices]
        self.label = label
        if not self.simplices or len(self.simplices[0]) != nverts:
            raise InvalidComplex("need every vertex as a 0-simplex, in order")
        for q, level in enumerate(self.simplices):
            for s in level:
                if list(s) != sorted(s) or len(set(s)) != q + 1:
                    raise InvalidComplex("simplex %r is not a sorted %d-tuple"
                                         % (s, q + 1))
        self._index = [
            {s: i for i, s in enumerate(level)} for level in self.simplices
        ]
        for q in range(1, len(self.simplices)):
            for s in self.simplices[q]:
                for f in faces_of(s):
                    if f not in self._index[q - 1]:
                        raise InvalidComplex("face %r missing" % (f,))
        self._bnd = {}

    @classmethod
    def from_top_cells(cls, nverts: int, top_cells, label: str = ""):
        levels = {}
        stack = [tuple(sorted(set(c))) for c in top_cells]
        seen = set(stack)
        for v in range(nverts):
            t = (v,)
            if t not in seen:
                seen.add(t)
                stack.append(t)
        while stack:
            s = stack.pop()
            levels.setdefault(len(s) - 1, set()).add(s)
            if len(s) > 1:
                for f in faces_of(s):
                    if f not in seen:
                        seen.add(f)
                        stack.append(f)
        dim = max(levels) if levels else 0
        simplices = [sorted(levels.get(q, set())) for q in range(dim + 1)]
        return cls(nverts, simplices, label)

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def ncells(self, q: int) -> int:
        if 0 <= q <= self.dim:
            return len(self.simplices[q])
        return 0

    def f_vector(self) -> tuple:
        return tuple(len(level) for level in self.simplices)

    def chi(self) -> int:
        return sum(len(l) if q % 2 == 0 else -len(l)
                   for q, l in enumerate(self.simplices))

    def index(self, q: int, simplex) -> int:
        return self._index[q][tuple(simplex)]

    def simplex(self, q: int, i: int):
        return self.simplices[q][i]

    @property
    def edge_index(self):
        return self._index[1] if self.dim >= 1 else {}

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def boundary_int(self, q: int):
        """Integer boundary matrix d_q as sparse columns (alternating faces)."""
        if q in self._bnd:
            return self._bnd[q]
        cols = []
        for s in self.simplices[q]:
            col = {}
            for t, f in enumerate(faces_of(s)):
                col[self._index[q - 1][f]] = -1 if t % 2 else 1
            cols.append(col)
        self._bnd[q] = cols
        return cols

    def is_connected(self) -> bool:
        if self.nverts == 0:
            return False
        seen = {0}
        stack = [0]
        adj = self.vertex_adjacency()
        while stack:
            v = stack.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.nverts

    def vertex_adjacency(self):
        adj = {}
        for (u, v) in (self.simplices[1] if self.dim >= 1 else []):
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        for v in adj:
            adj[v].sort()
        return adj

    def cells(self):
        """All cells as (q, index) pairs, ordered by dimension then index."""
        out = []
        for q, level in enumerate(self.simplices):
            out.extend((q, i) for i in range(len(level)))
        return out

    def min_vertex(self, q: int, i: int) -> int:
        return self.simplices[q][i][0]


def faces_of(s):
    """Codimension-one faces in the alternating-rule order."""
    return [s[:t] + s[t + 1:] for t in range(len(s))]


# ---------------------------------------------------------------------------
# CW complexes (explicit incidence matrices)


@dataclass
class CWComplex:
    """Cells per dimension plus integer incidence columns per degree.

    boundaries[q] is a list with one sparse integer column per q-cell,
    rows indexed by (q-1)-cells.  boundaries[0] is ignored.
    """

    ncells_by_dim: list
    boundaries: list
    label: str = ""

    def __post_init__(self):
        if len(self.boundaries) != len(self.ncells_by_dim):
            raise InvalidComplex("one boundary slot per dimension required")
        for q in range(1, self.dim + 1):
            if len(self.boundaries[q]) != self.ncells_by_dim[q]:
                raise InvalidComplex("boundary %d has wrong column count" % q)
        self.validate()

    @property
    def dim(self) -> int:
        return len(self.ncells_by_dim) - 1

    def ncells(self, q: int) -> int:
        if 0 <= q <= self.dim:
            return self.ncells_by_dim[q]
        return 0

    def chi(self) -> int:
        return sum(n if q % 2 == 0 else -n
                   for q, n in enumerate(self.ncells_by_dim))

    def boundary_int(self, q: int):
        return self.boundaries[q]

    def validate(self):
        for q in range(2, self.dim + 1):
            lower = self.boundaries[q - 1]
            for j, col in enumerate(self.boundaries[q]):
                acc = {}
                for i, c in col.items():
                    for r, v in lower[i].items():
                        acc[r] = acc.get(r, 0) + c * v
                if any(acc.values()):
                    raise InvalidComplex("∂∘∂ != 0 at dim %d col %d" % (q, j))

    def is_connected(self) -> bool:
        n0 = self.ncells(0)
        if n0 == 0:
            return False
        if n0 == 1:
            return True
        parent = list(range(n0))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for col in (self.boundaries[1] if self.dim >= 1 else []):
            rows = sorted(col)
            for a, b in zip(rows, rows[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        return len({find(v) for v in range(n0)}) == 1


# ---------------------------------------------------------------------------
# generators


def circle(n: int, label: str = "") -> SimplicialComplex:
    """The n-gon triangulation of the circle."""
    if n < 3:
        raise StructureError("circle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return SimplicialComplex.from_top_cells(n, edges, label or "circle(%d)" % n)


def simplex_boundary(k: int, label: str = "") -> SimplicialComplex:
    """Boundary of the k-simplex: a triangulated (k-1)-sphere."""
    if k < 2:
        raise StructureError("simplex boundary needs k >= 2")
    import itertools

    top = list(itertools.combinations(range(k + 1), k))
    return SimplicialComplex.from_top_cells(k + 1, top,
                                            label or "bd-simplex(%d)" % k)


def staircase_product(K: SimplicialComplex, L: SimplicialComplex,
                      label: str = "") -> SimplicialComplex:
    """Product triangulation via monotone staircases in the vertex grid.

    A simplex of the product is a chain in the coordinatewise partial
    order whose projections are simplices of the factors.
    """
    nL = L.nverts
    vid = lambda u, v: u * nL + v

    sets = set()
    for lk in K.simplices:
        for sk in lk:
            for ll in L.simplices:
                for sl in ll:
                    _staircases_into(sk, sl, vid, sets)
    dim = max(len(s) for s in sets) - 1
    levels = [[] for _ in range(dim + 1)]
    for s in sets:
        levels[len(s) - 1].append(s)
    for level in levels:
        level.sort()
    return SimplicialComplex(K.nverts * nL, levels,
                             label or "(%s)x(%s)" % (K.label, L.label))


def _staircases_into(sk, sl, vid, sets):
    p, r = len(sk) - 1, len(sl) - 1

    def walk(i, j, chain):
        if i == p and j == r:
            n = len(chain)
            for mask in range(1, 1 << n):
                sets.add(tuple(chain[t] for t in range(n) if mask >> t & 1))
            return
        if i < p:
            walk(i + 1, j, chain + [vid(sk[i + 1], sl[j])])
        if j < r:
            walk(i, j + 1, chain + [vid(sk[i], sl[j + 1])])

    walk(0, 0, [vid(sk[0], sl[0])])


# ---------------------------------------------------------------------------
# orientation and fundamental cycles


def orient_manifold(K: SimplicialComplex) -> dict:
    """Coherent orientation of the top cells of a closed pseudomanifold.

    Returns the fundamental cycle as {top cell index: +-1}; the sign of
    the first top cell is +1.  Raises NotAManifold if some codimension
    one cell is not shared by exactly two top cells, NonOrientable if
    no coherent assignment exists.
    """
    m = K.dim
    if m == 0:
        raise NotAManifold("zero-dimensional input")
    ntop = K.ncells(m)
    cols = K.boundary_int(m)
    cofaces = {}
    for j, col in enumerate(cols):
        for i, eps in col.items():
            cofaces.setdefault(i, []).append((j, eps))
    for i in range(K.ncells(m - 1)):
        if len(cofaces.get(i, [])) != 2:
            raise NotAManifold(
                "codim-1 cell %d has %d top cofaces" % (i, len(cofaces.get(i, []))))
    sign = {0: 1}
    stack = [0]
    while stack:
        j = stack.pop()
        for i in cols[j]:
            (a, ea), (b, eb) = cofaces[i]
            if a != j:
                a, b, ea, eb = b, a, eb, ea
            want = -ea * sign[a] * eb  # eb * s_b must cancel ea * s_a
            if b in sign:
                if sign[b] != want:
                    raise NonOrientable("inconsistent orientation propagation")
            else:
                sign[b] = want
                stack.append(b)
    if len(sign) != ntop:
        raise NotAManifold("top cells are not face-connected")
    # exact check that the signed sum is a cycle
    acc = {}
    for j, s in sign.items():
        for i, eps in cols[j].items():
            acc[i] = acc.get(i, 0) + s * eps
    if any(acc.values()):
        raise NonOrientable("signed top cells do not close up")
    return sign


# ---------------------------------------------------------------------------
# barycentric subdivision


@dataclass
class Subdivision:
    """Barycentric subdivision with carrier map and chain operator."""

    original: SimplicialComplex
    complex: SimplicialComplex
    cells: list            # K'-vertex id -> (q, i) cell of K
    cell_vid: dict         # (q, i) -> K'-vertex id
    carrier: list          # per dim: K'-cell index -> (q, i) cell of K
    chain_maps: list       # per degree q: columns (per K q-cell) over K'-cells


def barycentric(K: SimplicialComplex) -> Subdivision:
    cells = K.cells()
    cell_vid = {c: t for t, c in enumerate(cells)}
    # flags: ascending chains of proper faces, as K'-vertex tuples
    flag_levels = {}

    def record(chain):
        flag_levels.setdefault(len(chain) - 1, []).append(tuple(chain))

    def extend(chain, bottom):
        record(chain)
        q, i = bottom
        if q == 0:
            return
        s = K.simplex(q, i)
        for f in _all_proper_faces(s):
            fcell = (len(f) - 1, K.index(len(f) - 1, f))
            extend([cell_vid[fcell]] + chain, fcell)

    # every chain arises once: prepend proper faces of the current bottom
    for c in cells:
        extend([cell_vid[c]], c)
    dim = max(flag_levels)
    levels = [sorted(set(flag_levels.get(q, []))) for q in range(dim + 1)]
    Kp = SimplicialComplex(len(cells), levels, label=(K.label + "'") if K.label else "sd")
    carrier = [[cells[flag[-1]] for flag in level] for level in levels]
    chain_maps = _sd_chain_maps(K, Kp, cell_vid)
    return Subdivision(K, Kp, cells, cell_vid, carrier, chain_maps)


def _all_proper_faces(s):
    import itertools

    out = []
    for k in range(1, len(s)):
        out.extend(itertools.combinations(s, k))
    return out


def _sd_chain_maps(K, Kp, cell_vid):
    maps = []
    prev = None
    for q in range(K.dim + 1):
        cols = []
        for i, s in enumerate(K.simplices[q]):
            if q == 0:
                cols.append({Kp.index(0, (cell_vid[(0, i)],)): 1})
                continue
            apex = cell_vid[(q, i)]
            acc = {}
            for t, f in enumerate(faces_of(s)):
                fi = K.index(q - 1, f)
                eps = -1 if t % 2 else 1
                for cell_idx, c in prev[fi].items():
                    flag = Kp.simplex(q - 1, cell_idx)
                    new = flag + (apex,)
                    k = Kp.index(q, new)
                    acc[k] = acc.get(k, 0) + eps * c
            if q % 2:
                acc = {k: -v for k, v in acc.items()}
            cols.append({k: v for k, v in acc.items() if v})
        maps.append(cols)
        prev = cols
    return maps


# ---------------------------------------------------------------------------
# tags, paths, retraction

# tags: ("v", vertex) | ("b", (q, i)) | ("f", flag-tuple of K'-vertex ids)
# a flag tag needs the Subdivision it refers to for interpretation; the
# subdivision object is attached to the step's carrier context by callers.


@dataclass(frozen=True)
class Step:
    carrier: tuple        # (q, i) cell of K containing the whole step
    start: tuple
    end: tuple
    coeff: int = 1


@dataclass
class CombPath:
    """A path through the complex as steps inside closed simplices."""

    steps: list = field(default_factory=list)

    def reversed(self) -> "CombPath":
        return CombPath([Step(s.carrier, s.end, s.start, s.coeff)
                         for s in reversed(self.steps)])

    def __add__(self, other: "CombPath") -> "CombPath":
        return CombPath(self.steps + other.steps)


def repvert(K: SimplicialComplex, tag, subdivision: Subdivision = None) -> int:
    """Minimal vertex of the smallest face the tag names."""
    kind, data = tag
    if kind == "v":
        return data
    if kind == "b":
        q, i = data
        return K.min_vertex(q, i)
    if kind == "f":
        if subdivision is None:
            raise StructureError("flag tag needs subdivision context")
        q, i = subdivision.cells[data[-1]]
        return K.min_vertex(q, i)
    raise StructureError("unknown tag %r" % (kind,))


def tag_point_cell(K, tag, subdivision=None):
    """The open cell of K containing the tagged point."""
    kind, data = tag
    if kind == "v":
        return (0, K.index(0, (data,)))
    if kind == "b":
        return data
    if kind == "f":
        return subdivision.cells[data[-1]]
    raise StructureError("unknown tag %r" % (kind,))


def _check_tag_in_carrier(K, tag, carrier, subdivision=None):
    cq, ci = tag_point_cell(K, tag, subdivision)
    cs = set(K.simplex(cq, ci))
    carrier_set = set(K.simplex(*carrier))
    if not cs <= carrier_set:
        raise StructureError("tag %r outside carrier %r" % (tag, carrier))


def retract_steps(K: SimplicialComplex, path: CombPath,
                  subdivision: Subdivision = None, check: bool = True) -> dict:
    """Edge chain of the retracted path: {edge index: integer}."""
    chain = {}
    for s in path.steps:
        if check:
            _check_tag_in_carrier(K, s.start, s.carrier, subdivision)
            _check_tag_in_carrier(K, s.end, s.carrier, subdivision)
        u = repvert(K, s.start, subdivision)
        w = repvert(K, s.end, subdivision)
        if u == w:
            continue
        a, b = (u, w) if u < w else (w, u)
        e = K.edge_index.get((a, b))
        if e is None:
            raise StructureError("retracted step needs edge (%d,%d)" % (a, b))
        c = s.coeff if u < w else -s.coeff
        chain[e] = chain.get(e, 0) + c
    return {e: c for e, c in chain.items() if c}


def retract_class(K: SimplicialComplex, weighted_paths,
                  subdivision: Subdivision = None) -> dict:
    """Retract a formal sum [(coeff, CombPath), ...] to an edge chain."""
    total = {}
    for coeff, path in weighted_paths:
        for e, c in retract_steps(K, path, subdivision).items():
            total[e] = total.get(e, 0) + coeff * c
    return {e: c for e, c in total.items() if c}


def edge_chain_boundary(K: SimplicialComplex, chain: dict) -> dict:
    out = {}
    for e, c in chain.items():
        u, v = K.simplices[1][e]
        out[v] = out.get(v, 0) + c
        out[u] = out.get(u, 0) - c
    return {v: c for v, c in out.items() if c}


def is_one_cycle(K: SimplicialComplex, chain: dict) -> bool:
    return not edge_chain_boundary(K, chain)


# ---------------------------------------------------------------------------
# spanning trees


def bfs_tree(K: SimplicialComplex, root: int) -> dict:
    """Breadth-first tree with lexicographic neighbor order.

    Returns {vertex: (parent, edge index)} with root mapping to None.
    Raises InvalidComplex when the 1-skeleton is disconnected.
    """
    adj = K.vertex_adjacency()
    tree = {root: None}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj.get(v, ()):
                if w not in tree:
                    e = K.edge_index[(min(v, w), max(v, w))]
                    tree[w] = (v, e)
                    nxt.append(w)
        frontier = nxt
    if len(tree) != K.nverts:
        raise InvalidComplex("complex is not connected")
    return tree


def tree_vertex_path(tree: dict, v: int) -> list:
    """Vertex sequence root..v along the tree."""
    out = [v]
    while tree[v] is not None:
        v = tree[v][0]
        out.append(v)
    out.reverse()
    return out


def tree_path_edge_chain(K: SimplicialComplex, tree: dict, v: int) -> dict:
    chain = {}
    verts = tree_vertex_path(tree, v)
    for a, b in zip(verts, verts[1:]):
        e = K.edge_index[(min(a, b), max(a, b))]
        chain[e] = chain.get(e, 0) + (1 if a < b else -1)
    return {e: c for e, c in chain.items() if c}


def fundamental_cycles(K: SimplicialComplex, root: int = 0):
    """One cycle per non-tree edge: tree path, edge, tree path back."""
    tree = bfs_tree(K, root)
    tree_edges = {node[1] for node in tree.values() if node is not None}
    out = []
    for e, (u, v) in enumerate(K.simplices[1]):
        if e in tree_edges:
            continue
        chain = dict(tree_path_edge_chain(K, tree, u))
        chain[e] = chain.get(e, 0) + 1
        back = tree_path_edge_chain(K, tree, v)
        for k, c in back.items():
            chain[k] = chain.get(k, 0) - c
        out.append((e, {k: c for k, c in chain.items() if c}))
    return out


# ---------------------------------------------------------------------------
# integral 1-homology


class H1Data:
    """H_1 over the integers in invariant-factor coordinates."""

    def __init__(self, complex_):
        self.complex = complex_
        n1 = complex_.ncells(1)
        n0 = complex_.ncells(0)
        d1 = complex_.boundary_int(1) if complex_.dim >= 1 else []
        self._kernel = kernel_basis_int(d1, n0)
        k = len(self._kernel)
        d2 = complex_.boundary_int(2) if complex_.dim >= 2 else []
        # image of d2 in kernel-lattice coordinates (exact integer solve)
        self._kelim = Elim()
        for t, v in enumerate(self._kernel):
            self._kelim.add_column(t, {i: Q(c) for i, c in v.items()})
        img = []
        for col in d2:
            x = self._kelim.solve({i: Q(c) for i, c in col.items()})
            if x is None:
                raise InvalidComplex("boundary image escapes the cycle lattice")
            img.append([_as_int(x.get(t, 0)) for t in range(k)])
        rows = [[img[j][t] for j in range(len(img))] for t in range(k)] \
            if img else [[0] * 0 for _ in range(k)]
        if img:
            self._diag, self._u = smith_normal_form(rows)
        else:
            self._diag, self._u = [], [[1 if i == j else 0 for j in range(k)]
                                       for i in range(k)]
        self._k = k
        self.torsion = [d for d in self._diag if d not in (0, 1)]
        self.betti = k - len(self._diag)

    def class_of(self, chain: dict) -> tuple:
        """Normal form of a 1-cycle: torsion coords mod d, then free coords."""
        z = {i: Q(c) for i, c in chain.items() if c}
        x = self._kelim.solve(z)
        if x is None:
            raise StructureError("not a 1-cycle")
        y = [_as_int(x.get(t, 0)) for t in range(self._k)]
        coords = [sum(self._u[i][t] * y[t] for t in range(self._k))
                  for i in range(self._k)]
        out = []
        for i, d in enumerate(self._diag):
            if d > 1:
                out.append(coords[i] % d)
        out.extend(coords[len(self._diag):])
        return tuple(out)

    def classes_equal(self, a: dict, b: dict) -> bool:
        return self.class_of(a) == self.class_of(b)

    def is_null(self, chain: dict) -> bool:
        return all(c == 0 for c in self.class_of(chain))

    def free_coords(self, chain: dict) -> tuple:
        """Coordinates in the free part only (used for monodromy maps)."""
        full = self.class_of(chain)
        nt = len(self.torsion)
        return full[nt:]

    def free_generators(self) -> list:
        """Integer cycles mapping to the free unit coordinates."""
        uinv = _int_mat_inv(self._u)
        gens = []
        for t in range(len(self._diag), self._k):
            coeffs = [uinv[i][t] for i in range(self._k)]
            chain = {}
            for i, c in enumerate(coeffs):
                if c:
                    for e, v in self._kernel[i].items():
                        chain[e] = chain.get(e, 0) + c * v
            gens.append({e: v for e, v in chain.items() if v})
        return gens


def _as_int(x):
    from .field import denom, numer

    if denom(x) != 1:
        raise StructureError("expected an integer, got a true fraction")
    return numer(x)


def _int_mat_inv(u):
    n = len(u)
    m = [[Q(x) for x in row] for row in u]
    inv = mat_inv(m)
    return [[_as_int(x) for x in row] for row in inv]


def integral_h1(complex_) -> H1Data:
    if not complex_.is_connected():
        raise InvalidComplex("integral homology needs a connected complex")
    return H1Data(complex_)

"""Stratified 2-complexes with boundary words, builders, subdivision and cellular actions.

Cells are addressed by ``(dim, id)``.  A face boundary is a closed path of
signed edge letters; the face relation it imposes on labels reads
``u_{e_m}^{s_m} ... u_{e_1}^{s_1} = 1`` (letters composed right to left).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (CompositionError, FixedCellError, UnsupportedRankError,
                     ValidationError)
from .groupoid import Letter, PresentedGroupoid, format_letter, make_word, parse_letter
from .groups import LabelGroup, abelian_group, cyclic_group
from .groups import from_json as group_from_json

DEFAULT_STRATUM = "open"

Cell = tuple[int, str]


@dataclass(frozen=True)
class Vertex:
    id: str
    stratum: str = DEFAULT_STRATUM


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    stratum: str = DEFAULT_STRATUM


@dataclass(frozen=True)
class Face:
    id: str
    boundary: tuple[Letter, ...]
    stratum: str = DEFAULT_STRATUM


class StratumPoset:
    """Strata with a specialisation order ``a <= b`` (``a`` more special than ``b``).

    The relation given is closed reflexively and transitively; antisymmetry
    is checked.
    """

    def __init__(self, strata: Iterable[str], relation: Iterable[tuple[str, str]] = ()):
        self.strata: tuple[str, ...] = tuple(dict.fromkeys(str(s) for s in strata))
        pos = {s: i for i, s in enumerate(self.strata)}
        n = len(self.strata)
        le = [[i == j for j in range(n)] for i in range(n)]
        pairs = []
        for a, b in relation:
            a, b = str(a), str(b)
            if a not in pos or b not in pos:
                raise ValidationError(f"poset relation mentions unknown stratum in {(a, b)!r}")
            le[pos[a]][pos[b]] = True
            pairs.append((a, b))
        for k in range(n):
            for i in range(n):
                if le[i][k]:
                    for j in range(n):
                        if le[k][j]:
                            le[i][j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if le[i][j] and le[j][i]:
                    raise ValidationError(f"strata {self.strata[i]!r} and {self.strata[j]!r} are mutually below each other")
        self._pos = pos
        self._le = le
        self.pairs = tuple(pairs)

    def le(self, a: str, b: str) -> bool:
        try:
            return self._le[self._pos[a]][self._pos[b]]
        except KeyError:
            raise ValidationError(f"unknown stratum in comparison {a!r} <= {b!r}") from None

    def __contains__(self, s) -> bool:
        return s in self._pos

    def __eq__(self, other) -> bool:
        return isinstance(other, StratumPoset) and self.strata == other.strata and self._le == other._le

    def __hash__(self) -> int:
        return hash(self.strata)

    def to_json(self) -> list:
        return [[a, b] for a, b in self.pairs]

    @classmethod
    def discrete(cls, strata: Iterable[str]) -> "StratumPoset":
        return cls(strata)


class StratComplex2:
    """A finite stratified 2-complex.

    Construction audits: unique ids per dimension, endpoints declared,
    boundary words closed and composable, and strata monotone along
    closures (vertex <= edge <= face in the specialisation order).
    """

    def __init__(self, vertices: Sequence, edges: Sequence = (), faces: Sequence = (),
                 poset: StratumPoset | None = None, *, name: str = ""):
        self.name = name
        self.vertices: tuple[Vertex, ...] = tuple(_coerce(Vertex, v) for v in vertices)
        self.edges: tuple[Edge, ...] = tuple(_coerce(Edge, e) for e in edges)
        fs = []
        for f in faces:
            f = _coerce(Face, f)
            fs.append(Face(f.id, tuple(parse_letter(x) for x in f.boundary), f.stratum))
        self.faces: tuple[Face, ...] = tuple(fs)
        used = [c.stratum for c in (*self.vertices, *self.edges, *self.faces)]
        if poset is None:
            poset = StratumPoset(used)
        self.poset = poset
        self.vertex = {v.id: v for v in self.vertices}
        self.edge = {e.id: e for e in self.edges}
        self.face = {f.id: f for f in self.faces}
        self.vertex_index = {v.id: i for i, v in enumerate(self.vertices)}
        self.edge_index = {e.id: i for i, e in enumerate(self.edges)}
        self.face_index = {f.id: i for i, f in enumerate(self.faces)}
        self._validate()

    def _validate(self) -> None:
        for kind, cells, table in (("vertex", self.vertices, self.vertex), ("edge", self.edges, self.edge),
                                   ("face", self.faces, self.face)):
            if len(table) != len(cells):
                raise ValidationError(f"duplicate {kind} ids")
            for c in cells:
                if c.stratum not in self.poset:
                    raise ValidationError(f"{kind} {c.id!r} has undeclared stratum {c.stratum!r}")
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in self.vertex:
                    raise ValidationError(f"edge {e.id!r} has undeclared endpoint {end!r}")
                if not self.poset.le(self.vertex[end].stratum, e.stratum):
                    raise ValidationError(f"edge {e.id!r} stratum {e.stratum!r} is not above its endpoint {end!r}")
        ends = self.edge_ends()
        for f in self.faces:
            if not f.boundary:
                raise ValidationError(f"face {f.id!r} has empty boundary")
            try:
                w = make_word(ends, f.boundary)
            except (CompositionError, ValidationError) as exc:
                raise ValidationError(f"face {f.id!r}: {exc}") from None
            if w.source != w.target:
                raise ValidationError(f"face {f.id!r} boundary is not closed")
            for gen, _ in f.boundary:
                if not self.poset.le(self.edge[gen].stratum, f.stratum):
                    raise ValidationError(f"face {f.id!r} stratum is not above boundary edge {gen!r}")

    # -- queries -----------------------------------------------------------

    def edge_ends(self) -> dict[str, tuple[str, str]]:
        return {e.id: (e.src, e.dst) for e in self.edges}

    def boundary_vertices(self, f: Face) -> list[str]:
        """Vertices visited by the boundary walk, starting point first (length = len(boundary))."""
        w = make_word(self.edge_ends(), f.boundary)
        return list(w.objects[:-1])

    def stratum_of(self, cell: Cell) -> str:
        dim, cid = cell
        return (self.vertex, self.edge, self.face)[dim][cid].stratum

    def cells(self, dim: int) -> tuple:
        return (self.vertices, self.edges, self.faces)[dim]

    def cell_counts(self) -> tuple[int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.faces))

    def euler_characteristic(self) -> int:
        v, e, f = self.cell_counts()
        return v - e + f

    def components(self) -> list[list[str]]:
        """Vertex sets of connected components, each in declaration order."""
        adj: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            adj[e.src].append(e.dst)
            adj[e.dst].append(e.src)
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v.id in seen:
                continue
            comp = []
            seen.add(v.id)
            queue = deque([v.id])
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(sorted(comp, key=self.vertex_index.get))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __repr__(self) -> str:
        v, e, f = self.cell_counts()
        return f"StratComplex2({self.name or '?'}: V={v}, E={e}, F={f})"

    def signature(self) -> tuple:
        """Hashable description used for cell-for-cell comparison."""
        return (self.vertices, self.edges, self.faces, self.poset.strata)

    def __eq__(self, other) -> bool:
        return isinstance(other, StratComplex2) and self.signature() == other.signature() \
            and self.poset == other.poset

    def __hash__(self) -> int:
        return hash(self.signature())

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "stratum": v.stratum} for v in self.vertices],
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "stratum": e.stratum} for e in self.edges],
            "faces": [{"id": f.id, "boundary": [format_letter(x) for x in f.boundary], "stratum": f.stratum}
                      for f in self.faces],
            "poset": self.poset.to_json(),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "StratComplex2":
        if "builder" in doc:
            return build_from_spec(doc["builder"])
        verts = [Vertex(str(v["id"]), str(v.get("stratum", DEFAULT_STRATUM))) for v in doc.get("vertices", [])]
        edges = [Edge(str(e["id"]), str(e["src"]), str(e["dst"]), str(e.get("stratum", DEFAULT_STRATUM)))
                 for e in doc.get("edges", [])]
        faces = [Face(str(f["id"]), tuple(parse_letter(x) for x in f["boundary"]),
                      str(f.get("stratum", DEFAULT_STRATUM))) for f in doc.get("faces", [])]
        strata = [c.stratum for c in (*verts, *edges, *faces)]
        pairs = [tuple(p) for p in doc.get("poset", [])]
        strata += [s for p in pairs for s in p]
        return cls(verts, edges, faces, StratumPoset(strata, pairs), name=doc.get("name", ""))


def _coerce(kind, x):
    if isinstance(x, kind):
        return x
    if isinstance(x, Mapping):
        return kind(**x)
    if isinstance(x, str) and kind is Vertex:
        return Vertex(x)
    return kind(*x)


def skeleton_groupoid(K: StratComplex2) -> PresentedGroupoid:
    """Edge-path groupoid of the 2-skeleton: one relation ``boundary = identity`` per face."""
    rels = []
    ends = K.edge_ends()
    for f in K.faces:
        w = make_word(ends, f.boundary)
        rels.append((w, make_word(ends, [], w.source)))
    return PresentedGroupoid([v.id for v in K.vertices], [(e.id, e.src, e.dst) for e in K.edges],
                             rels, name=f"P({K.name})" if K.name else "")


# ---------------------------------------------------------------------------
# builders


def _stratum(strata, cid: str, default: str) -> str:
    if strata is None:
        return default
    if isinstance(strata, str):
        return strata
    return str(strata.get(cid, default))


def build_cycle(length: int, strata: Mapping[str, str] | str | None = None) -> StratComplex2:
    """Cyclic graph ``v0 -> v1 -> ... -> v{l-1} -> v0`` with edges ``e_a : v_a -> v_{a+1}``."""
    if not isinstance(length, int) or length < 1:
        raise ValueError(f"cycle length must be a positive integer, got {length!r}")
    verts = [Vertex(f"v{a}", _stratum(strata, f"v{a}", DEFAULT_STRATUM)) for a in range(length)]
    edges = [Edge(f"e{a}", f"v{a}", f"v{(a + 1) % length}", _stratum(strata, f"e{a}", DEFAULT_STRATUM))
             for a in range(length)]
    return StratComplex2(verts, edges, (), name=f"cycle{length}")


def sector_count(n: int, k: int) -> int:
    """Number of sectors ``2 n (k - 1)`` around a pole of order ``k`` at Kummer level ``n``."""
    if n < 1 or k < 2:
        raise ValueError("need level n >= 1 and pole order k >= 2")
    return 2 * n * (k - 1)


def build_torus_chambers(walls: Sequence[int], strata: Mapping[str, str] | str | None = None) -> StratComplex2:
    """Dual chamber complex of a product wall arrangement on the angular torus.

    Rank 1 is :func:`build_cycle`.  For walls ``(a, b)`` the chambers are
    ``c{i}_{j}``, crossings ``h{i}_{j} : c(i,j) -> c(i+1,j)`` and
    ``v{i}_{j} : c(i,j) -> c(i,j+1)`` (increasing angle), and corners are the
    commutation squares ``h(i,j) v(i+1,j) h(i,j+1)^-1 v(i,j)^-1``.
    """
    walls = [int(x) for x in walls]
    if not walls:
        raise ValueError("need at least one angular direction")
    if any(x < 1 for x in walls):
        raise ValueError(f"every direction needs at least one wall, got {walls}")
    if len(walls) == 1:
        return build_cycle(walls[0], strata)
    if len(walls) > 2:
        raise UnsupportedRankError(f"torus chambers of rank {len(walls)} are not built; "
                                   "only the 2-skeleton of a rank <= 2 factor is supported")
    a, b = walls
    verts, edges, faces = [], [], []
    for j in range(b):
        for i in range(a):
            cid = f"c{i}_{j}"
            verts.append(Vertex(cid, _stratum(strata, cid, DEFAULT_STRATUM)))
    for j in range(b):
        for i in range(a):
            hid, vid = f"h{i}_{j}", f"v{i}_{j}"
            edges.append(Edge(hid, f"c{i}_{j}", f"c{(i + 1) % a}_{j}", _stratum(strata, hid, DEFAULT_STRATUM)))
            edges.append(Edge(vid, f"c{i}_{j}", f"c{i}_{(j + 1) % b}", _stratum(strata, vid, DEFAULT_STRATUM)))
    for j in range(b):
        for i in range(a):
            fid = f"f{i}_{j}"
            bd = ((f"h{i}_{j}", 1), (f"v{(i + 1) % a}_{j}", 1), (f"h{i}_{(j + 1) % b}", -1), (f"v{i}_{j}", -1))
            faces.append(Face(fid, bd, _stratum(strata, fid, DEFAULT_STRATUM)))
    return StratComplex2(verts, edges, faces, name=f"torus{a}x{b}")


def build_triangle(strata: Mapping[str, str] | str | None = None) -> StratComplex2:
    """One 2-simplex: ``e01, e12, e02`` with boundary ``e01 e12 e02^-1``."""
    s = lambda c: _stratum(strata, c, DEFAULT_STRATUM)  # noqa: E731
    verts = [Vertex(x, s(x)) for x in ("0", "1", "2")]
    edges = [Edge("e01", "0", "1", s("e01")), Edge("e12", "1", "2", s("e12")), Edge("e02", "0", "2", s("e02"))]
    faces = [Face("t", (("e01", 1), ("e12", 1), ("e02", -1)), s("t"))]
    return StratComplex2(verts, edges, faces, name="triangle")


def build_cone(n: int) -> StratComplex2:
    """Cone on an ``n``-cycle: apex ``a``, spokes ``s_i : a -> v_i``, triangles ``s_i e_i s_{i+1}^-1``."""
    if n < 1:
        raise ValueError("cone base needs at least one edge")
    verts = [Vertex("a")] + [Vertex(f"v{i}") for i in range(n)]
    edges = [Edge(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    edges += [Edge(f"s{i}", "a", f"v{i}") for i in range(n)]
    faces = [Face(f"t{i}", ((f"s{i}", 1), (f"e{i}", 1), (f"s{(i + 1) % n}", -1))) for i in range(n)]
    return StratComplex2(verts, edges, faces, name=f"cone{n}")


def build_from_spec(spec: Mapping) -> StratComplex2:
    """``{"type": "cycle", "length": l}``, ``{"type": "torus", "walls": [a, b]}``,
    ``{"type": "triangle"}``, ``{"type": "cone", "n": n}``; optional ``"subdivide": k``."""
    kind = spec.get("type")
    if kind == "cycle":
        K = build_cycle(int(spec["length"]))
    elif kind == "torus":
        K = build_torus_chambers(spec["walls"])
    elif kind == "triangle":
        K = build_triangle()
    elif kind == "cone":
        K = build_cone(int(spec["n"]))
    else:
        raise ValidationError(f"unknown complex builder {kind!r}")
    for _ in range(int(spec.get("subdivide", 0))):
        K = barycentric_subdivide(K)[0]
    return K


# ---------------------------------------------------------------------------
# subdivision and cell maps


@dataclass(frozen=True)
class EdgeRule:
    """How the label of a refined edge is read off the coarse cocycle.

    ``kind`` is ``"edge"`` (copy of edge ``ref``), ``"half"`` (``part`` 0
    carries the label of ``ref``, part 1 the identity) or ``"spoke"``
    (``part``-th spoke of face ``ref``, fixed by transport around the face).
    """

    kind: str
    ref: str
    part: int = 0


@dataclass(frozen=True)
class CellStep:
    """One elementary refinement ``fine -> coarse``."""

    fine: StratComplex2
    coarse: StratComplex2
    carrier: Mapping[Cell, Cell]
    edge_rules: Mapping[str, EdgeRule]


@dataclass(frozen=True)
class CellMap:
    """A composable chain of refinements, listed from the finest complex down."""

    steps: tuple[CellStep, ...]
    base: StratComplex2 = field(default=None)

    @property
    def source(self) -> StratComplex2:
        return self.steps[0].fine if self.steps else self.base

    @property
    def target(self) -> StratComplex2:
        return self.steps[-1].coarse if self.steps else self.base

    @classmethod
    def identity(cls, K: StratComplex2) -> "CellMap":
        return cls((), K)

    def carrier(self, cell: Cell) -> Cell:
        for step in self.steps:
            cell = step.carrier[cell]
        return cell

    def then(self, coarser: "CellMap") -> "CellMap":
        """Compose ``self : A -> B`` with ``coarser : B -> C``."""
        if self.target is not coarser.source and self.target != coarser.source:
            raise CompositionError("cell maps are not composable")
        return CellMap(self.steps + coarser.steps, self.source)


def split_letter(letter: Letter) -> list[Letter]:
    e, s = letter
    if s == 1:
        return [(f"{e}.0", 1), (f"{e}.1", 1)]
    return [(f"{e}.1", -1), (f"{e}.0", -1)]


def barycentric_subdivide(K: StratComplex2) -> tuple[StratComplex2, CellMap]:
    """Split every edge at a midpoint and cone every face from a barycenter.

    New ids: midpoint ``e.m``, halves ``e.0 : src -> e.m`` and
    ``e.1 : e.m -> dst``, barycenter ``f.b``, spokes ``f.s{j} : f.b -> w_j``
    (one per position ``w_j`` of the split boundary walk) and triangles
    ``f.t{j}`` with boundary ``s_j h_j s_{j+1}^-1``.  Every new cell inherits
    the stratum of the cell it subdivides.
    """
    verts = list(K.vertices)
    edges: list[Edge] = []
    faces: list[Face] = []
    carrier: dict[Cell, Cell] = {(0, v.id): (0, v.id) for v in K.vertices}
    rules: dict[str, EdgeRule] = {}
    for e in K.edges:
        mid = f"{e.id}.m"
        verts.append(Vertex(mid, e.stratum))
        carrier[(0, mid)] = (1, e.id)
        for part, (s, t) in enumerate(((e.src, mid), (mid, e.dst))):
            hid = f"{e.id}.{part}"
            edges.append(Edge(hid, s, t, e.stratum))
            carrier[(1, hid)] = (1, e.id)
            rules[hid] = EdgeRule("half", e.id, part)
    ends = {e.id: (e.src, e.dst) for e in edges}
    for f in K.faces:
        bary = f"{f.id}.b"
        verts.append(Vertex(bary, f.stratum))
        carrier[(0, bary)] = (2, f.id)
        halves = [h for letter in f.boundary for h in split_letter(letter)]
        walk = make_word(ends, halves).objects
        m = len(halves)
        for j in range(m):
            sid = f"{f.id}.s{j}"
            edges.append(Edge(sid, bary, walk[j], f.stratum))
            carrier[(1, sid)] = (2, f.id)
            rules[sid] = EdgeRule("spoke", f.id, j)
        for j in range(m):
            tid = f"{f.id}.t{j}"
            faces.append(Face(tid, ((f"{f.id}.s{j}", 1), halves[j], (f"{f.id}.s{(j + 1) % m}", -1)), f.stratum))
            carrier[(2, tid)] = (2, f.id)
    fine = StratComplex2(verts, edges, faces, K.poset, name=f"sd({K.name})" if K.name else "")
    return fine, CellMap((CellStep(fine, K, carrier, rules),))


def subdivide_times(K: StratComplex2, times: int) -> tuple[StratComplex2, CellMap]:
    cm = CellMap.identity(K)
    for _ in range(times):
        K, step = barycentric_subdivide(K)
        cm = step.then(cm)
    return K, cm


# ---------------------------------------------------------------------------
# cellular actions


class CellularAction:
    """A finite group acting on a complex by orientation-preserving cellular maps.

    ``perms[g]`` is a triple of dicts (vertices, edges, faces) for each group
    element index ``g``.  ``label_perms[g]``, when given, is the action of
    ``g`` on label-group elements (as a list of element indices or names);
    it is resolved against a label group by the descent module.
    """

    def __init__(self, group: LabelGroup, complex_: StratComplex2,
                 perms: Sequence[tuple[Mapping[str, str], Mapping[str, str], Mapping[str, str]]],
                 label_perms: Sequence | None = None, *, name: str = ""):
        self.group = group
        self.complex = complex_
        self.name = name
        if len(perms) != group.order:
            raise ValidationError("need one cell permutation per group element")
        self.perms = tuple(tuple(dict(p) for p in triple) for triple in perms)
        self.label_perms = None if label_perms is None else tuple(label_perms)
        if self.label_perms is not None and len(self.label_perms) != group.order:
            raise ValidationError("label action must list one permutation per group element")
        self._validate()

    def act(self, g: int, cell: Cell) -> Cell:
        dim, cid = cell
        return (dim, self.perms[g][dim][cid])

    def vertex(self, g: int, v: str) -> str:
        return self.perms[g][0][v]

    def edge(self, g: int, e: str) -> str:
        return self.perms[g][1][e]

    def face(self, g: int, f: str) -> str:
        return self.perms[g][2][f]

    def _validate(self) -> None:
        K, G = self.complex, self.group
        for g in range(G.order):
            for dim in range(3):
                ids = [c.id for c in K.cells(dim)]
                p = self.perms[g][dim]
                if set(p) != set(ids) or sorted(p.values()) != sorted(ids):
                    raise ValidationError(f"element {G.name_of(g)} does not permute the {('vertices', 'edges', 'faces')[dim]}")
                for cid in ids:
                    if K.stratum_of((dim, cid)) != K.stratum_of((dim, p[cid])):
                        raise ValidationError(f"element {G.name_of(g)} does not preserve the stratum of {cid!r}")
            for e in K.edges:
                img = K.edge[self.edge(g, e.id)]
                if (img.src, img.dst) != (self.vertex(g, e.src), self.vertex(g, e.dst)):
                    raise ValidationError(f"element {G.name_of(g)} does not preserve the orientation of {e.id!r}")
            for f in K.faces:
                moved = tuple((self.edge(g, x), s) for x, s in f.boundary)
                target = K.face[self.face(g, f.id)].boundary
                if not _cyclic_equal(moved, target):
                    raise ValidationError(f"element {G.name_of(g)} does not carry the boundary of {f.id!r} to a boundary")
        for dim in range(3):
            for c in K.cells(dim):
                if self.perms[G.identity][dim][c.id] != c.id:
                    raise ValidationError("identity element must act trivially")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                for dim in range(3):
                    pg, ph, pgh = self.perms[g][dim], self.perms[h][dim], self.perms[gh][dim]
                    if any(pgh[c] != pg[ph[c]] for c in ph):
                        raise ValidationError(
                            f"cell permutations are not an action: ({G.name_of(g)}{G.name_of(h)}) != {G.name_of(g)} o {G.name_of(h)}")

    def fixed_cells(self) -> list[tuple[str, Cell]]:
        out = []
        for g in range(self.group.order):
            if g == self.group.identity:
                continue
            for dim in range(3):
                for c in self.complex.cells(dim):
                    if self.perms[g][dim][c.id] == c.id:
                        out.append((self.group.name_of(g), (dim, c.id)))
        return out

    def is_free(self) -> bool:
        return not self.fixed_cells()

    def to_json(self) -> dict:
        doc = {"group": self.group.to_json(),
               "permutations": [{"vertices": p[0], "edges": p[1], "faces": p[2]} for p in self.perms]}
        if self.label_perms is not None:
            doc["label_action"] = [list(x) for x in self.label_perms]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping, K: StratComplex2) -> "CellularAction":
        label = doc.get("label_action")
        kind = doc.get("type")
        if kind == "cycle_rotation":
            return cycle_rotation(K, int(doc["order"]), label)
        if kind == "torus_translation":
            return torus_translation(K, doc["orders"], label)
        if kind == "trivial":
            return trivial_action(K)
        G = group_from_json(doc["group"])
        perms = [(p.get("vertices", {}), p.get("edges", {}), p.get("faces", {})) for p in doc["permutations"]]
        return cls(G, K, perms, label)


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[i:] + a[:i] == b for i in range(len(a)))


def trivial_action(K: StratComplex2) -> CellularAction:
    from .groups import trivial_group
    ident = tuple({c.id: c.id for c in K.cells(d)} for d in range(3))
    return CellularAction(trivial_group(), K, [ident], name="trivial")


def cycle_rotation(K: StratComplex2, order: int, label_perms=None) -> CellularAction:
    """``Z/order`` rotating a :func:`build_cycle` complex by ``l/order`` steps per generator."""
    ell = len(K.vertices)
    if ell % order:
        raise ValidationError(f"rotation of order {order} does not divide cycle length {ell}")
    step = ell // order
    G = cyclic_group(order)
    perms = []
    for g in range(order):
        sh = g * step
        perms.append(({f"v{a}": f"v{(a + sh) % ell}" for a in range(ell)},
                      {f"e{a}": f"e{(a + sh) % ell}" for a in range(ell)}, {}))
    return CellularAction(G, K, perms, label_perms, name=f"rot{order}")


def torus_translation(K: StratComplex2, orders: Sequence[int], label_perms=None) -> CellularAction:
    """``Z/n1 x Z/n2`` translating a :func:`build_torus_chambers` complex."""
    orders = [int(n) for n in orders]
    if len(orders) == 1:
        return cycle_rotation(K, orders[0], label_perms)
    xs = sorted({int(v.id[1:].split("_")[0]) for v in K.vertices})
    ys = sorted({int(v.id.split("_")[1]) for v in K.vertices})
    a, b = len(xs), len(ys)
    n1, n2 = orders
    if a % n1 or b % n2:
        raise ValidationError(f"translation orders {orders} do not divide the wall counts {(a, b)}")
    G = abelian_group(orders)
    perms = []
    for x in range(n1):
        for y in range(n2):
            dx, dy = x * (a // n1), y * (b // n2)
            mv = lambda i, j: (f"{(i + dx) % a}_{(j + dy) % b}")  # noqa: E731
            perms.append(({f"c{i}_{j}": "c" + mv(i, j) for i in range(a) for j in range(b)},
                          {**{f"h{i}_{j}": "h" + mv(i, j) for i in range(a) for j in range(b)},
                           **{f"v{i}_{j}": "v" + mv(i, j) for i in range(a) for j in range(b)}},
                          {f"f{i}_{j}": "f" + mv(i, j) for i in range(a) for j in range(b)}))
    return CellularAction(G, K, perms, label_perms, name="translation")


def quotient_by_action(K: StratComplex2, A: CellularAction) -> tuple[StratComplex2, dict[Cell, str]]:
    """Orbit complex of a free action; each orbit is named after its first cell."""
    if A.complex is not K and A.complex != K:
        raise ValidationError("action is defined on a different complex")
    bad = A.fixed_cells()
    if bad:
        raise FixedCellError(bad)
    proj: dict[Cell, str] = {}
    reps: list[list] = [[], [], []]
    for dim in range(3):
        for c in K.cells(dim):
            if (dim, c.id) in proj:
                continue
            reps[dim].append(c)
            for g in range(A.group.order):
                proj[A.act(g, (dim, c.id))] = c.id
    verts = [Vertex(v.id, v.stratum) for v in reps[0]]
    edges = [Edge(e.id, proj[(0, e.src)], proj[(0, e.dst)], e.stratum) for e in reps[1]]
    faces = [Face(f.id, tuple((proj[(1, x)], s) for x, s in f.boundary), f.stratum) for f in reps[2]]
    Q = StratComplex2(verts, edges, faces, K.poset, name=f"{K.name}/{A.name}" if K.name else "")
    return Q, proj

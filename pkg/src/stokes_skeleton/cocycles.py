"""Edge-labelled cocycles on a stratified 2-complex and their vertex-gauge classes.

Conventions: a face with boundary ``e_1^{s_1} ... e_m^{s_m}`` imposes
``u_{e_m}^{s_m} ... u_{e_1}^{s_1} = 1`` in the face's group, each label first
pushed along the restriction from the edge stratum.  A gauge ``h`` acts by
``u_e -> h_{t(e)} u_e h_{s(e)}^-1``.  Labels are group element indices and a
cocycle stores one label per edge in declaration order.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complex2 import CellMap, StratComplex2, barycentric_subdivide, split_letter
from .errors import CapExceededError, IncompleteError, InvalidAssignmentError, ValidationError
from .groups import GroupHom, LabelGroup, StratumGroupAssignment

DEFAULT_CAP = 10 ** 7


def default_cap() -> int:
    """Enumeration cap, overridable through ``STOKES_CAP``."""
    raw = os.environ.get("STOKES_CAP")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError("STOKES_CAP must be positive")
    return cap


@dataclass(frozen=True, order=True)
class Cocycle:
    """One label per edge, in the complex's edge declaration order."""

    labels: tuple[int, ...]

    def as_dict(self, ctx: "LabelContext", names: bool = True) -> dict[str, int | str]:
        out = {}
        for e, u in zip(ctx.K.edges, self.labels):
            out[e.id] = ctx.edge_group[ctx.K.edge_index[e.id]].name_of(u) if names else u
        return out


@dataclass(frozen=True)
class GaugeTransform:
    """One group element per vertex, in vertex declaration order."""

    values: tuple[int, ...]

    def as_dict(self, ctx: "LabelContext") -> dict[str, str]:
        return {v.id: ctx.vertex_group[i].name_of(h) for i, (v, h) in enumerate(zip(ctx.K.vertices, self.values))}


@dataclass(frozen=True)
class Violation:
    face: str
    product: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    cocycle: Cocycle | None
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.valid


def as_assignment(K: StratComplex2, groups) -> StratumGroupAssignment:
    """Accept a single :class:`LabelGroup` as shorthand for a uniform assignment."""
    if isinstance(groups, LabelGroup):
        strata = list(K.poset.strata) or ["open"]
        return StratumGroupAssignment.uniform(strata, groups)
    return groups


class LabelContext:
    """A complex together with its label groups, precomputed for fast evaluation."""

    def __init__(self, K: StratComplex2, groups):
        self.K = K
        self.groups = as_assignment(K, groups)
        self.groups.validate(K.poset)
        gp = self.groups
        self.vertex_group = [gp.group(v.stratum) for v in K.vertices]
        self.edge_group = [gp.group(e.stratum) for e in K.edges]
        self.face_group = [gp.group(f.stratum) for f in K.faces]
        self.uniform = gp.is_uniform() or (
            all(g is self.edge_group[0] for g in self.edge_group + self.vertex_group + self.face_group)
            and all(gp.res(a, b).is_identity() for a in K.poset.strata for b in K.poset.strata
                    if a != b and K.poset.le(a, b) and a in gp.groups and b in gp.groups))
        # edge -> face restriction images, or None for the identity
        self.face_letters: list[tuple[tuple[int, int, tuple[int, ...] | None], ...]] = []
        self.face_preimage: list[dict[int, dict[int, int] | None]] = []
        for f in K.faces:
            letters, pre = [], {}
            for eid, sgn in f.boundary:
                i = K.edge_index[eid]
                hom = gp.res(K.edges[i].stratum, f.stratum)
                img = None if hom.is_identity() else hom.images
                letters.append((i, sgn, img))
                pre[i] = None if img is None else hom.preimage_table()
            self.face_letters.append(tuple(letters))
            self.face_preimage.append(pre)
        self.src_res: list[GroupHom] = []
        self.dst_res: list[GroupHom] = []
        self.src_idx: list[int] = []
        self.dst_idx: list[int] = []
        for e in K.edges:
            self.src_res.append(gp.res(K.vertex[e.src].stratum, e.stratum))
            self.dst_res.append(gp.res(K.vertex[e.dst].stratum, e.stratum))
            self.src_idx.append(K.vertex_index[e.src])
            self.dst_idx.append(K.vertex_index[e.dst])
        self.edge_faces: list[list[int]] = [[] for _ in K.edges]
        for fi, letters in enumerate(self.face_letters):
            for i in sorted({i for i, _, _ in letters}):
                self.edge_faces[i].append(fi)

    @property
    def group(self) -> LabelGroup:
        """The common label group of a uniform context."""
        if not self.uniform:
            raise ValidationError("label groups differ between strata")
        return self.edge_group[0] if self.edge_group else self.vertex_group[0]

    def face_product(self, fi: int, labels: Sequence[int]) -> int:
        G = self.face_group[fi]
        acc = G.identity
        for i, sgn, img in self.face_letters[fi]:
            x = labels[i] if img is None else img[labels[i]]
            if sgn == -1:
                x = G.inv(x)
            acc = G.mul(x, acc)
        return acc

    def gauge(self, c: Cocycle, h: GaugeTransform | Sequence[int]) -> Cocycle:
        hv = h.values if isinstance(h, GaugeTransform) else tuple(h)
        out = []
        for i, u in enumerate(c.labels):
            G = self.edge_group[i]
            ht = self.dst_res[i](hv[self.dst_idx[i]])
            hs = self.src_res[i](hv[self.src_idx[i]])
            out.append(G.mul(G.mul(ht, u), G.inv(hs)))
        return Cocycle(tuple(out))

    def identity_cocycle(self) -> Cocycle:
        return Cocycle(tuple(G.identity for G in self.edge_group))

    def identity_gauge(self) -> GaugeTransform:
        return GaugeTransform(tuple(G.identity for G in self.vertex_group))


def _context(K, groups) -> LabelContext:
    return groups if isinstance(groups, LabelContext) else LabelContext(K, groups)


def validate(K: StratComplex2, assignment: Mapping[str, int | str], groups) -> ValidationReport:
    """Check the face relations for an edge labelling given by id -> element (index or name)."""
    ctx = _context(K, groups)
    missing = [e.id for e in K.edges if e.id not in assignment]
    if missing:
        raise IncompleteError(f"no label for edges {missing}")
    extra = set(assignment) - set(K.edge)
    if extra:
        raise InvalidAssignmentError(f"labels given for unknown edges {sorted(extra)}")
    labels = []
    for i, e in enumerate(K.edges):
        G = ctx.edge_group[i]
        x = assignment[e.id]
        try:
            labels.append(G.index_of(x))
        except (KeyError, ValueError, IndexError):
            raise InvalidAssignmentError(f"label {x!r} of edge {e.id!r} is not in group {G.name}") from None
    return validate_labels(ctx, labels)


def validate_labels(ctx: LabelContext, labels: Sequence[int]) -> ValidationReport:
    bad = []
    for fi, f in enumerate(ctx.K.faces):
        p = ctx.face_product(fi, labels)
        G = ctx.face_group[fi]
        if p != G.identity:
            bad.append(Violation(f.id, G.name_of(p)))
    c = Cocycle(tuple(labels))
    return ValidationReport(not bad, None if bad else c, tuple(bad))


# ---------------------------------------------------------------------------
# search


def _search(ctx: LabelContext, fixed: Mapping[int, int], cap: int):
    """Backtracking over edge labels with face propagation.

    A face whose last unknown edge occurs once determines that label (when
    the required value lies in the image of the restriction).  Branching
    picks an unknown edge of the face with fewest unknowns, else the first
    unknown edge.
    """
    K = ctx.K
    n = len(K.edges)
    labels: list[int | None] = [None] * n
    face_edges = [sorted({i for i, _, _ in letters}) for letters in ctx.face_letters]
    occ = [{i: sum(1 for j, _, _ in letters if j == i) for i in fe}
           for letters, fe in zip(ctx.face_letters, face_edges)]
    unknown = [len(fe) for fe in face_edges]
    trail: list[int] = []
    visits = [0]

    def assign(i: int, u: int) -> bool:
        stack = [(i, u)]
        while stack:
            i, u = stack.pop()
            visits[0] += 1
            if visits[0] > cap:
                raise CapExceededError("cocycle enumeration", cap)
            if labels[i] is not None:
                if labels[i] != u:
                    return False
                continue
            labels[i] = u
            trail.append(i)
            for fi in ctx.edge_faces[i]:
                unknown[fi] -= 1
            for fi in ctx.edge_faces[i]:
                if unknown[fi] == 0:
                    if ctx.face_product(fi, labels) != ctx.face_group[fi].identity:
                        return False
                elif unknown[fi] == 1:
                    forced = solve(fi)
                    if forced is False:
                        return False
                    if forced is not None:
                        stack.append(forced)
        return True

    def solve(fi: int):
        k = next(j for j in face_edges[fi] if labels[j] is None)
        if occ[fi][k] != 1:
            return None
        G = ctx.face_group[fi]
        before, after = G.identity, G.identity
        seen = False
        sign = 1
        for i, sgn, img in ctx.face_letters[fi]:
            if i == k:
                seen, sign = True, sgn
                continue
            x = labels[i] if img is None else img[labels[i]]
            if sgn == -1:
                x = G.inv(x)
            if seen:
                after = G.mul(x, after)
            else:
                before = G.mul(x, before)
        y = G.mul(G.inv(after), G.inv(before))
        if sign == -1:
            y = G.inv(y)
        pre = ctx.face_preimage[fi][k]
        if pre is not None:
            if y not in pre:
                return False
            y = pre[y]
        return (k, y)

    def undo(mark: int) -> None:
        while len(trail) > mark:
            i = trail.pop()
            labels[i] = None
            for fi in ctx.edge_faces[i]:
                unknown[fi] += 1

    def pick() -> int | None:
        best, best_f = None, None
        for fi, u in enumerate(unknown):
            if u and (best is None or u < best):
                best, best_f = u, fi
                if u == 1:
                    break
        if best_f is not None:
            return next(j for j in face_edges[best_f] if labels[j] is None)
        for i in range(n):
            if labels[i] is None:
                return i
        return None

    def rec():
        i = pick()
        if i is None:
            yield Cocycle(tuple(labels))
            return
        for u in range(ctx.edge_group[i].order):
            mark = len(trail)
            if assign(i, u):
                yield from rec()
            undo(mark)

    ok = True
    for i, u in fixed.items():
        ok = ok and assign(i, u)
    if ok:
        yield from rec()


def enumerate_cocycles(K: StratComplex2, groups, *, cap: int | None = None,
                       fixed: Mapping[str, int] | None = None) -> list[Cocycle]:
    """All cocycles, sorted by label tuple in edge declaration order."""
    ctx = _context(K, groups)
    cap = default_cap() if cap is None else cap
    fx = {K.edge_index[e]: u for e, u in (fixed or {}).items()}
    return sorted(_search(ctx, fx, cap))


# ---------------------------------------------------------------------------
# gauge fixing and orbits


def spanning_tree(K: StratComplex2) -> list[tuple[int, int, int]]:
    """BFS forest from the least vertex of each component.

    Returns ``(edge index, parent vertex index, child vertex index)`` in
    discovery order; adjacency is scanned in edge declaration order.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in K.vertices]
    for i, e in enumerate(K.edges):
        s, t = K.vertex_index[e.src], K.vertex_index[e.dst]
        adj[s].append((i, t))
        adj[t].append((i, s))
    seen = [False] * len(K.vertices)
    tree = []
    for root in range(len(K.vertices)):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for i, y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    tree.append((i, x, y))
                    queue.append(y)
    return tree


def component_roots(K: StratComplex2) -> list[int]:
    return [K.vertex_index[c[0]] for c in K.components()]


def tree_normalize(K: StratComplex2, c: Cocycle, groups) -> tuple[Cocycle, GaugeTransform]:
    """Gauge-equivalent cocycle that is the identity on :func:`spanning_tree`.

    Returns the normalised cocycle and the gauge ``h`` with ``h . c`` equal
    to it; ``h`` is the identity at every component root.
    """
    ctx = _context(K, groups)
    G = ctx.group
    h = [G.identity] * len(K.vertices)
    for i, parent, child in spanning_tree(K):
        u = c.labels[i]
        if ctx.src_idx[i] == parent:
            h[child] = G.mul(h[parent], G.inv(u))
        else:
            h[child] = G.mul(h[parent], u)
    gauge = GaugeTransform(tuple(h))
    return ctx.gauge(c, gauge), gauge


def _conjugation_min(G: LabelGroup, labels: tuple[int, ...], comps: list[list[int]]) -> tuple[int, ...]:
    """Lexicographic minimum over independent conjugation on each component's edges."""
    out = list(labels)
    for edges in comps:
        best = None
        for h in range(G.order):
            cand = tuple(G.conj(h, labels[i]) for i in edges)
            if best is None or cand < best:
                best = cand
        for i, x in zip(edges, best):
            out[i] = x
    return tuple(out)


def _edge_components(K: StratComplex2) -> list[list[int]]:
    comp_of = {}
    for ci, comp in enumerate(K.components()):
        for v in comp:
            comp_of[v] = ci
    comps: list[list[int]] = [[] for _ in K.components()]
    for i, e in enumerate(K.edges):
        comps[comp_of[e.src]].append(i)
    return comps


def canonical_representative(K: StratComplex2, c: Cocycle, groups) -> Cocycle:
    """Minimal tree-normalised cocycle in the gauge orbit of ``c`` (uniform groups)."""
    ctx = _context(K, groups)
    tn, _ = tree_normalize(K, c, ctx)
    return Cocycle(_conjugation_min(ctx.group, tn.labels, _edge_components(K)))


@dataclass(frozen=True)
class Orbit:
    representative: Cocycle
    size: int


def _gauge_moves(ctx: LabelContext):
    gens = [G.generators() for G in ctx.vertex_group]

    def moves(c: Cocycle):
        for v in range(len(ctx.K.vertices)):
            for g in gens[v]:
                h = list(ctx.identity_gauge().values)
                h[v] = g
                yield ctx.gauge(c, h)

    return moves


def gauge_orbits(K: StratComplex2, cocycles: Sequence[Cocycle], groups, *, cap: int | None = None) -> list[Orbit]:
    """Partition ``cocycles`` (a gauge-closed set) into orbits, sorted by representative.

    Uniform label groups use tree normalisation; otherwise orbits are found
    by breadth-first search over single-vertex generator moves.
    """
    ctx = _context(K, groups)
    cap = default_cap() if cap is None else cap
    if ctx.uniform:
        sizes: dict[Cocycle, int] = {}
        for c in cocycles:
            r = canonical_representative(K, c, ctx)
            sizes[r] = sizes.get(r, 0) + 1
        return [Orbit(r, sizes[r]) for r in sorted(sizes)]
    universe = set(cocycles)
    if len(universe) > cap:
        raise CapExceededError("gauge orbit search", cap)
    moves = _gauge_moves(ctx)
    seen: set[Cocycle] = set()
    out = []
    for c in sorted(universe):
        if c in seen:
            continue
        seen.add(c)
        size = 1
        queue = deque([c])
        while queue:
            x = queue.popleft()
            for y in moves(x):
                if y not in universe:
                    raise ValidationError("cocycle set is not closed under gauge")
                if y not in seen:
                    seen.add(y)
                    size += 1
                    queue.append(y)
        out.append(Orbit(c, size))
    return out


@dataclass(frozen=True)
class Classification:
    cocycle_count: int
    orbit_count: int
    representatives: tuple[Cocycle, ...]
    method: str


def classify(K: StratComplex2, groups, *, cap: int | None = None) -> Classification:
    """Count cocycles and gauge classes.

    With uniform groups only tree-normalised cocycles are enumerated and the
    full count is recovered as ``N_tree * |G|^(V - C)``; otherwise every
    cocycle is enumerated and orbits are found by search.
    """
    ctx = _context(K, groups)
    cap = default_cap() if cap is None else cap
    if not ctx.uniform:
        cocycles = enumerate_cocycles(K, ctx, cap=cap)
        orbits = gauge_orbits(K, cocycles, ctx, cap=cap)
        return Classification(len(cocycles), len(orbits), tuple(o.representative for o in orbits), "search")
    G = ctx.group
    fixed = {i: G.identity for i, _, _ in spanning_tree(K)}
    tn = list(_search(ctx, fixed, cap))
    comps = _edge_components(K)
    reps = sorted({Cocycle(_conjugation_min(G, c.labels, comps)) for c in tn})
    n_comp = len(K.components())
    total = len(tn) * G.order ** (len(K.vertices) - n_comp)
    return Classification(total, len(reps), tuple(reps), "tree")


# ---------------------------------------------------------------------------
# pullback along refinements


def pullback_cocycle(f: CellMap, c: Cocycle, groups) -> Cocycle:
    """Labels on the fine complex of ``f`` induced from a cocycle on its coarse complex.

    Copied edges keep their label, a split edge carries ``(u_e, 1)`` on its
    two halves, and spokes are determined by transport around the face
    starting from an identity spoke.
    """
    labels = c.labels
    for step in reversed(f.steps):
        fine, coarse = step.fine, step.coarse
        gp = as_assignment(coarse, groups)
        if len(labels) != len(coarse.edges):
            raise InvalidAssignmentError("cocycle does not match the coarse complex")
        coarse_lab = {e.id: u for e, u in zip(coarse.edges, labels)}
        fine_lab: dict[str, int] = {}
        spokes: dict[str, list[int]] = {}
        for e in fine.edges:
            rule = step.edge_rules.get(e.id)
            G = gp.group(e.stratum)
            if rule is None or rule.kind == "edge":
                src = coarse.edge[rule.ref if rule else e.id]
                if src.stratum != e.stratum:
                    raise ValidationError(f"edge {e.id!r} changes stratum under the refinement")
                fine_lab[e.id] = coarse_lab[src.id]
            elif rule.kind == "half":
                if coarse.edge[rule.ref].stratum != e.stratum:
                    raise ValidationError(f"half edge {e.id!r} changes stratum")
                fine_lab[e.id] = coarse_lab[rule.ref] if rule.part == 0 else G.identity
        for face in coarse.faces:
            F = gp.group(face.stratum)
            halves = [h for letter in face.boundary for h in split_letter(letter)]
            vals = [F.identity]
            for hid, sgn in halves[:-1]:
                e = fine.edge[hid]
                x = gp.res(e.stratum, face.stratum)(fine_lab[hid])
                if sgn == -1:
                    x = F.inv(x)
                vals.append(F.mul(x, vals[-1]))
            spokes[face.id] = vals
        for e in fine.edges:
            rule = step.edge_rules.get(e.id)
            if rule is not None and rule.kind == "spoke":
                fine_lab[e.id] = spokes[rule.ref][rule.part]
        labels = tuple(fine_lab[e.id] for e in fine.edges)
    return Cocycle(tuple(labels))


@dataclass(frozen=True)
class InvarianceReport:
    counts: tuple[int, ...]
    equal: bool


def subdivision_invariance(K: StratComplex2, groups, times: int = 2, *, cap: int | None = None) -> InvarianceReport:
    """Gauge-class counts of ``K`` and of its first ``times`` barycentric subdivisions."""
    counts = [classify(K, groups, cap=cap).orbit_count]
    for _ in range(times):
        K, _ = barycentric_subdivide(K)
        counts.append(classify(K, groups, cap=cap).orbit_count)
    return InvarianceReport(tuple(counts), len(set(counts)) == 1)

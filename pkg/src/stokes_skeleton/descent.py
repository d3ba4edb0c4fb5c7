"""Equivariant cocycles, homotopy fixed points and the descent comparison.

A deck element ``g`` moves a cocycle by ``(g.u)_{g e} = sigma_g(u_e)`` where
``sigma_g`` is the declared automorphism of the label group.  Coherence data
``c_g(v)`` satisfies

* ``u_{g e} = c_g(t e) sigma_g(u_e) c_g(s e)^-1`` for every edge,
* ``c_{gh}(v) = c_g(h v) sigma_g(c_h(v))`` and ``c_1(v) = 1``,

and a gauge ``k`` sends ``c`` to ``c'_g(v) = k_{g v} c_g(v) sigma_g(k_v)^-1``.
Equivalently ``phi_g(x) = c_g(g^-1 x)`` is a gauge ``g.u -> u`` and the
family ``phi`` is a homotopy fixed point: ``phi_gh = phi_g o g(phi_h)``.
Label groups must be the same on every stratum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cocycles import (Cocycle, LabelContext, _context, classify, default_cap, enumerate_cocycles,
                       spanning_tree)
from .complex2 import CellularAction, StratComplex2, quotient_by_action
from .errors import CapExceededError, IncompleteError, ValidationError
from .groupoid import orbit_count
from .groups import GroupHom, LabelGroup, automorphism_from_permutation, identity_hom


@dataclass(frozen=True, order=True)
class EquivariantCocycle:
    """A cocycle with coherence data ``coherence[g][v] = c_g(v)`` (indices in declaration order)."""

    base: Cocycle
    coherence: tuple[tuple[int, ...], ...]

    @property
    def key(self) -> tuple:
        return (self.base.labels, self.coherence)


@dataclass(frozen=True)
class HfpObject:
    """A cocycle ``x`` with gauges ``phi[g] : g.x -> x`` (per-vertex components)."""

    x: Cocycle
    phi: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class EquivarianceCheck:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


class DeckData:
    """A cellular action together with its automorphisms of the label group."""

    def __init__(self, K: StratComplex2, A: CellularAction, groups,
                 label_action: Sequence[GroupHom] | None = None):
        if A.complex is not K and A.complex != K:
            raise ValidationError("action is defined on a different complex")
        self.K, self.A = K, A
        self.ctx: LabelContext = _context(K, groups)
        if not self.ctx.uniform:
            raise ValidationError("equivariant cocycles need one label group on every stratum")
        G = self.G = self.ctx.group
        D = self.D = A.group
        if label_action is None:
            if A.label_perms is None:
                label_action = [identity_hom(G)] * D.order
            else:
                label_action = [automorphism_from_permutation(G, p) for p in A.label_perms]
        if len(label_action) != D.order:
            raise IncompleteError("need one label automorphism per deck element")
        self.sigma = [tuple(h.images) for h in label_action]
        for g in range(D.order):
            if label_action[g].source is not G or label_action[g].target is not G:
                raise ValidationError("label automorphisms must act on the label group")
        if self.sigma[D.identity] != tuple(range(G.order)):
            raise ValidationError("identity deck element must act trivially on labels")
        for g in range(D.order):
            for h in range(D.order):
                gh = D.mul(g, h)
                if any(self.sigma[gh][x] != self.sigma[g][self.sigma[h][x]] for x in range(G.order)):
                    raise ValidationError("label automorphisms do not form an action")
        K = self.K
        self.vmap = [[K.vertex_index[A.vertex(g, v.id)] for v in K.vertices] for g in range(D.order)]
        self.emap = [[K.edge_index[A.edge(g, e.id)] for e in K.edges] for g in range(D.order)]
        self.vinv = []
        for g in range(D.order):
            inv = [0] * len(K.vertices)
            for v, w in enumerate(self.vmap[g]):
                inv[w] = v
            self.vinv.append(inv)

    @property
    def label_action_trivial(self) -> bool:
        return all(s == tuple(range(self.G.order)) for s in self.sigma)

    def translate(self, g: int, u: Cocycle) -> Cocycle:
        """``g.u`` with ``(g.u)_{g e} = sigma_g(u_e)``."""
        out = [0] * len(u.labels)
        for e, x in enumerate(u.labels):
            out[self.emap[g][e]] = self.sigma[g][x]
        return Cocycle(tuple(out))

    def phi_to_c(self, g: int, phi: Sequence[int]) -> tuple[int, ...]:
        return tuple(phi[self.vmap[g][v]] for v in range(len(self.K.vertices)))

    def c_to_phi(self, g: int, c: Sequence[int]) -> tuple[int, ...]:
        return tuple(c[self.vinv[g][x]] for x in range(len(self.K.vertices)))


def check_equivariant(K: StratComplex2, A: CellularAction, ec: EquivariantCocycle, groups,
                      label_action: Sequence[GroupHom] | None = None) -> EquivarianceCheck:
    """Both equation families, with the first failure as witness.

    Witnesses are ``("cocycle", face)``, ``("unit", v)``, ``("edge", g, e)``
    or ``("coherence", g, h, v)`` with element names and cell ids.
    """
    dd = DeckData(K, A, groups, label_action)
    G, D, ctx = dd.G, dd.D, dd.ctx
    c = ec.coherence
    if len(c) != D.order or any(len(row) != len(K.vertices) for row in c):
        raise IncompleteError("coherence data must give c_g(v) for every deck element and vertex")
    u = ec.base.labels
    for fi, f in enumerate(K.faces):
        if ctx.face_product(fi, u) != G.identity:
            return EquivarianceCheck(False, ("cocycle", f.id))
    for v, vert in enumerate(K.vertices):
        if c[D.identity][v] != G.identity:
            return EquivarianceCheck(False, ("unit", vert.id))
    for g in range(D.order):
        sg = dd.sigma[g]
        for e, edge in enumerate(K.edges):
            s, t = ctx.src_idx[e], ctx.dst_idx[e]
            rhs = G.mul(G.mul(c[g][t], sg[u[e]]), G.inv(c[g][s]))
            if u[dd.emap[g][e]] != rhs:
                return EquivarianceCheck(False, ("edge", D.name_of(g), edge.id))
    for g in range(D.order):
        for h in range(D.order):
            gh = D.mul(g, h)
            for v, vert in enumerate(K.vertices):
                rhs = G.mul(c[g][dd.vmap[h][v]], dd.sigma[g][c[h][v]])
                if c[gh][v] != rhs:
                    return EquivarianceCheck(False, ("coherence", D.name_of(g), D.name_of(h), vert.id))
    return EquivarianceCheck(True)


def to_hfp(dd: DeckData, ec: EquivariantCocycle) -> HfpObject:
    return HfpObject(ec.base, tuple(dd.c_to_phi(g, ec.coherence[g]) for g in range(dd.D.order)))


def check_hfp(dd: DeckData, x: HfpObject) -> EquivarianceCheck:
    """Homotopy fixed point axioms checked directly on gauges.

    ``phi_g`` must carry ``g.x`` to ``x``, ``phi_1`` must be the identity and
    ``phi_gh = phi_g o g(phi_h)`` with ``(g.k)_y = sigma_g(k_{g^-1 y})``.
    """
    G, D, ctx = dd.G, dd.D, dd.ctx
    if any(p != G.identity for p in x.phi[D.identity]):
        return EquivarianceCheck(False, ("unit",))
    for g in range(D.order):
        if ctx.gauge(dd.translate(g, x.x), x.phi[g]) != x.x:
            return EquivarianceCheck(False, ("morphism", D.name_of(g)))
    for g in range(D.order):
        for h in range(D.order):
            moved = [dd.sigma[g][x.phi[h][dd.vinv[g][y]]] for y in range(len(dd.K.vertices))]
            composite = tuple(G.mul(a, b) for a, b in zip(x.phi[g], moved))
            if composite != x.phi[D.mul(g, h)]:
                return EquivarianceCheck(False, ("cocycle", D.name_of(g), D.name_of(h)))
    return EquivarianceCheck(True)


def _solutions(dd: DeckData, u: Cocycle, w: Cocycle) -> list[tuple[int, ...]]:
    """All gauges ``k`` with ``k.w = u``, by propagation along the spanning tree."""
    ctx, G, K = dd.ctx, dd.G, dd.K
    tree = spanning_tree(K)
    roots = [K.vertex_index[comp[0]] for comp in K.components()]
    out = []
    choices = [range(G.order)] * len(roots)

    def rec(i: int, k: list[int | None]):
        if i == len(roots):
            kk = list(k)
            for e, parent, child in tree:
                if ctx.src_idx[e] == parent:
                    kk[child] = G.mul(G.mul(u.labels[e], kk[parent]), G.inv(w.labels[e]))
                else:
                    kk[child] = G.mul(G.mul(G.inv(u.labels[e]), kk[parent]), w.labels[e])
            if ctx.gauge(w, kk) == u:
                out.append(tuple(kk))
            return
        for x in choices[i]:
            k[roots[i]] = x
            rec(i + 1, k)

    rec(0, [None] * len(K.vertices))
    return out


def enumerate_equivariant(K: StratComplex2, A: CellularAction, groups, *, cap: int | None = None,
                          label_action: Sequence[GroupHom] | None = None) -> list[EquivariantCocycle]:
    """All equivariant cocycles, sorted by (labels, coherence)."""
    dd = DeckData(K, A, groups, label_action)
    return _enumerate(dd, cap)


def _enumerate(dd: DeckData, cap: int | None) -> list[EquivariantCocycle]:
    cap = default_cap() if cap is None else cap
    G, D = dd.G, dd.D
    nv = len(dd.K.vertices)
    found = []
    visits = 0
    ident_phi = tuple([G.identity] * nv)
    order = [g for g in range(D.order) if g != D.identity]
    for u in enumerate_cocycles(dd.K, dd.ctx, cap=cap):
        sols = {g: _solutions(dd, u, dd.translate(g, u)) for g in order}
        if any(not s for s in sols.values()):
            continue
        phi: dict[int, tuple[int, ...]] = {D.identity: ident_phi}

        def coherent(g: int) -> bool:
            # every pair (a, b) whose members and product are assigned
            for a in phi:
                for b in phi:
                    ab = D.mul(a, b)
                    if ab in phi and g in (a, b, ab):
                        moved = [dd.sigma[a][phi[b][dd.vinv[a][y]]] for y in range(nv)]
                        if phi[ab] != tuple(G.mul(x, m) for x, m in zip(phi[a], moved)):
                            return False
            return True

        def rec(i: int):
            nonlocal visits
            if i == len(order):
                coh = tuple(dd.phi_to_c(g, phi[g]) for g in range(D.order))
                found.append(EquivariantCocycle(u, coh))
                return
            g = order[i]
            for p in sols[g]:
                visits += 1
                if visits > cap:
                    raise CapExceededError("equivariant enumeration", cap)
                phi[g] = p
                if coherent(g):
                    rec(i + 1)
                del phi[g]

        if coherent(D.identity):
            rec(0)
    return sorted(found)


def gauge_equivariant(dd: DeckData, ec: EquivariantCocycle, k: Sequence[int]) -> EquivariantCocycle:
    G = dd.G
    u = dd.ctx.gauge(ec.base, k)
    coh = []
    for g in range(dd.D.order):
        row = ec.coherence[g]
        coh.append(tuple(G.mul(G.mul(k[dd.vmap[g][v]], row[v]), G.inv(dd.sigma[g][k[v]]))
                         for v in range(len(row))))
    return EquivariantCocycle(u, tuple(coh))


def equivariant_orbits(K: StratComplex2, A: CellularAction, groups, *, cap: int | None = None,
                       label_action: Sequence[GroupHom] | None = None) -> int:
    """Number of gauge classes of equivariant cocycles."""
    dd = DeckData(K, A, groups, label_action)
    return _orbits(dd, _enumerate(dd, cap))


def _orbits(dd: DeckData, ecs: list[EquivariantCocycle]) -> int:
    gens = dd.G.generators()
    nv = len(dd.K.vertices)
    ident = [dd.G.identity] * nv

    def moves(key):
        ec = EquivariantCocycle(Cocycle(key[0]), key[1])
        for v in range(nv):
            for x in gens:
                k = list(ident)
                k[v] = x
                yield gauge_equivariant(dd, ec, k).key

    return orbit_count([ec.key for ec in ecs], moves)[0]


@dataclass(frozen=True)
class DescentReport:
    upstairs_hfp: int
    downstairs: int
    equal: bool
    equivariant_cocycles: int
    label_action_trivial: bool

    def to_json(self) -> dict:
        return {"upstairs_hfp": self.upstairs_hfp, "downstairs": self.downstairs, "equal": self.equal,
                "equivariant_cocycles": self.equivariant_cocycles,
                "label_action_trivial": self.label_action_trivial}


def descent_compare(K: StratComplex2, A: CellularAction, groups, *, cap: int | None = None,
                    label_action: Sequence[GroupHom] | None = None) -> DescentReport:
    """Equivariant classes upstairs against plain gauge classes on the orbit complex.

    Raises :class:`FixedCellError` for a non-free action.  The downstairs
    count uses untwisted labels, so it is the right comparison only when the
    label action is trivial; the report records which case applies.
    """
    Q, _ = quotient_by_action(K, A)
    dd = DeckData(K, A, groups, label_action)
    ecs = _enumerate(dd, cap)
    up = _orbits(dd, ecs)
    down = classify(Q, dd.G, cap=cap).orbit_count
    return DescentReport(up, down, up == down, len(ecs), dd.label_action_trivial)


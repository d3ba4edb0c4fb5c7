"""Strict pushout presenters, curve presenters with peripheral gluing, and counting checks.

The pushout of ``A <-i- B -j-> C`` has objects ``A/x`` and ``C/y``,
generators ``A/g``, ``C/g`` and one bridge ``s/b : A/i(b) -> C/j(b)`` per
object of ``B``, and for each generator ``u : b -> b'`` of ``B`` the bridge
relation ``s_{b'} o i(u) = j(u) o s_b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import CapExceededError, InvalidAssignmentError, ValidationError
from .groupoid import (DEFAULT_CAP, FiniteGroupoid, Functor, PresentedGroupoid, Word,
                       coequalizer_presentation, count_iso_classes, evaluate, gauge_fixed_functors,
                       iter_functors,
                       make_word, orbit_count, reduce, transport)
from .groups import GroupHom, LabelGroup
from .groups import from_json as group_from_json


@dataclass
class GroupoidMap:
    """A functor between presented groupoids, given on objects and generators.

    ``arrows[g]`` is a word of the target (list of signed ids or a
    :class:`Word`); an empty list means the identity at the image object.
    """

    source: PresentedGroupoid
    target: PresentedGroupoid
    objects: Mapping[str, str]
    arrows: Mapping[str, Sequence] = field(default_factory=dict)

    def __post_init__(self):
        src, tgt = self.source, self.target
        missing = [x for x in src.objects if x not in self.objects]
        if missing:
            raise InvalidAssignmentError(f"object map undefined on {missing}")
        bad = [y for y in self.objects.values() if y not in tgt.obj_index]
        if bad:
            raise InvalidAssignmentError(f"object map hits unknown objects {bad}")
        words: dict[str, Word] = {}
        for g, s, t in src.generators:
            if g not in self.arrows:
                raise InvalidAssignmentError(f"generator {g!r} has no image")
            img = self.arrows[g]
            w = img if isinstance(img, Word) else tgt.word(img, start=self.objects[s])
            if (w.source, w.target) != (self.objects[s], self.objects[t]):
                raise InvalidAssignmentError(
                    f"image of {g!r} runs {w.source}->{w.target}, expected {self.objects[s]}->{self.objects[t]}")
            words[g] = reduce(w)
        self.words = words
        known = {(a.letters, b.letters) for a, b in tgt.relations} | {(b.letters, a.letters) for a, b in tgt.relations}
        for a, b in src.relations:
            ia, ib = self.image(a), self.image(b)
            if ia.letters != ib.letters and (ia.letters, ib.letters) not in known:
                raise ValidationError(f"cannot certify that the relation {a} = {b} is preserved")

    def image(self, w: Word) -> Word:
        out = Word((), (self.objects[w.source],))
        for g, sgn in w.letters:
            piece = self.words[g] if sgn == 1 else self.words[g].inverse()
            out = out.then(piece)
        return reduce(out)

    def to_json(self) -> dict:
        return {"objects": dict(self.objects), "arrows": {g: w.signed() for g, w in self.words.items()}}

    @classmethod
    def from_json(cls, doc: Mapping, source: PresentedGroupoid, target: PresentedGroupoid) -> "GroupoidMap":
        return cls(source, target, {str(k): str(v) for k, v in doc.get("objects", {}).items()},
                   {str(k): list(v) for k, v in doc.get("arrows", {}).items()})


@dataclass
class Cospan:
    A: PresentedGroupoid
    B: PresentedGroupoid
    C: PresentedGroupoid
    i: GroupoidMap
    j: GroupoidMap
    name: str = ""

    def __post_init__(self):
        if self.i.source is not self.B or self.j.source is not self.B:
            raise ValidationError("both legs must start at B")
        if self.i.target is not self.A or self.j.target is not self.C:
            raise ValidationError("legs must land in A and C")

    @classmethod
    def from_json(cls, doc: Mapping) -> "Cospan":
        A = PresentedGroupoid.from_json(doc["A"])
        B = PresentedGroupoid.from_json(doc["B"])
        C = PresentedGroupoid.from_json(doc["C"])
        return cls(A, B, C, GroupoidMap.from_json(doc["i"], B, A), GroupoidMap.from_json(doc["j"], B, C),
                   doc.get("name", ""))

    def to_json(self) -> dict:
        return {"name": self.name, "A": self.A.to_json(), "B": self.B.to_json(), "C": self.C.to_json(),
                "i": self.i.to_json(), "j": self.j.to_json()}


@dataclass
class PushoutPresenter:
    groupoid: PresentedGroupoid
    bridges: dict[str, str]            # B object -> bridge generator id
    a_objects: dict[str, str]          # A object -> pushout object
    c_objects: dict[str, str]
    a_generators: dict[str, str]
    c_generators: dict[str, str]


def _renamed(w: Word, prefix: str) -> list[str]:
    return [("-" if s == -1 else "") + f"{prefix}/{g}" for g, s in w.letters]


def build_pushout(c: Cospan) -> PushoutPresenter:
    """Strict model of the 2-pushout with explicit bridge arrows."""
    A, B, C = c.A, c.B, c.C
    objs = [f"A/{x}" for x in A.objects] + [f"C/{y}" for y in C.objects]
    gens = [(f"A/{g}", f"A/{s}", f"A/{t}") for g, s, t in A.generators]
    gens += [(f"C/{g}", f"C/{s}", f"C/{t}") for g, s, t in C.generators]
    bridges = {}
    for b in B.objects:
        sid = f"s/{b}"
        bridges[b] = sid
        gens.append((sid, f"A/{c.i.objects[b]}", f"C/{c.j.objects[b]}"))
    ends = {g: (s, t) for g, s, t in gens}
    rels = []
    for prefix, G in (("A", A), ("C", C)):
        for a, b in G.relations:
            rels.append((make_word(ends, _renamed(a, prefix), f"{prefix}/{a.source}"),
                         make_word(ends, _renamed(b, prefix), f"{prefix}/{b.source}")))
    for u, b, b2 in B.generators:
        lhs = _renamed(c.i.words[u], "A") + [bridges[b2]]
        rhs = [bridges[b]] + _renamed(c.j.words[u], "C")
        rels.append((make_word(ends, lhs, f"A/{c.i.objects[b]}"), make_word(ends, rhs, f"A/{c.i.objects[b]}")))
    P = PresentedGroupoid(objs, gens, rels, name=f"pushout({c.name})" if c.name else "pushout")
    return PushoutPresenter(P, bridges, {x: f"A/{x}" for x in A.objects}, {y: f"C/{y}" for y in C.objects},
                            {g: f"A/{g}" for g, _, _ in A.generators}, {g: f"C/{g}" for g, _, _ in C.generators})


def pushout_as_coequalizer(c: Cospan) -> PresentedGroupoid:
    """The same pushout built as the quotient of a free groupoid on a graph by word pairs."""
    vertices = [("A", x) for x in c.A.objects] + [("C", y) for y in c.C.objects]
    edges = [(("A", g), ("A", s), ("A", t)) for g, s, t in c.A.generators]
    edges += [(("C", g), ("C", s), ("C", t)) for g, s, t in c.C.generators]
    edges += [(("s", b), ("A", c.i.objects[b]), ("C", c.j.objects[b])) for b in c.B.objects]
    name = {v: f"{v[0]}/{v[1]}" for v in vertices}
    name.update({e[0]: f"{e[0][0]}/{e[0][1]}" for e in edges})

    def lift(side: str, w: Word) -> list[str]:
        return [("-" if sgn == -1 else "") + name[(side, g)] for g, sgn in w.letters]

    pairs = []
    for side, G in (("A", c.A), ("C", c.C)):
        for a, b in G.relations:
            pairs.append((Word(tuple(((name[(side, g)]), s) for g, s in a.letters),
                               tuple(name[(side, x)] for x in a.objects)),
                          Word(tuple(((name[(side, g)]), s) for g, s in b.letters),
                               tuple(name[(side, x)] for x in b.objects))))
    ends = {name[e[0]]: (name[e[1]], name[e[2]]) for e in edges}
    for u, b, b2 in c.B.generators:
        start = name[("A", c.i.objects[b])]
        pairs.append((make_word(ends, lift("A", c.i.words[u]) + [name[("s", b2)]], start),
                      make_word(ends, [name[("s", b)]] + lift("C", c.j.words[u]), start)))
    return coequalizer_presentation([name[v] for v in vertices],
                                    [(name[e[0]], name[e[1]], name[e[2]]) for e in edges], pairs)


def contract_bridges(P: PushoutPresenter) -> PresentedGroupoid:
    """Tietze contraction: set a spanning forest of bridges to identities and merge their endpoints."""
    G = P.groupoid
    parent = {x: x for x in G.objects}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    dropped = set()
    for b, sid in P.bridges.items():
        s, t = G.ends[sid]
        rs, rt = find(s), find(t)
        if rs != rt:
            keep, gone = (rs, rt) if G.obj_index[rs] < G.obj_index[rt] else (rt, rs)
            parent[gone] = keep
            dropped.add(sid)
    objs = [x for x in G.objects if find(x) == x]
    gens = [(g, find(s), find(t)) for g, s, t in G.generators if g not in dropped]
    ends = {g: (s, t) for g, s, t in gens}
    rels, seen = [], set()
    for a, b in G.relations:
        la = [x for x in a.letters if x[0] not in dropped]
        lb = [x for x in b.letters if x[0] not in dropped]
        wa = reduce(make_word(ends, la, find(a.source)))
        wb = reduce(make_word(ends, lb, find(b.source)))
        key = (wa.letters, wb.letters, wa.source)
        if wa.letters == wb.letters or key in seen:
            continue
        seen.add(key)
        rels.append((wa, wb))
    return PresentedGroupoid(objs, gens, rels, name=G.name + "/contracted")


# ---------------------------------------------------------------------------
# cocone counting


def _cocones(c: Cospan, H: FiniteGroupoid, FAs: Sequence[Functor], FCs: Sequence[Functor]):
    """Triples ``(F_A, F_C, eta)`` with ``eta_{b'} F_A(i u) = F_C(j u) eta_b``.

    ``F_A`` candidates are indexed by their restriction along ``i`` so each
    ``(F_C, eta)`` pair is matched by lookup.
    """
    Bobj = list(c.B.objects)
    bpos = {b: k for k, b in enumerate(Bobj)}
    ia = [c.A.obj_index[c.i.objects[b]] for b in Bobj]
    jc = [c.C.obj_index[c.j.objects[b]] for b in Bobj]
    index: dict[tuple, list[Functor]] = {}
    for FA in FAs:
        sig = (tuple(FA.objects[x] for x in ia),
               tuple(evaluate(c.A, H, FA, c.i.words[u]) for u, _, _ in c.B.generators))
        index.setdefault(sig, []).append(FA)
    for FC in FCs:
        cvals = [evaluate(c.C, H, FC, c.j.words[u]) for u, _, _ in c.B.generators]
        for (objs, avals), group in index.items():
            homs = [H.hom.get((objs[k], FC.objects[jc[k]]), []) for k in range(len(Bobj))]
            for eta in itertools.product(*homs):
                if all(H.comp[eta[bpos[b2]]][fa] == H.comp[fc][eta[bpos[b]]]
                       for (u, b, b2), fa, fc in zip(c.B.generators, avals, cvals)):
                    for FA in group:
                        yield (FA.key, FC.key, tuple(eta))


def count_cocone_classes(c: Cospan, H: FiniteGroupoid, *, cap: int = DEFAULT_CAP,
                         method: str = "fixed") -> tuple[int, int]:
    """``(cocone count, iso-class count)`` for triples ``(F_A, F_C, eta : F_A i => F_C j)``.

    Morphisms are pairs of natural isomorphisms ``(alpha, gamma)`` acting by
    ``eta'_b = gamma_{j b} eta_b alpha_{i b}^-1``.  With ``method="orbit"``
    every cocone is enumerated and orbits are found with single-component
    moves.  The default gauge-fixes ``F_A`` and ``F_C`` on spanning forests
    and divides out the residual automorphisms; the returned cocone count
    is then the number of gauge-fixed cocones.
    """
    Bobj = list(c.B.objects)
    ia = [c.A.obj_index[c.i.objects[b]] for b in Bobj]
    jc = [c.C.obj_index[c.j.objects[b]] for b in Bobj]
    if method == "orbit":
        keys = []
        for key in _cocones(c, H, list(iter_functors(c.A, H, cap=cap)), list(iter_functors(c.C, H, cap=cap))):
            keys.append(key)
            if len(keys) > cap:
                raise CapExceededError("cocone enumeration", cap)
        return len(keys), orbit_count(keys, _cocone_moves(c, H, ia, jc))[0]
    if method != "fixed":
        raise ValueError(f"unknown method {method!r}")
    FAs, compsA = gauge_fixed_functors(c.A, H, cap=cap)
    FCs, compsC = gauge_fixed_functors(c.C, H, cap=cap)
    seen: set = set()
    n_states = classes = 0
    for key in _cocones(c, H, FAs, FCs):
        n_states += 1
        if n_states > cap:
            raise CapExceededError("cocone enumeration", cap)
        if key in seen:
            continue
        classes += 1
        FA, FC, eta = Functor(*key[0]), Functor(*key[1]), key[2]
        autsA = [H.automorphisms(FA.objects[comp[0]]) for comp in compsA]
        autsC = [H.automorphisms(FC.objects[comp[0]]) for comp in compsC]
        for alpha in itertools.product(*autsA):
            eta_a = {x: a for comp, a in zip(compsA, alpha) for x in comp}
            FA2 = transport(c.A, H, FA, eta_a).key
            for gamma in itertools.product(*autsC):
                eta_c = {y: g for comp, g in zip(compsC, gamma) for y in comp}
                FC2 = transport(c.C, H, FC, eta_c).key
                new_eta = tuple(H.comp[H.comp[eta_c[jc[k]]][e]][H.inverse[eta_a[ia[k]]]] for k, e in enumerate(eta))
                seen.add((FA2, FC2, new_eta))
    return n_states, classes


def _cocone_moves(c: Cospan, H: FiniteGroupoid, ia: list[int], jc: list[int]):
    def moves(key):
        fa, fc, eta = key
        FA, FC = Functor(*fa), Functor(*fc)
        for x in range(len(c.A.objects)):
            for a in H.out[FA.objects[x]]:
                if a == H.ident[FA.objects[x]]:
                    continue
                new_eta = tuple(H.comp[e][H.inverse[a]] if ia[k] == x else e for k, e in enumerate(eta))
                yield (transport(c.A, H, FA, {x: a}).key, fc, new_eta)
        for y in range(len(c.C.objects)):
            for a in H.out[FC.objects[y]]:
                if a == H.ident[FC.objects[y]]:
                    continue
                new_eta = tuple(H.comp[a][e] if jc[k] == y else e for k, e in enumerate(eta))
                yield (fa, transport(c.C, H, FC, {y: a}).key, new_eta)

    return moves


@dataclass(frozen=True)
class FiberProductReport:
    pushout_classes: int
    cocone_classes: int
    equal: bool
    pushout_functors: int
    cocones: int

    def to_json(self) -> dict:
        return {"pushout_classes": self.pushout_classes, "cocone_classes": self.cocone_classes,
                "equal": self.equal, "pushout_functors": self.pushout_functors, "cocones": self.cocones}


def rep_fiber_product_check(c: Cospan, H: FiniteGroupoid, *, cap: int = DEFAULT_CAP) -> FiberProductReport:
    P = build_pushout(c).groupoid
    n_fun = sum(1 for _ in iter_functors(P, H, cap=cap))
    left = count_iso_classes(P, H, cap=cap)
    n_coc, right = count_cocone_classes(c, H, cap=cap)
    return FiberProductReport(left, right, left == right, n_fun, n_coc)


# ---------------------------------------------------------------------------
# standard cospans


def point(name: str = "pt", obj: str = "*") -> PresentedGroupoid:
    return PresentedGroupoid([obj], [], name=name)


def loop_groupoid(gens: Sequence[str] = ("g",), obj: str = "*", relations=(), name: str = "") -> PresentedGroupoid:
    return PresentedGroupoid([obj], [(g, obj, obj) for g in gens], relations, name=name or f"F{len(gens)}")


def empty_groupoid() -> PresentedGroupoid:
    return PresentedGroupoid([], [], name="empty")


def standard_cospans() -> dict[str, Cospan]:
    """The cospans used by the acceptance suite, keyed by name."""
    out = {}
    A, C, E = loop_groupoid(("a",)), loop_groupoid(("c",)), empty_groupoid()
    out["empty"] = Cospan(A, E, C, GroupoidMap(E, A, {}), GroupoidMap(E, C, {}), "empty")
    pa, pb, pc = point("A"), point("B"), point("C")
    out["interval"] = Cospan(pa, pb, pc, GroupoidMap(pb, pa, {"*": "*"}), GroupoidMap(pb, pc, {"*": "*"}), "interval")
    A, B, C = loop_groupoid(("a",)), loop_groupoid(("d",)), loop_groupoid(("c",))
    out["torus"] = Cospan(A, B, C, GroupoidMap(B, A, {"*": "*"}, {"d": ["a"]}),
                          GroupoidMap(B, C, {"*": "*"}, {"d": ["c"]}), "torus")
    A, C, pb = loop_groupoid(("a",)), loop_groupoid(("c",)), point("B")
    out["wedge"] = Cospan(A, pb, C, GroupoidMap(pb, A, {"*": "*"}), GroupoidMap(pb, C, {"*": "*"}), "wedge")
    A, B, C = loop_groupoid(("a",)), loop_groupoid(("d",)), loop_groupoid(("c",))
    out["square"] = Cospan(A, B, C, GroupoidMap(B, A, {"*": "*"}, {"d": ["a"]}),
                           GroupoidMap(B, C, {"*": "*"}, {"d": ["c", "c"]}), "square")
    B2 = PresentedGroupoid(["x", "y"], [], name="two points")
    pa, pc = point("A"), point("C")
    out["two_point"] = Cospan(pa, B2, pc, GroupoidMap(B2, pa, {"x": "*", "y": "*"}),
                              GroupoidMap(B2, pc, {"x": "*", "y": "*"}), "two_point")
    return out


# ---------------------------------------------------------------------------
# curve presenters


@dataclass
class Puncture:
    """Stokes data at one puncture: one group and one transition element per overlap."""

    groups: Sequence[LabelGroup]
    transitions: Sequence[int]
    delta: Sequence[str]
    k: int | None = None
    n: int | None = None
    embeddings: Sequence[GroupHom] | None = None

    @property
    def ell(self) -> int:
        return len(self.groups)


@dataclass
class CurvePresenterSpec:
    interior_generators: Sequence[str]
    interior_relations: Sequence = ()
    punctures: Sequence[Puncture] = ()

    def interior(self) -> PresentedGroupoid:
        return loop_groupoid(tuple(self.interior_generators), "*", [tuple(r) for r in self.interior_relations],
                             name="interior")


def stokes_generator(i: int, a: int, G: LabelGroup, u: int) -> str:
    return f"s{i}.{a}[{G.name_of(u)}]"


def _collar(spec: CurvePresenterSpec) -> PresentedGroupoid:
    objs, gens, rels = [], [], []
    for i, p in enumerate(spec.punctures):
        objs += [f"{i}:{a}" for a in range(p.ell)]
    ends = {}
    for i, p in enumerate(spec.punctures):
        for a, G in enumerate(p.groups):
            s, t = f"{i}:{a}", f"{i}:{(a + 1) % p.ell}"
            for u in range(G.order):
                gid = stokes_generator(i, a, G, u)
                gens.append((gid, s, t))
                ends[gid] = (s, t)
    for i, p in enumerate(spec.punctures):
        for a, G in enumerate(p.groups):
            one = stokes_generator(i, a, G, G.identity)
            for u in range(G.order):
                for v in range(G.order):
                    # s(u) s(1)^-1 s(v) = s(uv), read as a path: s(v), back along s(1), then s(u)
                    lhs = [stokes_generator(i, a, G, v), "-" + one, stokes_generator(i, a, G, u)]
                    rhs = [stokes_generator(i, a, G, G.mul(u, v))]
                    rels.append((make_word(ends, lhs), make_word(ends, rhs)))
    return PresentedGroupoid(objs, gens, rels, name="collar")


def curve_cospan(spec: CurvePresenterSpec) -> Cospan:
    """Interior <- disjoint peripheral circles -> collar."""
    for i, p in enumerate(spec.punctures):
        if p.ell < 1:
            raise ValidationError(f"puncture {i} needs at least one sector")
        if p.k is not None and p.n is not None and p.ell != 2 * p.n * (p.k - 1):
            raise ValidationError(f"puncture {i}: {p.ell} sectors but 2n(k-1) = {2 * p.n * (p.k - 1)}")
        if len(p.transitions) != p.ell:
            raise ValidationError(f"puncture {i}: need one transition element per overlap")
        for a, (G, u) in enumerate(zip(p.groups, p.transitions)):
            if not 0 <= u < G.order:
                raise ValidationError(f"puncture {i}: transition {a} is not an element of its group")
        unknown = [x.lstrip("-") for x in p.delta if x.lstrip("-") not in spec.interior_generators]
        if unknown:
            raise ValidationError(f"puncture {i}: peripheral word uses unknown generators {unknown}")
    U = spec.interior()
    C = _collar(spec)
    B = PresentedGroupoid([f"b{i}" for i in range(len(spec.punctures))],
                          [(f"d{i}", f"b{i}", f"b{i}") for i in range(len(spec.punctures))], name="circles")
    i_map = GroupoidMap(B, U, {f"b{i}": "*" for i in range(len(spec.punctures))},
                        {f"d{i}": list(p.delta) for i, p in enumerate(spec.punctures)})
    j_arrows = {}
    for i, p in enumerate(spec.punctures):
        j_arrows[f"d{i}"] = [stokes_generator(i, a, G, u) for a, (G, u) in enumerate(zip(p.groups, p.transitions))]
    j_map = GroupoidMap(B, C, {f"b{i}": f"{i}:0" for i in range(len(spec.punctures))}, j_arrows)
    return Cospan(U, B, C, i_map, j_map, "curve")


def build_curve_presenter(spec: CurvePresenterSpec) -> PushoutPresenter:
    return build_pushout(curve_cospan(spec))


def _embedding(p: Puncture, a: int, T: LabelGroup) -> GroupHom:
    S = p.groups[a]
    if p.embeddings is not None:
        h = p.embeddings[a]
        if h.source is not S or h.target is not T:
            raise ValidationError("Stokes embedding has the wrong source or target")
        return h.verify()
    if S.order == 1:
        return GroupHom(S, T, (T.identity,))
    if S is T or S.table == T.table:
        return GroupHom(S, T, tuple(range(S.order)))
    raise ValidationError(f"no embedding of Stokes group {S.name} into {T.name} was given")


@dataclass(frozen=True)
class CurveReport:
    raw_functors: int
    raw_classes: int
    corrected_functors: int
    corrected_classes: int
    delta_images: tuple[tuple[str, ...], ...]
    delta_matches_stokes_word: bool
    interior_classes: int
    interior_trivialized_classes: int

    def to_json(self) -> dict:
        return {"raw_functors": self.raw_functors, "raw_classes": self.raw_classes,
                "corrected_functors": self.corrected_functors, "corrected_classes": self.corrected_classes,
                "delta_images": [list(x) for x in self.delta_images],
                "delta_matches_stokes_word": self.delta_matches_stokes_word,
                "interior_classes": self.interior_classes,
                "interior_trivialized_classes": self.interior_trivialized_classes}


def corrected_functors(spec: CurvePresenterSpec, T: LabelGroup, *, cap: int = DEFAULT_CAP):
    """Functors into ``BT`` sending every Stokes arrow ``s_{i,a}(u)`` to the embedded ``u``."""
    P = build_curve_presenter(spec)
    H = FiniteGroupoid.from_group(T)
    fixed = {}
    for i, p in enumerate(spec.punctures):
        for a, G in enumerate(p.groups):
            emb = _embedding(p, a, T)
            for u in range(G.order):
                fixed[f"C/{stokes_generator(i, a, G, u)}"] = emb(u)
    return P, H, list(iter_functors(P.groupoid, H, cap=cap, fixed=fixed))


def count_corrected_classes(spec: CurvePresenterSpec, T: LabelGroup, *, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """``(functor count, class count)`` of Stokes-corrected functors into ``BT``.

    Isomorphisms may act by any element at interior objects, and at the
    sector objects of a puncture by one element centralising the embedded
    Stokes groups of that puncture (so the pinned values stay fixed).
    """
    P, H, funs = corrected_functors(spec, T, cap=cap)
    G = P.groupoid
    sector_sets = []
    for i, p in enumerate(spec.punctures):
        images = {_embedding(p, a, T)(u) for a, S in enumerate(p.groups) for u in range(S.order)}
        cent = [z for z in range(T.order) if all(T.mul(z, x) == T.mul(x, z) for x in images)]
        sector_sets.append(([G.obj_index[f"C/{i}:{a}"] for a in range(p.ell)], cent))
    sector_objs = {x for objs, _ in sector_sets for x in objs}
    free_objs = [x for x in range(len(G.objects)) if x not in sector_objs]

    def moves(key):
        F = Functor(*key)
        for x in free_objs:
            for h in range(T.order):
                if h != T.identity:
                    yield transport(G, H, F, {x: h}).key
        for objs, cent in sector_sets:
            for z in cent:
                if z != T.identity:
                    yield transport(G, H, F, {x: z for x in objs}).key

    keys = [F.key for F in funs]
    return len(keys), orbit_count(keys, moves)[0]


def curve_report(spec: CurvePresenterSpec, target: LabelGroup, *, cap: int = DEFAULT_CAP) -> CurveReport:
    """Raw and Stokes-corrected counts, peripheral images, and interior baselines."""
    H = FiniteGroupoid.from_group(target)
    pres = build_curve_presenter(spec)
    P = pres.groupoid
    raw_f = sum(1 for _ in iter_functors(P, H, cap=cap))
    raw_c = count_iso_classes(P, H, cap=cap)
    _, _, funs = corrected_functors(spec, target, cap=cap)
    cor_f, cor_c = count_corrected_classes(spec, target, cap=cap)
    deltas, matches = set(), True
    for F in funs:
        row = []
        for i, p in enumerate(spec.punctures):
            d = evaluate(P, H, F, P.word([("-" if x.startswith("-") else "") + "A/" + x.lstrip("-") for x in p.delta],
                                         start="A/*"))
            w = evaluate(P, H, F, P.word([f"C/{stokes_generator(i, a, G, u)}"
                                          for a, (G, u) in enumerate(zip(p.groups, p.transitions))], start=f"C/{i}:0"))
            bridge = F.arrows[P.gen_index[pres.bridges[f"b{i}"]]]
            if H.comp[bridge][d] != H.comp[w][bridge]:
                matches = False
            row.append(target.name_of(d))
        deltas.add(tuple(row))
    U = spec.interior()
    trivial = U.with_relations([(list(p.delta), []) for p in spec.punctures if p.delta])
    return CurveReport(raw_f, raw_c, cor_f, cor_c, tuple(sorted(deltas)), matches,
                       count_iso_classes(U, H, cap=cap), count_iso_classes(trivial, H, cap=cap))


def curve_spec_from_json(doc: Mapping, target: LabelGroup | None = None) -> CurvePresenterSpec:
    """``{"interior": {"generators", "relations"}, "punctures": [{"group" | "groups",
    "transitions", "delta", "k", "n", "embedding"}]}``; transitions and
    embedding images are element names."""
    interior = doc.get("interior", {})
    punctures = []
    for pd in doc.get("punctures", []):
        if "groups" in pd:
            groups = [group_from_json(g) for g in pd["groups"]]
        else:
            G = group_from_json(pd["group"])
            ell = int(pd["ell"]) if "ell" in pd else 2 * int(pd["n"]) * (int(pd["k"]) - 1)
            groups = [G] * ell
        trans = [groups[a].index_of(x) for a, x in enumerate(pd["transitions"])]
        embs = None
        if "embedding" in pd:
            if target is None:
                raise ValidationError("an embedding needs a target group")
            embs = [GroupHom(G, target, tuple(target.index_of(x) for x in pd["embedding"])) for G in groups]
        punctures.append(Puncture(groups, trans, list(pd.get("delta", [])), pd.get("k"), pd.get("n"), embs))
    return CurvePresenterSpec(list(interior.get("generators", [])),
                              [tuple(r) for r in interior.get("relations", [])], punctures)


# ---------------------------------------------------------------------------
# van Kampen split


@dataclass(frozen=True)
class SplitReport:
    global_classes: int
    glued_classes: int
    equal: bool

    def to_json(self) -> dict:
        return {"global_classes": self.global_classes, "glued_classes": self.glued_classes, "equal": self.equal}


def van_kampen_split(spec: CurvePresenterSpec, chart1: Sequence[str], chart2: Sequence[str],
                     overlap: Sequence[str], punctures1: Sequence[int], H: FiniteGroupoid,
                     *, cap: int = DEFAULT_CAP) -> SplitReport:
    """Compare the global curve presenter with the gluing of two chart presenters.

    Interior generators are partitioned into ``chart1``, ``chart2`` and the
    shared ``overlap``; punctures in ``punctures1`` belong to the first chart
    and the rest to the second.  Each chart is the curve presenter of its
    punctures over the interior generated by its own and the overlap
    generators; the charts are glued along the free overlap groupoid.
    """
    gens = set(spec.interior_generators)
    parts = [set(chart1), set(chart2), set(overlap)]
    if set().union(*parts) != gens or sum(len(p) for p in parts) != len(gens):
        raise ValidationError("chart generators must partition the interior generators")
    p1 = set(punctures1)
    side = {}
    for idx in range(len(spec.punctures)):
        side[idx] = 0 if idx in p1 else 1
    allowed = [parts[0] | parts[2], parts[1] | parts[2]]
    for idx, p in enumerate(spec.punctures):
        used = {x.lstrip("-") for x in p.delta}
        if not used <= allowed[side[idx]]:
            raise ValidationError(f"puncture {idx} peripheral word leaves its chart")
    rel_side = []
    for r in spec.interior_relations:
        used = {x.lstrip("-") for w in r for x in w}
        if used <= allowed[0]:
            rel_side.append(0)
        elif used <= allowed[1]:
            rel_side.append(1)
        else:
            raise ValidationError("an interior relation spans both charts")

    def chart(k: int) -> CurvePresenterSpec:
        keep = [g for g in spec.interior_generators if g in allowed[k]]
        rels = [r for r, s in zip(spec.interior_relations, rel_side) if s == k]
        pts = [p for idx, p in enumerate(spec.punctures) if side[idx] == k]
        return CurvePresenterSpec(keep, rels, pts)

    A = build_curve_presenter(chart(0)).groupoid
    C = build_curve_presenter(chart(1)).groupoid
    ov = [g for g in spec.interior_generators if g in parts[2]]
    B = loop_groupoid(tuple(ov), "*", name="overlap")
    i_map = GroupoidMap(B, A, {"*": "A/*"}, {g: [f"A/{g}"] for g in ov})
    j_map = GroupoidMap(B, C, {"*": "A/*"}, {g: [f"A/{g}"] for g in ov})
    glued = count_cocone_classes(Cospan(A, B, C, i_map, j_map, "charts"), H, cap=cap)[1]
    total = count_iso_classes(build_curve_presenter(spec).groupoid, H, cap=cap)
    return SplitReport(total, glued, total == glued)

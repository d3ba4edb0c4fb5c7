"""Finitely presented groupoids and functors into small finite groupoids.

Words are paths: ``letters[0]`` is traversed first.  Evaluating a word under a
functor therefore composes right-to-left, ``F(w) = F(l_m) o ... o F(l_1)``.
Signed generator ids are written ``"a"`` / ``"-a"`` in JSON.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (CapExceededError, CompositionError, InvalidAssignmentError,
                     ValidationError)
from .groups import LabelGroup

DEFAULT_CAP = 10 ** 7

Letter = tuple[str, int]


def parse_letter(x) -> Letter:
    if isinstance(x, str):
        if x.startswith("-"):
            return (x[1:], -1)
        return (x.lstrip("+"), 1)
    gen, sign = x
    if sign not in (1, -1):
        raise ValidationError(f"letter sign must be +1 or -1, got {sign!r}")
    return (str(gen), int(sign))


def format_letter(letter: Letter) -> str:
    gen, sign = letter
    return gen if sign == 1 else "-" + gen


@dataclass(frozen=True)
class Word:
    """A composable path of signed generators.

    ``objects`` records the visited objects, so ``len(objects) == len(letters) + 1``
    and the empty word at ``x`` is ``Word((), (x,))``.
    """

    letters: tuple[Letter, ...]
    objects: tuple[str, ...]

    def __post_init__(self):
        if len(self.objects) != len(self.letters) + 1:
            raise CompositionError("word must record one more object than letters")

    @property
    def source(self) -> str:
        return self.objects[0]

    @property
    def target(self) -> str:
        return self.objects[-1]

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)), tuple(reversed(self.objects)))

    def then(self, other: "Word") -> "Word":
        """Path concatenation: first ``self``, then ``other``."""
        if self.target != other.source:
            raise CompositionError(f"cannot follow a path ending at {self.target!r} by one starting at {other.source!r}")
        return Word(self.letters + other.letters, self.objects + other.objects[1:])

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def signed(self) -> list[str]:
        return [format_letter(x) for x in self.letters]

    def __str__(self) -> str:
        return " ".join(self.signed()) if self.letters else f"id[{self.source}]"


def make_word(ends: Mapping[str, tuple[str, str]], letters: Iterable, start: str | None = None) -> Word:
    """Build a word over a graph ``ends: gen -> (src, dst)``, checking composability."""
    lets = [parse_letter(x) for x in letters]
    if not lets:
        if start is None:
            raise CompositionError("empty word needs an explicit object")
        return Word((), (start,))
    objs = []
    for gen, sign in lets:
        if gen not in ends:
            raise ValidationError(f"unknown generator {gen!r}")
        s, t = ends[gen]
        if sign == -1:
            s, t = t, s
        if not objs:
            if start is not None and start != s:
                raise CompositionError(f"word declared at {start!r} starts at {s!r}")
            objs.append(s)
        elif objs[-1] != s:
            raise CompositionError(f"letter {format_letter((gen, sign))} starts at {s!r}, previous letter ended at {objs[-1]!r}")
        objs.append(t)
    return Word(tuple(lets), tuple(objs))


def reduce(w: Word) -> Word:
    """Free reduction: cancel adjacent ``g g^-1`` pairs.  Idempotent; endpoints preserved."""
    for i, (gen, sign) in enumerate(w.letters):
        if w.objects[i] is None or w.objects[i + 1] is None:
            raise CompositionError("word has undefined endpoints")
    letters: list[Letter] = []
    objs: list[str] = [w.source]
    for (gen, sign), nxt in zip(w.letters, w.objects[1:]):
        if letters and letters[-1] == (gen, -sign):
            letters.pop()
            objs.pop()
        else:
            letters.append((gen, sign))
            objs.append(nxt)
    return Word(tuple(letters), tuple(objs))


class PresentedGroupoid:
    """Objects, arrow generators and relations between parallel words."""

    def __init__(self, objects: Sequence[str], generators: Sequence[tuple[str, str, str]],
                 relations: Sequence = (), *, name: str = ""):
        self.name = name
        self.objects: tuple[str, ...] = tuple(str(x) for x in objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValidationError("duplicate object ids")
        objset = set(self.objects)
        gens = []
        ends: dict[str, tuple[str, str]] = {}
        for gid, s, t in generators:
            gid, s, t = str(gid), str(s), str(t)
            if gid in ends:
                raise ValidationError(f"duplicate generator id {gid!r}")
            if gid.startswith("-") or not gid:
                raise ValidationError(f"generator id {gid!r} is not allowed")
            if s not in objset or t not in objset:
                raise ValidationError(f"generator {gid!r} has undeclared endpoint")
            ends[gid] = (s, t)
            gens.append((gid, s, t))
        self.generators: tuple[tuple[str, str, str], ...] = tuple(gens)
        self.ends = ends
        self.gen_index = {g: i for i, (g, _, _) in enumerate(gens)}
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        rels = []
        for rel in relations:
            lhs, rhs = self._coerce_pair(rel)
            if (lhs.source, lhs.target) != (rhs.source, rhs.target):
                raise ValidationError(
                    f"relation sides are not parallel: {lhs} : {lhs.source}->{lhs.target} vs {rhs} : {rhs.source}->{rhs.target}")
            rels.append((reduce(lhs), reduce(rhs)))
        self.relations: tuple[tuple[Word, Word], ...] = tuple(rels)

    def _coerce_pair(self, rel) -> tuple[Word, Word]:
        a, b = rel
        if isinstance(a, Word) and isinstance(b, Word):
            return a, b
        if isinstance(a, Word):
            return a, self.word(b, start=a.source)
        if isinstance(b, Word):
            return self.word(a, start=b.source), b
        a, b = list(a), list(b)
        if a:
            wa = self.word(a)
            return wa, self.word(b, start=wa.source)
        if b:
            wb = self.word(b)
            return self.word(a, start=wb.source), wb
        raise ValidationError("relation with two empty sides carries no object")

    def word(self, letters: Iterable, start: str | None = None) -> Word:
        return make_word(self.ends, letters, start)

    def identity(self, obj: str) -> Word:
        if obj not in self.obj_index:
            raise ValidationError(f"unknown object {obj!r}")
        return Word((), (obj,))

    def __repr__(self) -> str:
        return (f"PresentedGroupoid({self.name or '?'}: {len(self.objects)} objects, "
                f"{len(self.generators)} generators, {len(self.relations)} relations)")

    def components(self) -> list[list[str]]:
        """Connected components of the generator graph, objects in declaration order."""
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, s, t in self.generators:
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[max(rs, rt, key=self.obj_index.get)] = min(rs, rt, key=self.obj_index.get)
        comps: dict[str, list[str]] = {}
        for x in self.objects:
            comps.setdefault(find(x), []).append(x)
        return list(comps.values())

    def spanning_forest(self) -> set[str]:
        """Generators of a BFS spanning forest, rooted at the least object of each component."""
        adj: dict[str, list[tuple[str, str]]] = {x: [] for x in self.objects}
        for g, s, t in self.generators:
            adj[s].append((g, t))
            adj[t].append((g, s))
        seen: set[str] = set()
        tree: set[str] = set()
        for root in self.objects:
            if root in seen:
                continue
            seen.add(root)
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for g, y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        tree.add(g)
                        queue.append(y)
        return tree

    def with_relations(self, relations) -> "PresentedGroupoid":
        return PresentedGroupoid(self.objects, self.generators, list(self.relations) + list(relations),
                                 name=self.name)

    def canonical(self) -> tuple:
        """Hashable normal form used to compare presentations."""
        return (self.objects, self.generators,
                tuple((a.letters, a.source, b.letters, b.source) for a, b in self.relations))

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "generators": [{"id": g, "src": s, "dst": t} for g, s, t in self.generators],
            "relations": [[a.signed() if a.letters else {"identity": a.source},
                           b.signed() if b.letters else {"identity": b.source}]
                          for a, b in self.relations],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "PresentedGroupoid":
        gens = [(g["id"], g["src"], g["dst"]) for g in doc.get("generators", [])]
        rels = []
        ends = {str(g): (str(s), str(t)) for g, s, t in gens}
        for a, b in doc.get("relations", []):
            wa = make_word(ends, [], a["identity"]) if isinstance(a, Mapping) else None
            wb = make_word(ends, [], b["identity"]) if isinstance(b, Mapping) else None
            if wa is None and wb is None:
                rels.append((a, b))
            elif wa is None:
                rels.append((make_word(ends, a, wb.source), wb))
            elif wb is None:
                rels.append((wa, make_word(ends, b, wa.source)))
            else:
                rels.append((wa, wb))
        return cls(doc.get("objects", []), gens, rels, name=doc.get("name", ""))


def free_groupoid(objects: Sequence[str], edges: Sequence[tuple[str, str, str]], name: str = "") -> PresentedGroupoid:
    return PresentedGroupoid(objects, edges, (), name=name)


def coequalizer_presentation(objects: Sequence[str], edges: Sequence[tuple[str, str, str]],
                             relation_pairs: Sequence[tuple[Sequence, Sequence]], name: str = "") -> PresentedGroupoid:
    """Quotient of the free groupoid on a graph by the congruence generated by word pairs."""
    free = free_groupoid(objects, edges)
    rels = []
    for a, b in relation_pairs:
        rels.append(free._coerce_pair((a, b)))
    return PresentedGroupoid(objects, edges, rels, name=name)


def one_loop(name: str = "BZ", obj: str = "*", gen: str = "g", relations=()) -> PresentedGroupoid:
    return PresentedGroupoid([obj], [(gen, obj, obj)], relations, name=name)


# ---------------------------------------------------------------------------
# finite groupoids


class FiniteGroupoid:
    """A finite groupoid given by explicit arrows and a composition table.

    ``compose(a2, a1)`` is ``a2 o a1`` and requires ``src(a2) == dst(a1)``.
    The axioms are checked exhaustively at construction.
    """

    def __init__(self, objects: Sequence[str], arrows: Sequence[tuple[str, str]],
                 compose: Mapping[tuple[int, int], int], names: Sequence[str] | None = None,
                 *, name: str = "H", verify: bool = True):
        self.name = name
        self.objects = tuple(str(x) for x in objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValidationError("duplicate objects")
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        self.src: tuple[int, ...] = tuple(self.obj_index[str(s)] for s, _ in arrows)
        self.dst: tuple[int, ...] = tuple(self.obj_index[str(t)] for _, t in arrows)
        self.names = tuple(names) if names is not None else tuple(f"a{i}" for i in range(len(arrows)))
        n = len(arrows)
        comp = [[-1] * n for _ in range(n)]
        for (a2, a1), c in compose.items():
            comp[a2][a1] = c
        self.comp: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in comp)
        self.hom: dict[tuple[int, int], list[int]] = {}
        self.out: list[list[int]] = [[] for _ in self.objects]
        for a in range(n):
            self.hom.setdefault((self.src[a], self.dst[a]), []).append(a)
            self.out[self.src[a]].append(a)
        self.ident = [self._find_identity(x) for x in range(len(self.objects))]
        self.inverse = tuple(self._find_inverse(a) for a in range(n))
        if verify:
            self._audit()

    def _find_identity(self, x: int) -> int:
        for a in self.hom.get((x, x), []):
            if all(self.comp[b][a] == b for b in range(len(self.src)) if self.src[b] == x) and \
               all(self.comp[a][b] == b for b in range(len(self.src)) if self.dst[b] == x):
                return a
        raise ValidationError(f"groupoid {self.name!r}: object {self.objects[x]!r} has no identity")

    def _find_inverse(self, a: int) -> int:
        s, t = self.src[a], self.dst[a]
        for b in self.hom.get((t, s), []):
            if self.comp[b][a] == self.ident[s] and self.comp[a][b] == self.ident[t]:
                return b
        raise ValidationError(f"groupoid {self.name!r}: arrow {self.names[a]!r} is not invertible")

    def _audit(self) -> None:
        n = len(self.src)
        for a2 in range(n):
            for a1 in range(n):
                c = self.comp[a2][a1]
                if self.src[a2] == self.dst[a1]:
                    if c < 0 or self.src[c] != self.src[a1] or self.dst[c] != self.dst[a2]:
                        raise ValidationError(f"groupoid {self.name!r}: bad composite {self.names[a2]} o {self.names[a1]}")
                elif c >= 0:
                    raise ValidationError(f"groupoid {self.name!r}: composite defined for non-composable pair")
        for a3 in range(n):
            for a2 in self.in_composable(a3):
                for a1 in self.in_composable(a2):
                    if self.comp[self.comp[a3][a2]][a1] != self.comp[a3][self.comp[a2][a1]]:
                        raise ValidationError(f"groupoid {self.name!r}: composition is not associative")

    def in_composable(self, a: int) -> list[int]:
        """Arrows ``b`` with ``a o b`` defined."""
        x = self.src[a]
        return [b for b in range(len(self.src)) if self.dst[b] == x]

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    def compose(self, a2: int, a1: int) -> int:
        c = self.comp[a2][a1]
        if c < 0:
            raise CompositionError(f"{self.names[a2]} o {self.names[a1]} is not defined")
        return c

    def identity(self, x: int) -> int:
        return self.ident[x]

    def automorphisms(self, x: int) -> list[int]:
        return self.hom.get((x, x), [])

    def components(self) -> list[list[int]]:
        parent = list(range(len(self.objects)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a in range(self.n_arrows):
            r1, r2 = find(self.src[a]), find(self.dst[a])
            if r1 != r2:
                parent[max(r1, r2)] = min(r1, r2)
        comps: dict[int, list[int]] = {}
        for x in range(len(self.objects)):
            comps.setdefault(find(x), []).append(x)
        return list(comps.values())

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name!r}: {len(self.objects)} objects, {self.n_arrows} arrows)"

    # -- constructors ------------------------------------------------------------

    @classmethod
    def from_group(cls, G: LabelGroup, obj: str = "*") -> "FiniteGroupoid":
        arrows = [(obj, obj)] * G.order
        comp = {(a, b): G.mul(a, b) for a in range(G.order) for b in range(G.order)}
        return cls([obj], arrows, comp, list(G.names), name=f"B{G.name}")

    @classmethod
    def pair_groupoid(cls, objects: Sequence[str], G: LabelGroup | None = None) -> "FiniteGroupoid":
        """Codiscrete groupoid on ``objects`` times a group: arrows ``(x, g, y)``."""
        from .groups import trivial_group
        G = G or trivial_group()
        arrows, names, index = [], [], {}
        for x in objects:
            for y in objects:
                for g in range(G.order):
                    index[(x, g, y)] = len(arrows)
                    arrows.append((x, y))
                    names.append(f"{x}-{G.name_of(g)}->{y}")
        comp = {}
        for (y, g2, z), a2 in index.items():
            for (x, g1, y1), a1 in index.items():
                if y1 == y:
                    comp[(a2, a1)] = index[(x, G.mul(g2, g1), z)]
        return cls(objects, arrows, comp, names, name=f"Pair{len(objects)}x{G.name}")

    @classmethod
    def disjoint_union(cls, *parts: "FiniteGroupoid") -> "FiniteGroupoid":
        objects, arrows, names, comp = [], [], [], {}
        for k, H in enumerate(parts):
            off = len(arrows)
            objects += [f"{k}.{x}" for x in H.objects]
            arrows += [(f"{k}.{H.objects[H.src[a]]}", f"{k}.{H.objects[H.dst[a]]}") for a in range(H.n_arrows)]
            names += [f"{k}.{nm}" for nm in H.names]
            for a2 in range(H.n_arrows):
                for a1 in range(H.n_arrows):
                    c = H.comp[a2][a1]
                    if c >= 0:
                        comp[(a2 + off, a1 + off)] = c + off
        return cls(objects, arrows, comp, names, name="+".join(H.name for H in parts))

    def to_json(self) -> dict:
        n = self.n_arrows
        return {
            "name": self.name,
            "objects": list(self.objects),
            "arrows": [{"name": self.names[a], "src": self.objects[self.src[a]], "dst": self.objects[self.dst[a]]}
                       for a in range(n)],
            "compose": [[a2, a1, self.comp[a2][a1]] for a2 in range(n) for a1 in range(n) if self.comp[a2][a1] >= 0],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "FiniteGroupoid":
        """Explicit groupoids, or shorthands ``{"group": G}``, ``{"pair": [objs], "group": G}``,
        ``{"union": [H, ...]}``."""
        from .groups import from_json as group_from_json
        if "union" in doc:
            return cls.disjoint_union(*(cls.from_json(d) for d in doc["union"]))
        if "pair" in doc:
            G = group_from_json(doc["group"]) if "group" in doc else None
            return cls.pair_groupoid([str(x) for x in doc["pair"]], G)
        if "arrows" not in doc:
            return cls.from_group(group_from_json(doc.get("group", doc)))
        arrows = [(a["src"], a["dst"]) for a in doc["arrows"]]
        names = [a.get("name", f"a{i}") for i, a in enumerate(doc["arrows"])]
        comp = {(int(a2), int(a1)): int(c) for a2, a1, c in doc["compose"]}
        return cls(doc["objects"], arrows, comp, names, name=doc.get("name", "H"))


# ---------------------------------------------------------------------------
# functors


@dataclass(frozen=True)
class Functor:
    """Object images (by index into ``dst.objects``) and generator images (arrow indices)."""

    objects: tuple[int, ...]
    arrows: tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (self.objects, self.arrows)


def evaluate(src: PresentedGroupoid, dst: FiniteGroupoid, F: Functor, w: Word) -> int:
    """Image of a word: composite of letter images in path order."""
    acc = dst.ident[F.objects[src.obj_index[w.source]]]
    for gen, sign in w.letters:
        a = F.arrows[src.gen_index[gen]]
        if sign == -1:
            a = dst.inverse[a]
        acc = dst.compose(a, acc)
    return acc


def check_functor(src: PresentedGroupoid, dst: FiniteGroupoid, assignment: Mapping,
                  objects: Mapping | None = None) -> bool:
    """True iff the generator assignment respects every relation.

    ``assignment`` maps generator ids to arrows of ``dst`` (index or name).
    The object map is read off the arrows; an explicit ``objects`` map is
    checked against it.  Inconsistent endpoints raise
    :class:`InvalidAssignmentError`.
    """
    F = functor_from_assignment(src, dst, assignment, objects)
    return all(evaluate(src, dst, F, a) == evaluate(src, dst, F, b) for a, b in src.relations)


def _arrow_index(dst: FiniteGroupoid, a) -> int:
    if isinstance(a, str):
        try:
            return dst.names.index(a)
        except ValueError:
            raise InvalidAssignmentError(f"unknown arrow {a!r} in {dst.name}") from None
    a = int(a)
    if not 0 <= a < dst.n_arrows:
        raise InvalidAssignmentError(f"arrow index {a} out of range")
    return a


def functor_from_assignment(src: PresentedGroupoid, dst: FiniteGroupoid, assignment: Mapping,
                            objects: Mapping | None = None) -> Functor:
    missing = [g for g, _, _ in src.generators if g not in assignment]
    if missing:
        raise InvalidAssignmentError(f"assignment missing generators {missing}")
    obj: list[int | None] = [None] * len(src.objects)
    if objects:
        for x, y in objects.items():
            obj[src.obj_index[str(x)]] = dst.obj_index[str(y)] if not isinstance(y, int) else y
    arrows = []
    for g, s, t in src.generators:
        a = _arrow_index(dst, assignment[g])
        for end, want in ((s, dst.src[a]), (t, dst.dst[a])):
            i = src.obj_index[end]
            if obj[i] is None:
                obj[i] = want
            elif obj[i] != want:
                raise InvalidAssignmentError(
                    f"generator {g!r} sent to {dst.names[a]!r} conflicts with object {end!r} -> {dst.objects[obj[i]]!r}")
        arrows.append(a)
    if any(x is None for x in obj):
        raise InvalidAssignmentError("object map is undetermined for isolated objects; pass objects=")
    return Functor(tuple(obj), tuple(arrows))


def _closed_relations(src: PresentedGroupoid) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """Each relation ``a = b`` as the loop ``a`` then ``b^-1``: ``(start object, letters)``."""
    out = []
    for a, b in src.relations:
        loop = a.then(b.inverse())
        if loop.letters:
            out.append((src.obj_index[loop.source],
                        tuple((src.gen_index[g], sgn) for g, sgn in loop.letters)))
    return out


def iter_functors(src: PresentedGroupoid, dst: FiniteGroupoid, *, cap: int = DEFAULT_CAP,
                  fixed: Mapping[str, int] | None = None, fixed_objects: Mapping[str, int] | None = None):
    """Generate functors by backtracking with relation propagation.

    A relation with a single unassigned generator occurring once determines
    that generator; branching picks the first unassigned generator of the
    relation with fewest unknowns (declaration order when no relation is
    pending) and tries ``dst`` arrows in construction order.  Objects
    untouched by generators range over ``dst`` objects last.  ``fixed`` pins
    generator images and ``fixed_objects`` pins object images (both by index).
    The yield order is deterministic; :func:`enumerate_functors` sorts it.
    """
    n_gen = len(src.generators)
    obj: list[int | None] = [None] * len(src.objects)
    for x, y in (fixed_objects or {}).items():
        obj[src.obj_index[x]] = y
    arrows: list[int | None] = [None] * n_gen
    rels = _closed_relations(src)
    rel_gens = [sorted({k for k, _ in letters}) for _, letters in rels]
    occurs = [{k: sum(1 for j, _ in letters if j == k) for k in gens}
              for (_, letters), gens in zip(rels, rel_gens)]
    by_gen: list[list[int]] = [[] for _ in range(n_gen)]
    for r, gens in enumerate(rel_gens):
        for k in gens:
            by_gen[k].append(r)
    unknown = [len(g) for g in rel_gens]
    gi = [(src.obj_index[s], src.obj_index[t]) for _, s, t in src.generators]
    touched = {i for st in gi for i in st}
    isolated = [i for i in range(len(src.objects)) if i not in touched and obj[i] is None]
    comp, inv, ident = dst.comp, dst.inverse, dst.ident
    visits = [0]
    trail: list[tuple[str, int]] = []

    def assign(k: int, a: int) -> bool:
        """Set generator ``k`` to arrow ``a`` and propagate; False on contradiction."""
        stack = [(k, a)]
        while stack:
            k, a = stack.pop()
            visits[0] += 1
            if visits[0] > cap:
                raise CapExceededError("functor enumeration", cap)
            if arrows[k] is not None:
                if arrows[k] != a:
                    return False
                continue
            s, t = gi[k]
            for i, want in ((s, dst.src[a]), (t, dst.dst[a])):
                if obj[i] is None:
                    obj[i] = want
                    trail.append(("o", i))
                elif obj[i] != want:
                    return False
            arrows[k] = a
            trail.append(("g", k))
            for r in by_gen[k]:
                unknown[r] -= 1
            for r in by_gen[k]:
                if unknown[r] == 0:
                    if loop_image(r) != ident[obj[rels[r][0]]]:
                        return False
                elif unknown[r] == 1:
                    forced = solve(r)
                    if forced is not None:
                        stack.append(forced)
        return True

    def loop_image(r: int) -> int:
        start, letters = rels[r]
        acc = ident[obj[start]]
        for j, sgn in letters:
            x = arrows[j] if sgn == 1 else inv[arrows[j]]
            acc = comp[x][acc]
            if acc < 0:
                return -1
        return acc

    def solve(r: int):
        start, letters = rels[r]
        k = next(j for j in rel_gens[r] if arrows[j] is None)
        if occurs[r][k] != 1 or obj[start] is None:
            return None
        p = next(i for i, (j, _) in enumerate(letters) if j == k)
        pre = ident[obj[start]]
        for j, sgn in letters[:p]:
            pre = comp[arrows[j] if sgn == 1 else inv[arrows[j]]][pre]
            if pre < 0:
                return None
        end = obj[start]
        suf = ident[end]
        for j, sgn in reversed(letters[p + 1:]):
            x = arrows[j] if sgn == 1 else inv[arrows[j]]
            suf = comp[suf][x]
            if suf < 0:
                return None
        x = comp[inv[suf]][inv[pre]]
        if x < 0:
            return None
        return (k, x if letters[p][1] == 1 else inv[x])

    def undo(mark: int) -> None:
        while len(trail) > mark:
            kind, i = trail.pop()
            if kind == "o":
                obj[i] = None
            else:
                arrows[i] = None
                for r in by_gen[i]:
                    unknown[r] += 1

    def pick() -> int | None:
        best, best_r = None, None
        for r, u in enumerate(unknown):
            if u and (best is None or u < best):
                best, best_r = u, r
        if best_r is not None:
            return next(j for j in rel_gens[best_r] if arrows[j] is None)
        for k in range(n_gen):
            if arrows[k] is None:
                return k
        return None

    def candidates(k: int):
        s, t = gi[k]
        if obj[s] is not None and obj[t] is not None:
            return dst.hom.get((obj[s], obj[t]), [])
        if obj[s] is not None:
            return dst.hom.get((obj[s], obj[s]), []) if s == t else dst.out[obj[s]]
        if obj[t] is not None:
            return [a for a in range(dst.n_arrows) if dst.dst[a] == obj[t]]
        if s == t:
            return [a for a in range(dst.n_arrows) if dst.src[a] == dst.dst[a]]
        return range(dst.n_arrows)

    def rec():
        k = pick()
        if k is None:
            yield from objects_rec(0)
            return
        for a in list(candidates(k)):
            mark = len(trail)
            if assign(k, a):
                yield from rec()
            undo(mark)

    def objects_rec(j: int):
        if j == len(isolated):
            yield Functor(tuple(obj), tuple(arrows))
            return
        i = isolated[j]
        for y in range(len(dst.objects)):
            visits[0] += 1
            if visits[0] > cap:
                raise CapExceededError("functor enumeration", cap)
            obj[i] = y
            yield from objects_rec(j + 1)
        obj[i] = None

    ok = True
    for g, a in (fixed or {}).items():
        ok = ok and assign(src.gen_index[g], int(a))
    if ok:
        yield from rec()


def _functor_sort_key(src: PresentedGroupoid):
    touched = {src.obj_index[x] for _, s, t in src.generators for x in (s, t)}
    iso = [i for i in range(len(src.objects)) if i not in touched]
    return lambda F: (F.arrows, tuple(F.objects[i] for i in iso))


def enumerate_functors(src: PresentedGroupoid, dst: FiniteGroupoid, *, cap: int = DEFAULT_CAP,
                       fixed: Mapping[str, int] | None = None,
                       fixed_objects: Mapping[str, int] | None = None) -> list[Functor]:
    """All functors ``src -> dst`` (exactly those passing :func:`check_functor`).

    Sorted lexicographically by generator images in declaration order, then
    by images of isolated objects; this is the order of a plain depth-first
    search over generators in declaration order and arrows in construction
    order.
    """
    found = iter_functors(src, dst, cap=cap, fixed=fixed, fixed_objects=fixed_objects)
    return sorted(found, key=_functor_sort_key(src))


def gauge_fixed_functors(src: PresentedGroupoid, dst: FiniteGroupoid, *, cap: int = DEFAULT_CAP):
    """Functors sending a spanning forest of ``src`` to identities at component representatives.

    Every functor is isomorphic to one of these.  Returns ``(functors,
    residual)`` where ``residual[c]`` lists the object indices of the c-th
    component of ``src``.  Two gauge-fixed functors are isomorphic exactly
    when they differ by one automorphism of the image object applied
    uniformly across each component.
    """
    tree = src.spanning_forest()
    comps = src.components()
    reps = [d[0] for d in dst.components()]
    out = []
    residual_choices = []
    for choice in itertools.product(reps, repeat=len(comps)):
        fixed_obj = {x: o for comp, o in zip(comps, choice) for x in comp}
        fixed = {g: dst.ident[fixed_obj[s]] for g, s, _ in src.generators if g in tree}
        for F in iter_functors(src, dst, cap=cap, fixed=fixed, fixed_objects=fixed_obj):
            out.append(F)
    for comp in comps:
        residual_choices.append([src.obj_index[x] for x in comp])
    return out, residual_choices


def brute_force_functor_count(src: PresentedGroupoid, dst: FiniteGroupoid, *, cap: int = DEFAULT_CAP) -> int:
    """Functor count by trying every object map and every generator image.

    No propagation or pruning; meant as a cross-check for small inputs.
    """
    n = 0
    states = 0
    ends = [(src.obj_index[s], src.obj_index[t]) for _, s, t in src.generators]
    for objs in itertools.product(range(len(dst.objects)), repeat=len(src.objects)):
        homs = [dst.hom.get((objs[s], objs[t]), []) for s, t in ends]
        for arrows in itertools.product(*homs):
            states += 1
            if states > cap:
                raise CapExceededError("brute-force functor enumeration", cap)
            F = Functor(tuple(objs), tuple(arrows))
            if all(evaluate(src, dst, F, a) == evaluate(src, dst, F, b) for a, b in src.relations):
                n += 1
    return n


def transport(src: PresentedGroupoid, dst: FiniteGroupoid, F: Functor, eta: Mapping[int, int]) -> Functor:
    """Target of the natural isomorphism with components ``eta[x] : F(x) -> F'(x)``
    (identity at objects not listed): ``F'(g) = eta_t o F(g) o eta_s^-1``."""
    obj = list(F.objects)
    for x, a in eta.items():
        if dst.src[a] != F.objects[x]:
            raise InvalidAssignmentError("natural isomorphism component has wrong source")
        obj[x] = dst.dst[a]
    arrows = []
    for k, (g, s, t) in enumerate(src.generators):
        si, ti = src.obj_index[s], src.obj_index[t]
        a = F.arrows[k]
        if si in eta:
            a = dst.comp[a][dst.inverse[eta[si]]]
        if ti in eta:
            a = dst.comp[eta[ti]][a]
        arrows.append(a)
    return Functor(tuple(obj), tuple(arrows))


def orbit_count(keys: Iterable, moves) -> tuple[int, list]:
    """Orbits of a finite set under a move generator; returns ``(count, representatives)``.

    ``moves(x)`` yields neighbours of ``x``; the set must be closed under them
    and the moves must generate a groupoid action (so orbits are the connected
    components).  Representatives are the minimal key of each orbit.
    """
    keys = list(keys)
    universe = set(keys)
    seen: set = set()
    reps = []
    for k in keys:
        if k in seen:
            continue
        seen.add(k)
        orbit_min = k
        queue = deque([k])
        while queue:
            x = queue.popleft()
            for y in moves(x):
                if y not in universe:
                    raise ValidationError("enumerated set is not closed under the gauge moves")
                if y not in seen:
                    seen.add(y)
                    if y < orbit_min:
                        orbit_min = y
                    queue.append(y)
        reps.append(orbit_min)
    return len(reps), reps


def natural_iso_moves(src: PresentedGroupoid, dst: FiniteGroupoid):
    """Elementary natural isomorphisms: one non-identity component at one object."""

    def moves(key):
        F = Functor(*key)
        for x in range(len(src.objects)):
            for a in dst.out[F.objects[x]]:
                if a != dst.ident[F.objects[x]]:
                    yield transport(src, dst, F, {x: a}).key

    return moves


def count_iso_classes(src: PresentedGroupoid, dst: FiniteGroupoid, *, cap: int = DEFAULT_CAP,
                      method: str = "tree") -> int:
    """Number of isomorphism classes in the groupoid of functors ``src -> dst``.

    ``method="orbit"`` enumerates every functor and merges orbits of natural
    isomorphisms.  ``method="tree"`` gauge-fixes a spanning forest of each
    component to identities at one representative object per component of
    ``dst`` and then counts conjugation orbits; the result is a product over
    components of ``src``.
    """
    if method == "orbit":
        keys = [F.key for F in iter_functors(src, dst, cap=cap)]
        return orbit_count(keys, natural_iso_moves(src, dst))[0]
    if method != "tree":
        raise ValueError(f"unknown method {method!r}")
    tree = src.spanning_forest()
    total = 1
    for comp in src.components():
        cset = set(comp)
        sub_gens = [(g, s, t) for g, s, t in src.generators if s in cset]
        sub_rels = [r for r in src.relations if r[0].source in cset]
        sub = PresentedGroupoid(comp, sub_gens, sub_rels)
        n_classes = 0
        for dcomp in dst.components():
            o = dcomp[0]
            fixed = {g: dst.ident[o] for g, _, _ in sub_gens if g in tree}
            fixed_obj = {x: o for x in comp}
            loops = dst.automorphisms(o)
            seen: set = set()
            for F in iter_functors(sub, dst, cap=cap, fixed=fixed, fixed_objects=fixed_obj):
                if F.arrows in seen:
                    continue
                n_classes += 1
                for h in loops:
                    hinv = dst.inverse[h]
                    seen.add(tuple(dst.comp[dst.comp[h][a]][hinv] for a in F.arrows))
        total *= n_classes
    return total

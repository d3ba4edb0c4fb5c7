"""Finite label groups.

Every group is stored as a multiplication table on the indices ``0..N-1``.
Constructors put the identity at index 0 so that lexicographic orderings of
label tuples prefer trivial labels.

The block-unipotent Stokes groups are built here too: given a preordered,
graded index set and a prime ``p``, the Stokes group is the group of
filtration-preserving automorphisms of the graded ``F_p``-vector space that
induce the identity on the associated graded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, HomomorphismError, ValidationError

MAX_ORDER = 10_000


class LabelGroup:
    """A finite group given by its multiplication table.

    ``table[a][b]`` is the index of the product ``a*b``.  The table is audited
    when the group is built: Latin-square rows and columns, a two-sided
    identity, and associativity.  Associativity is decided exactly with Light's
    test over a generating set (the set of elements ``g`` with
    ``(x g) y = x (g y)`` for all ``x, y`` is closed under products), which
    keeps the audit at ``O(|S| N^2)`` instead of ``O(N^3)``.
    """

    def __init__(self, table, names: Sequence[str] | None = None, *, name: str = "G",
                 realization: Sequence | None = None, verify: bool = True):
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValidationError("multiplication table must be a non-empty square array")
        n = arr.shape[0]
        if n > MAX_ORDER:
            raise CapExceededError(f"group {name!r} of order {n}", MAX_ORDER)
        if arr.min() < 0 or arr.max() >= n:
            raise ValidationError("table entries must be element indices")
        self._arr = arr
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in arr)
        self.name = name
        self.names: tuple[str, ...] = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n or len(set(self.names)) != n:
            raise ValidationError("element names must be distinct and one per element")
        self.realization = tuple(realization) if realization is not None else None
        self._index = {nm: i for i, nm in enumerate(self.names)}
        ident = [e for e in range(n)
                 if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if len(ident) != 1:
            raise ValidationError(f"group {name!r}: no two-sided identity")
        self.identity = ident[0]
        inv = [0] * n
        for a in range(n):
            row = self.table[a]
            if len(set(row)) != n or len(set(arr[:, a].tolist())) != n:
                raise ValidationError(f"group {name!r}: table is not a Latin square at element {a}")
            inv[a] = row.index(self.identity)
        self.inverse: tuple[int, ...] = tuple(inv)
        self._gens: tuple[int, ...] | None = None
        if verify:
            self._check_associative()

    # -- audit -----------------------------------------------------------------

    def _check_associative(self) -> None:
        T = self._arr
        for g in self.generators():
            left = T[T[:, g], :]          # (x g) y
            right = T[:, T[g, :]]         # x (g y)
            if not np.array_equal(left, right):
                x, y = map(int, np.argwhere(left != right)[0])
                raise ValidationError(
                    f"group {self.name!r} is not associative: ({x}*{g})*{y} != {x}*({g}*{y})")

    # -- basic operations ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self):
        return iter(range(len(self.table)))

    def __repr__(self) -> str:
        return f"LabelGroup({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, elems: Iterable[int]) -> int:
        """Left-to-right product ``e0 * e1 * ...``."""
        acc = self.identity
        t = self.table
        for e in elems:
            acc = t[acc][e]
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][a]
        return acc

    def conj(self, h: int, a: int) -> int:
        """``h a h^-1``."""
        return self.table[self.table[h][a]][self.inverse[h]]

    def index_of(self, name: str | int) -> int:
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if 0 <= int(name) < self.order:
                return int(name)
            raise KeyError(name)
        return self._index[str(name)]

    def name_of(self, a: int) -> str:
        return self.names[a]

    # -- structure ---------------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> set[int]:
        """Elements reachable from the identity by right multiplication with ``gens``."""
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def generators(self) -> tuple[int, ...]:
        """A small generating set chosen greedily in index order."""
        if self._gens is None:
            gens: list[int] = []
            span = {self.identity}
            for a in range(self.order):
                if a not in span:
                    gens.append(a)
                    span = self.closure(gens)
                    if len(span) == self.order:
                        break
            self._gens = tuple(gens)
        return self._gens

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._arr, self._arr.T))

    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        classes = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = frozenset(self.conj(h, a) for h in range(self.order))
            seen |= cls
            classes.append(cls)
        return classes

    def is_trivial(self) -> bool:
        return self.order == 1

    def to_json(self) -> dict:
        doc = {"name": self.name, "elements": list(self.names),
               "table": [list(r) for r in self.table], "identity": self.identity}
        if self.realization is not None:
            doc["realization"] = [[list(row) for row in m] for m in self.realization]
        return doc


# ---------------------------------------------------------------------------
# constructors


def trivial_group() -> LabelGroup:
    return LabelGroup([[0]], ["1"], name="1")


def cyclic_group(m: int) -> LabelGroup:
    """Additive ``Z/m`` with elements named ``0..m-1``."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"cyclic group order must be a positive integer, got {m!r}")
    m = int(m)
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    return LabelGroup(table, [str(a) for a in range(m)], name=f"Z{m}")


def abelian_group(orders: Sequence[int]) -> LabelGroup:
    """``Z/n1 x ... x Z/nk`` with elements in lexicographic order of coordinate tuples."""
    orders = [int(n) for n in orders]
    if not orders or any(n < 1 for n in orders):
        raise ValueError(f"orders must be positive, got {orders!r}")
    if len(orders) == 1:
        return cyclic_group(orders[0])
    elems = list(itertools.product(*(range(n) for n in orders)))
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[tuple((x + y) % n for x, y, n in zip(a, b, orders))] for b in elems] for a in elems]
    names = ["(" + ",".join(map(str, e)) + ")" for e in elems]
    return LabelGroup(table, names, name="x".join(f"Z{n}" for n in orders))


def _perm_name(p: tuple[int, ...]) -> str:
    return "[" + ",".join(map(str, p)) + "]"


def symmetric_group(n: int) -> LabelGroup:
    """``S_n`` on ``{0..n-1}``; ``(s*t)(i) = s(t(i))``."""
    if n < 1:
        raise ValueError("symmetric group degree must be positive")
    perms = list(itertools.permutations(range(n)))   # identity first
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    return LabelGroup(table, [_perm_name(p) for p in perms], name=f"S{n}")


def direct_product(G: LabelGroup, H: LabelGroup) -> LabelGroup:
    pairs = [(g, h) for g in range(G.order) for h in range(H.order)]
    # identity of the product must be index 0 when both factors have identity 0
    pairs.sort(key=lambda gh: (gh[0] != G.identity, gh[0], gh[1] != H.identity, gh[1]))
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(G.mul(a, c), H.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({G.name_of(a)},{H.name_of(b)})" for a, b in pairs]
    return LabelGroup(table, names, name=f"{G.name}x{H.name}")


def _mat_name(m) -> str:
    return ";".join(",".join(str(int(x)) for x in row) for row in m)


def matrix_group(matrices: Sequence, p: int, *, name: str = "M") -> LabelGroup:
    """Group of ``d x d`` matrices over ``F_p`` closed under multiplication.

    ``matrices`` must already be the full list of group elements (closure is
    checked through the table audit).  The identity matrix is moved to index 0.
    """
    mats = np.asarray(matrices, dtype=np.int64) % p
    if mats.ndim != 3:
        raise ValidationError("expected a stack of square matrices")
    n, d, _ = mats.shape
    if n > MAX_ORDER:
        raise CapExceededError(f"matrix group {name!r} of order {n}", MAX_ORDER)
    eye = np.eye(d, dtype=np.int64)
    pos = [i for i in range(n) if np.array_equal(mats[i], eye)]
    if not pos:
        raise ValidationError("matrix list does not contain the identity")
    order = [pos[0]] + [i for i in range(n) if i != pos[0]]
    mats = mats[order]
    weights = p ** np.arange(d * d, dtype=np.int64)
    codes = mats.reshape(n, -1) @ weights
    if len(np.unique(codes)) != n:
        raise ValidationError("matrix list contains duplicates")
    sorter = np.argsort(codes)
    sorted_codes = codes[sorter]
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prods = np.einsum("ij,njk->nik", mats[a], mats) % p
        pc = prods.reshape(n, -1) @ weights
        loc = np.searchsorted(sorted_codes, pc)
        loc = np.minimum(loc, n - 1)
        if not np.array_equal(sorted_codes[loc], pc):
            raise ValidationError(f"matrix set {name!r} is not closed under multiplication")
        table[a] = sorter[loc]
    return LabelGroup(table, [_mat_name(m) for m in mats], name=name,
                      realization=[tuple(tuple(int(x) for x in row) for row in m) for m in mats])


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def general_linear_group(r: int, p: int) -> LabelGroup:
    """``GL_r(F_p)`` by exhaustive enumeration (small ``r``, ``p`` only)."""
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p ** (r * r) > 10 ** 6:
        raise CapExceededError(f"GL_{r}(F_{p}) enumeration", 10 ** 6)
    mats = []
    for entries in itertools.product(range(p), repeat=r * r):
        m = np.array(entries, dtype=np.int64).reshape(r, r)
        if _det_mod_p(m, p) != 0:
            mats.append(m)
    return matrix_group(mats, p, name=f"GL{r}F{p}")


def _det_mod_p(m: np.ndarray, p: int) -> int:
    a = [[int(x) % p for x in row] for row in m]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], p - 2, p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return det % p


def from_json(doc: Mapping) -> LabelGroup:
    """Inverse of :meth:`LabelGroup.to_json`, plus a few shorthands.

    Accepted forms: ``{"elements", "table", "identity"}``, ``{"cyclic": m}``,
    ``{"symmetric": n}``, ``{"abelian": [n1, n2]}``, ``{"gl": [r, p]}``, ``{"product": [doc, doc]}`` and
    ``{"unipotent": {"labels", "order", "dims", "p"}}``.
    """
    if "cyclic" in doc:
        return cyclic_group(int(doc["cyclic"]))
    if "abelian" in doc:
        return abelian_group(doc["abelian"])
    if "symmetric" in doc:
        return symmetric_group(int(doc["symmetric"]))
    if "gl" in doc:
        r, p = doc["gl"]
        return general_linear_group(int(r), int(p))
    if "product" in doc:
        a, b = doc["product"]
        return direct_product(from_json(a), from_json(b))
    if "unipotent" in doc:
        spec = doc["unipotent"]
        idx = PreorderedIndex(spec["labels"], [tuple(x) for x in spec.get("order", [])],
                              spec.get("dims"))
        return build_unipotent_stokes_group(idx, int(spec["p"]))
    if "table" not in doc:
        raise ValidationError("group document needs a 'table' or a recognised shorthand")
    G = LabelGroup(doc["table"], doc.get("elements"), name=doc.get("name", "G"))
    if "identity" in doc and int(doc["identity"]) != G.identity:
        raise ValidationError(f"declared identity {doc['identity']} is not the identity ({G.identity})")
    return G


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    source: LabelGroup
    target: LabelGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise ValidationError("homomorphism must give one image per source element")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def verify(self) -> "GroupHom":
        S, T, f = self.source, self.target, self.images
        for a in range(S.order):
            for b in range(S.order):
                if f[S.mul(a, b)] != T.mul(f[a], f[b]):
                    raise HomomorphismError(
                        f"not a homomorphism: f({S.name_of(a)}*{S.name_of(b)}) != f({S.name_of(a)})*f({S.name_of(b)})",
                        witness=(a, b))
        return self

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_identity(self) -> bool:
        return self.source is self.target and all(a == b for a, b in enumerate(self.images))

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self o first``."""
        if first.target is not self.source:
            raise ValidationError("homomorphisms are not composable")
        return GroupHom(first.source, self.target, tuple(self.images[x] for x in first.images))

    def preimage_table(self) -> dict[int, int]:
        """Inverse lookup for injective maps."""
        return {y: x for x, y in enumerate(self.images)}


def identity_hom(G: LabelGroup) -> GroupHom:
    return GroupHom(G, G, tuple(range(G.order)))


def automorphism_from_permutation(G: LabelGroup, sigma) -> GroupHom:
    """Turn an element map of ``G`` into a verified automorphism.

    ``sigma`` may be a sequence of images (by index) or a mapping keyed by
    element index or name.  Raises :class:`HomomorphismError` carrying a
    witness pair ``(a, b)`` when ``sigma(ab) != sigma(a) sigma(b)``.
    """
    if isinstance(sigma, Mapping):
        images = [None] * G.order
        for k, v in sigma.items():
            images[G.index_of(k)] = G.index_of(v)
        if any(x is None for x in images):
            raise ValidationError("permutation must be defined on every element")
    else:
        images = [G.index_of(v) for v in sigma]
    if sorted(images) != list(range(G.order)):
        raise ValidationError("element map is not a bijection")
    return GroupHom(G, G, tuple(images)).verify()


# ---------------------------------------------------------------------------
# Stokes groups from a preordered graded index


class PreorderedIndex:
    """Finite index set with a preorder and a dimension per index.

    ``relation`` lists pairs ``(a, b)`` meaning ``a <= b``; the reflexive and
    transitive closure is taken.
    """

    def __init__(self, labels: Sequence[Hashable], relation: Iterable[tuple] = (),
                 dims: Mapping | Sequence[int] | None = None):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("index labels must be distinct")
        pos = {q: i for i, q in enumerate(self.labels)}
        n = len(self.labels)
        le = [[i == j for j in range(n)] for i in range(n)]
        for a, b in relation:
            if a not in pos or b not in pos:
                raise ValidationError(f"relation pair ({a!r}, {b!r}) uses an undeclared index")
            le[pos[a]][pos[b]] = True
        for k in range(n):
            for i in range(n):
                if le[i][k]:
                    for j in range(n):
                        if le[k][j]:
                            le[i][j] = True
        self._le = le
        self._pos = pos
        if dims is None:
            d = [1] * n
        elif isinstance(dims, Mapping):
            d = [int(dims[q]) for q in self.labels]
        else:
            d = [int(x) for x in dims]
        if len(d) != n or any(x < 1 for x in d):
            raise ValidationError("every index needs a dimension >= 1")
        self.dims = tuple(d)

    @classmethod
    def chain(cls, length: int, dims: Sequence[int] | None = None) -> "PreorderedIndex":
        labels = list(range(1, length + 1))
        return cls(labels, [(a, a + 1) for a in labels[:-1]], dims)

    @classmethod
    def discrete(cls, length: int, dims: Sequence[int] | None = None) -> "PreorderedIndex":
        return cls(list(range(1, length + 1)), [], dims)

    def le(self, a, b) -> bool:
        return self._le[self._pos[a]][self._pos[b]]

    def strictly_below(self, a, b) -> bool:
        """``a <= b`` but not ``b <= a``."""
        return self.le(a, b) and not self.le(b, a)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def offsets(self) -> list[int]:
        return list(itertools.accumulate((0,) + self.dims[:-1]))

    def free_positions(self) -> list[tuple[int, int]]:
        """Matrix positions ``(row, col)`` allowed to be nonzero off the diagonal."""
        off = self.offsets()
        out = []
        for i, qi in enumerate(self.labels):
            for j, qj in enumerate(self.labels):
                if self.strictly_below(qi, qj):
                    for r in range(self.dims[i]):
                        for c in range(self.dims[j]):
                            out.append((off[i] + r, off[j] + c))
        return sorted(out)

    def expected_log_order(self) -> int:
        """Exponent ``e`` with ``|St| = p**e``."""
        return sum(self.dims[i] * self.dims[j]
                   for i, a in enumerate(self.labels) for j, b in enumerate(self.labels)
                   if self.strictly_below(a, b))


def build_unipotent_stokes_group(idx: PreorderedIndex, p: int) -> LabelGroup:
    """Kernel of the graded map on filtered automorphisms, as a matrix group.

    Elements are ``d x d`` matrices over ``F_p`` with identity diagonal blocks
    and free entries in block ``(q', q)`` exactly when ``q'`` lies strictly
    below ``q``.
    """
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    d = idx.total_dim
    if d > 6:
        raise CapExceededError(f"unipotent Stokes group of total dimension {d}", 6)
    free = idx.free_positions()
    if p ** len(free) > MAX_ORDER:
        raise CapExceededError(f"unipotent Stokes group of order {p}^{len(free)}", MAX_ORDER)
    mats = []
    for entries in itertools.product(range(p), repeat=len(free)):
        m = np.eye(d, dtype=np.int64)
        for (r, c), x in zip(free, entries):
            m[r, c] = x
        mats.append(m)
    return matrix_group(mats, p, name=f"St(p={p},d={d})")


def filtered_kernel_by_exhaustion(idx: PreorderedIndex, p: int) -> list[tuple[tuple[int, ...], ...]]:
    """All invertible matrices preserving every ``F_<=q`` and acting trivially on
    every graded piece ``F_<=q / F_<q``; brute force over all ``p**(d*d)`` matrices.

    Independent of :func:`build_unipotent_stokes_group`; used to cross-check it.
    """
    d = idx.total_dim
    if p ** (d * d) > 2 * 10 ** 5:
        raise CapExceededError("exhaustive kernel enumeration", 2 * 10 ** 5)
    off = idx.offsets()
    coords = {q: list(range(off[i], off[i] + idx.dims[i])) for i, q in enumerate(idx.labels)}
    below = {q: [c for q2 in idx.labels if idx.le(q2, q) for c in coords[q2]] for q in idx.labels}
    strict = {q: [c for q2 in idx.labels if idx.le(q2, q) and not idx.le(q, q2) for c in coords[q2]]
              for q in idx.labels}
    found = []
    for entries in itertools.product(range(p), repeat=d * d):
        m = np.array(entries, dtype=np.int64).reshape(d, d)
        ok = True
        for q in idx.labels:
            inside = set(below[q])
            lower = set(strict[q])
            for c in below[q]:
                col = m[:, c]
                # preserves the filtration step
                if any(col[r] for r in range(d) if r not in inside):
                    ok = False
                    break
                # graded identity: image of a basis vector of the piece is itself modulo F_<q
                if c in lower:
                    continue
                for r in inside - lower:
                    if col[r] != (1 if r == c else 0):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok and _det_mod_p(m, p) != 0:
            found.append(tuple(tuple(int(x) for x in row) for row in m))
    return found


# ---------------------------------------------------------------------------
# groups attached to strata


@dataclass
class StratumGroupAssignment:
    """Stokes group per stratum plus restriction maps along specialisation.

    ``restrictions[(s, t)]`` is the injective homomorphism from the group of
    the more special stratum ``s`` to that of ``t`` (``s <= t``).  Missing
    entries between strata carrying the *same* group object default to the
    identity.
    """

    groups: dict
    restrictions: dict = field(default_factory=dict)

    @classmethod
    def uniform(cls, strata: Iterable, G: LabelGroup) -> "StratumGroupAssignment":
        return cls({s: G for s in strata})

    def group(self, stratum) -> LabelGroup:
        try:
            return self.groups[stratum]
        except KeyError:
            raise ValidationError(f"no label group assigned to stratum {stratum!r}") from None

    def res(self, s, t) -> GroupHom:
        if s == t:
            return identity_hom(self.group(s))
        hom = self.restrictions.get((s, t))
        if hom is None:
            if self.group(s) is self.group(t):
                return identity_hom(self.group(s))
            raise ValidationError(f"no restriction map from stratum {s!r} to {t!r}")
        return hom

    def is_uniform(self) -> bool:
        gs = list(self.groups.values())
        if any(g is not gs[0] for g in gs):
            return False
        return all(h.is_identity() for h in self.restrictions.values())

    def validate(self, poset=None) -> "StratumGroupAssignment":
        for (s, t), hom in self.restrictions.items():
            if hom.source is not self.group(s) or hom.target is not self.group(t):
                raise ValidationError(f"restriction {s!r}->{t!r} has wrong source or target group")
            hom.verify()
            if not hom.is_injective():
                raise ValidationError(f"restriction {s!r}->{t!r} is not injective")
        if poset is not None:
            pairs = [(s, t) for s in poset.strata for t in poset.strata if s != t and poset.le(s, t)]
            for s, t in pairs:
                if s in self.groups and t in self.groups:
                    self.res(s, t)
            for s, t in pairs:
                for r in poset.strata:
                    if t != r and s != r and poset.le(t, r) and all(x in self.groups for x in (s, t, r)):
                        lhs = self.res(t, r).compose(self.res(s, t))
                        if lhs.images != self.res(s, r).images:
                            raise ValidationError(f"restrictions {s!r}->{t!r}->{r!r} are not functorial")
        return self

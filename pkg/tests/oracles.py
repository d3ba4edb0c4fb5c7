"""Brute-force reference computations used to cross-check the library.

These deliberately avoid the library's search, propagation and gauge-fixing
code: they try every assignment and compute orbits by applying every gauge.
"""

from __future__ import annotations

import itertools


def _res(groups, s, t):
    return groups.res(s, t) if hasattr(groups, "res") else None


def _group(groups, stratum):
    return groups.group(stratum) if hasattr(groups, "group") else groups


def _push(groups, s, t, x):
    h = _res(groups, s, t)
    return x if h is None else h(x)


def face_ok(K, groups, labels: dict) -> bool:
    edges = {e.id: e for e in K.edges}
    for f in K.faces:
        F = _group(groups, f.stratum)
        acc = F.identity
        for eid, sign in f.boundary:
            e = edges[eid]
            x = _push(groups, e.stratum, f.stratum, labels[eid])
            if sign == -1:
                x = F.inv(x)
            acc = F.mul(x, acc)
        if acc != F.identity:
            return False
    return True


def all_cocycles(K, groups) -> list[tuple[int, ...]]:
    ranges = [range(_group(groups, e.stratum).order) for e in K.edges]
    out = []
    for labels in itertools.product(*ranges):
        if face_ok(K, groups, {e.id: u for e, u in zip(K.edges, labels)}):
            out.append(labels)
    return out


def apply_gauge(K, groups, labels, h: dict) -> tuple[int, ...]:
    verts = {v.id: v for v in K.vertices}
    out = []
    for e, u in zip(K.edges, labels):
        E = _group(groups, e.stratum)
        hs = _push(groups, verts[e.src].stratum, e.stratum, h[e.src])
        ht = _push(groups, verts[e.dst].stratum, e.stratum, h[e.dst])
        out.append(E.mul(E.mul(ht, u), E.inv(hs)))
    return tuple(out)


def gauge_class_count(K, groups) -> tuple[int, int]:
    """``(cocycle count, orbit count)`` by applying every vertex gauge."""
    cocycles = all_cocycles(K, groups)
    ranges = [range(_group(groups, v.stratum).order) for v in K.vertices]
    gauges = [dict(zip((v.id for v in K.vertices), hs)) for hs in itertools.product(*ranges)]
    seen, orbits = set(), 0
    for c in cocycles:
        if c in seen:
            continue
        orbits += 1
        for h in gauges:
            seen.add(apply_gauge(K, groups, c, h))
    return len(cocycles), orbits


def one_object_functors(gens: list[str], relations, G) -> list[dict]:
    """Homomorphisms from ``<gens | relations>`` to ``G``.

    Relations are pairs of signed-letter lists read as paths (first letter
    applied first).
    """
    def ev(word, img):
        acc = G.identity
        for x in word:
            g = img[x.lstrip("-")]
            acc = G.mul(G.inv(g) if x.startswith("-") else g, acc)
        return acc

    out = []
    for images in itertools.product(range(G.order), repeat=len(gens)):
        img = dict(zip(gens, images))
        if all(ev(a, img) == ev(b, img) for a, b in relations):
            out.append(img)
    return out


def conjugation_orbits(functors: list[dict], G) -> int:
    seen, n = set(), 0
    for f in functors:
        key = tuple(sorted(f.items()))
        if key in seen:
            continue
        n += 1
        for h in range(G.order):
            seen.add(tuple(sorted((k, G.conj(h, v)) for k, v in f.items())))
    return n


def conjugacy_class_count(G) -> int:
    seen, n = set(), 0
    for a in range(G.order):
        if a in seen:
            continue
        n += 1
        seen |= {G.mul(G.mul(h, a), G.inv(h)) for h in range(G.order)}
    return n


def unipotent_order(dims: list[int], p: int) -> int:
    """``p`` to the sum of ``d_a d_b`` over strictly ordered pairs of a chain."""
    return p ** sum(dims[a] * dims[b] for a in range(len(dims)) for b in range(a + 1, len(dims)))


def groupoid_functors(src, dst) -> list[tuple]:
    """Every functor from a presented groupoid to a finite groupoid, as
    ``(object images, generator images)``, by trying all assignments."""
    ends = [(src.obj_index[s], src.obj_index[t]) for _, s, t in src.generators]

    def ev(objs, arrows, w):
        acc = dst.ident[objs[src.obj_index[w.source]]]
        for g, sign in w.letters:
            a = arrows[src.gen_index[g]]
            acc = dst.comp[a if sign == 1 else dst.inverse[a]][acc]
        return acc

    out = []
    for objs in itertools.product(range(len(dst.objects)), repeat=len(src.objects)):
        homs = [dst.hom.get((objs[s], objs[t]), []) for s, t in ends]
        for arrows in itertools.product(*homs):
            if all(ev(objs, arrows, a) == ev(objs, arrows, b) for a, b in src.relations):
                out.append((tuple(objs), tuple(arrows)))
    return out


def groupoid_iso_classes(src, dst) -> int:
    """Orbits of :func:`groupoid_functors` under all natural isomorphisms at once."""
    ends = [(src.obj_index[s], src.obj_index[t]) for _, s, t in src.generators]
    funs = groupoid_functors(src, dst)
    seen, n = set(), 0
    for objs, arrows in funs:
        if (objs, arrows) in seen:
            continue
        n += 1
        for eta in itertools.product(*(dst.out[o] for o in objs)):
            new_objs = tuple(dst.dst[a] for a in eta)
            new_arrows = tuple(dst.comp[dst.comp[eta[t]][a]][dst.inverse[eta[s]]]
                               for a, (s, t) in zip(arrows, ends))
            seen.add((new_objs, new_arrows))
    return n


def equivariant_class_count(K, A, G, sigma=None) -> tuple[int, int]:
    """``(equivariant cocycle count, gauge class count)`` by trying every
    coherence assignment and applying every gauge.  ``sigma[g]`` is the
    permutation of labels for deck element ``g`` (identity when omitted)."""
    D = A.group
    sigma = sigma or [list(range(G.order))] * D.order
    vid = [v.id for v in K.vertices]
    eid = [e.id for e in K.edges]
    vpos = {v: i for i, v in enumerate(vid)}
    epos = {e: i for i, e in enumerate(eid)}
    ends = [(vpos[e.src], vpos[e.dst]) for e in K.edges]
    vmap = [[vpos[A.vertex(g, v)] for v in vid] for g in range(D.order)]
    emap = [[epos[A.edge(g, e)] for e in eid] for g in range(D.order)]
    others = [g for g in range(D.order) if g != D.identity]
    nv = len(vid)

    def ok(u, c):
        for g in range(D.order):
            for e, (s, t) in enumerate(ends):
                if u[emap[g][e]] != G.mul(G.mul(c[g][t], sigma[g][u[e]]), G.inv(c[g][s])):
                    return False
        for g in range(D.order):
            for h in range(D.order):
                for v in range(nv):
                    if c[D.mul(g, h)][v] != G.mul(c[g][vmap[h][v]], sigma[g][c[h][v]]):
                        return False
        return True

    found = []
    ident = (G.identity,) * nv
    for u in all_cocycles(K, G):
        for rows in itertools.product(itertools.product(range(G.order), repeat=nv), repeat=len(others)):
            c = [None] * D.order
            c[D.identity] = ident
            for g, row in zip(others, rows):
                c[g] = row
            if ok(u, c):
                found.append((u, tuple(c)))

    def act(k, u, c):
        u2 = tuple(G.mul(G.mul(k[t], x), G.inv(k[s])) for x, (s, t) in zip(u, ends))
        c2 = tuple(tuple(G.mul(G.mul(k[vmap[g][v]], c[g][v]), G.inv(sigma[g][k[v]])) for v in range(nv))
                   for g in range(D.order))
        return u2, c2

    seen, n = set(), 0
    for x in found:
        if x in seen:
            continue
        n += 1
        for k in itertools.product(range(G.order), repeat=nv):
            seen.add(act(k, *x))
    return len(found), n

"""Seeded random generators of categories, set functors and functors.

Generated values satisfy their laws by construction: random categories are
quotients of free categories on acyclic graphs, or images of random graph
interpretations in a catalog of known small categories; random set functors
are congruence quotients of coproducts of (co)representables.
"""
from __future__ import annotations

import random

from .fincat import (FinCategory, FunctorData, OverCategory, build_category,
                     cyclic_group, discrete_category, idem_monoid, idkey,
                     interval, monoid_category, one, parallel_pair,
                     poset_category, quotient_category, sort_ids)
from .overbase import UnionFind
from .setfun import (CONTRA, COV, SetFunctor, constant_setfunctor,
                     corepresentable, make_setfunctor, representable)


def _random_graph(rng: random.Random, max_nodes=4, max_edges=5,
                  acyclic=False):
    n = rng.randint(1, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    edges = {}
    for j in range(rng.randint(0, max_edges)):
        a = rng.randrange(n)
        b = rng.randrange(n)
        if acyclic:
            if n == 1:
                continue
            a, b = sorted((a, b))
            if a == b:
                continue
        edges[f"g{j}"] = (nodes[a], nodes[b])
    return nodes, edges


def _free_on_acyclic(nodes, edges) -> FinCategory:
    """Free category on an acyclic graph: arrows are paths."""
    out: dict = {v: [] for v in nodes}
    for e, (a, b) in edges.items():
        out[a].append(e)

    paths: dict = {}

    def collect(v):
        if v in paths:
            return paths[v]
        acc = [((), v)]
        for e in out[v]:
            for (es, w) in collect(edges[e][1]):
                acc.append(((e,) + es, w))
        paths[v] = acc
        return acc

    arrows = {}
    identity = {}
    for v in nodes:
        for (es, w) in collect(v):
            arrows[("p", v, es)] = (v, w)
            if not es:
                identity[v] = ("p", v, ())
    compose = {}
    for (p, (a, b)) in arrows.items():
        for (q, (b2, c)) in arrows.items():
            if b == b2:
                compose[(q, p)] = ("p", a, p[2] + q[2])
    return FinCategory(sort_ids(nodes), arrows, identity, compose)


_MONOID_CATALOG = []


def _catalog() -> list[FinCategory]:
    global _MONOID_CATALOG
    if _MONOID_CATALOG:
        return _MONOID_CATALOG
    lz = monoid_category(
        ("1", "a", "b"),
        {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"},
        "1")
    chaotic = build_category(
        ("a", "b"), {"u": ("a", "b"), "v": ("b", "a")},
        {("v", "u"): ("id", "a"), ("u", "v"): ("id", "b")})
    diamond = poset_category(
        ("0", "l", "r", "1"),
        lambda x, y: x == y or x == "0" or y == "1")
    _MONOID_CATALOG = [
        one(), interval(), parallel_pair(), idem_monoid(),
        cyclic_group(2), cyclic_group(3), lz, chaotic, diamond,
        discrete_category(("d0", "d1")),
    ]
    return _MONOID_CATALOG


def _image_subcategory(C: FinCategory, objects, arrows) -> FinCategory:
    """Smallest subcategory of C containing the given objects and arrows."""
    objs = set(objects)
    arrs = set(arrows)
    for a in list(arrs):
        objs.add(C.src(a))
        objs.add(C.tgt(a))
    for x in objs:
        arrs.add(C.id_of(x))
    changed = True
    while changed:
        changed = False
        for a in list(arrs):
            for b in list(arrs):
                if C.src(a) == C.tgt(b):
                    c = C.comp(a, b)
                    if c not in arrs:
                        arrs.add(c)
                        changed = True
    arrows_d = {a: C.arrows[a] for a in arrs}
    identity = {x: C.id_of(x) for x in objs}
    compose = {(a, b): C.comp(a, b) for a in arrs for b in arrs
               if C.src(a) == C.tgt(b)}
    return FinCategory(sort_ids(objs), arrows_d, identity, compose)


def random_category(rng: random.Random, max_objects=4,
                    max_arrows=10) -> FinCategory:
    """A random valid finite category at desk scale."""
    for _ in range(40):
        mode = rng.random()
        if mode < 0.45:
            nodes, edges = _random_graph(rng, max_objects, 5, acyclic=True)
            C = _free_on_acyclic(nodes, edges)
            nonid = list(C.nonidentity_arrows())
            # impose a few random parallel identifications
            pairs = []
            for _ in range(rng.randint(0, 2)):
                if not nonid:
                    break
                a = rng.choice(nonid)
                par = [b for b in nonid if C.arrows[b] == C.arrows[a] and b != a]
                if par:
                    pairs.append((a, rng.choice(par)))
            if pairs:
                C = quotient_category(C, pairs)
        elif mode < 0.85:
            target = rng.choice(_catalog())
            nodes, edges = _random_graph(rng, max_objects, 5)
            node_img = {v: rng.choice(target.objects) for v in nodes}
            arrow_img = {}
            ok = True
            for e, (a, b) in edges.items():
                cands = target.hom(node_img[a], node_img[b])
                if not cands:
                    ok = False
                    break
                arrow_img[e] = rng.choice(cands)
            if not ok:
                continue
            C = _image_subcategory(target, set(node_img.values()),
                                   set(arrow_img.values()))
        else:
            C = rng.choice(_catalog())
        if len(C.objects) <= max_objects and \
                len(C.nonidentity_arrows()) <= max_arrows:
            return C
    return interval()


def random_groupoid(rng: random.Random) -> FinCategory:
    cat = [one(), cyclic_group(2), cyclic_group(3),
           discrete_category(("d0", "d1"))]
    chaotic = build_category(
        ("a", "b"), {"u": ("a", "b"), "v": ("b", "a")},
        {("v", "u"): ("id", "a"), ("u", "v"): ("id", "b")})
    cat.append(chaotic)
    return rng.choice(cat)


def _quotient_setfunctor(A: SetFunctor, pairs) -> SetFunctor:
    """Quotient by a fiberwise relation, closed under all actions."""
    X = A.base
    uf = UnionFind((x, a) for x in X.objects for a in A.fibers[x])
    queue = list(pairs)
    while queue:
        (x, a), (_, b) = queue.pop()
        if uf.find((x, a)) == uf.find((x, b)):
            continue
        uf.union((x, a), (x, b))
        for f in X.arrows:
            d, c = A.action_endpoints(f)
            if d == x:
                queue.append(((c, A.actions[f][a]), (c, A.actions[f][b])))
    members = uf.classes()
    rep = {root: mem[0][1] for root, mem in members.items()}
    cls = {key: rep[uf.find(key)] for x in X.objects
           for key in ((x, a) for a in A.fibers[x])}
    fibers = {x: sort_ids({cls[(x, a)] for a in A.fibers[x]})
              for x in X.objects}
    actions = {}
    for f in X.arrows:
        d, c = A.action_endpoints(f)
        actions[f] = {cls[(d, a)]: cls[(c, A.actions[f][a])]
                      for a in A.fibers[d]}
    return SetFunctor(X, A.variance, fibers, actions)


def _coproduct_setfunctors(parts) -> SetFunctor:
    A0 = parts[0]
    X = A0.base
    fibers = {x: [] for x in X.objects}
    actions = {f: {} for f in X.arrows}
    for i, A in enumerate(parts):
        for x in X.objects:
            fibers[x].extend((i, a) for a in A.fibers[x])
        for f in X.arrows:
            actions[f].update({(i, a): (i, b)
                               for a, b in A.actions[f].items()})
    return SetFunctor(X, A0.variance,
                      {x: sort_ids(v) for x, v in fibers.items()}, actions)


def random_setfunctor(rng: random.Random, X: FinCategory, variance: str,
                      max_fiber=3) -> SetFunctor:
    """A random presheaf or copresheaf with fibers capped by merging."""
    parts = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.random()
        if kind < 0.6:
            x = rng.choice(X.objects)
            parts.append(representable(X, x) if variance == CONTRA
                         else corepresentable(X, x))
        elif kind < 0.8:
            parts.append(constant_setfunctor(X, ("k",), variance))
        else:
            parts.append(constant_setfunctor(X, (), variance))
    A = _coproduct_setfunctors(parts)
    # random identifications, then merge down to the fiber cap
    for _ in range(rng.randint(0, 3)):
        xs = [x for x in X.objects if len(A.fibers[x]) >= 2]
        if not xs:
            break
        x = rng.choice(xs)
        a, b = rng.sample(list(A.fibers[x]), 2)
        A = _quotient_setfunctor(A, [((x, a), (x, b))])
    while True:
        xs = [x for x in X.objects if len(A.fibers[x]) > max_fiber]
        if not xs:
            break
        x = rng.choice(xs)
        a, b = rng.sample(list(A.fibers[x]), 2)
        A = _quotient_setfunctor(A, [((x, a), (x, b))])
    return A


def random_functor(rng: random.Random, C: FinCategory,
                   D: FinCategory) -> FunctorData:
    """A random functor C -> D (a constant functor always exists)."""
    objs = list(C.objects)
    nonid = sorted(C.nonidentity_arrows(), key=idkey)
    eqs = [(g, f, h) for (g, f), h in C.compose.items()
           if not C.is_identity(g) and not C.is_identity(f)]

    def try_objmap():
        objmap = {x: rng.choice(D.objects) for x in objs}
        arrmap = {C.id_of(x): D.id_of(objmap[x]) for x in objs}

        def rec(i):
            if i == len(nonid):
                return True
            a = nonid[i]
            x, y = C.arrows[a]
            cands = list(D.hom(objmap[x], objmap[y]))
            rng.shuffle(cands)
            for v in cands:
                arrmap[a] = v
                ok = all(D.compose[(arrmap[g], arrmap[f])] == arrmap[h]
                         for g, f, h in eqs
                         if g in arrmap and f in arrmap and h in arrmap)
                if ok and rec(i + 1):
                    return True
                del arrmap[a]
            return False

        if rec(0):
            return FunctorData(C, D, objmap, arrmap)
        return None

    for _ in range(30):
        F = try_objmap()
        if F is not None:
            return F
    # constant functor fallback
    x0 = rng.choice(D.objects)
    return FunctorData(C, D, {x: x0 for x in objs},
                       {a: D.id_of(x0) for a in C.arrows})


def random_over(rng: random.Random, X: FinCategory, max_total_objects=4,
                max_total_arrows=8) -> OverCategory:
    """A random category over X."""
    T = random_category(rng, max_total_objects, max_total_arrows)
    return OverCategory(T, X, random_functor(rng, T, X))

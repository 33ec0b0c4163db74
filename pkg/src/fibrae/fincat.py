"""Finite categories, functors, and categories over a base.

Values are immutable after construction; every operation builds fresh data
and never mutates its inputs.  Equality of objects, arrows and elements is
always by identifier, never structural.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError, SizeCapError, search_cap


# ---------------------------------------------------------------------------
# identifiers

def idkey(v):
    """Total-order key for identifiers (strings, ints, nested tuples)."""
    if isinstance(v, bool):
        return (1, int(v))
    if isinstance(v, str):
        return (0, v)
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(idkey(x) for x in v))
    if isinstance(v, frozenset):
        return (3, tuple(sorted(idkey(x) for x in v)))
    return (4, repr(v))


def sort_ids(ids) -> tuple:
    return tuple(sorted(ids, key=idkey))


def fmt_id(v) -> str:
    """Render an identifier for human-readable output."""
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        if len(v) == 2 and v[0] == "id":
            return f"id({fmt_id(v[1])})"
        return "(" + ",".join(fmt_id(x) for x in v) + ")"
    return repr(v)


# ---------------------------------------------------------------------------
# categories

@dataclass(frozen=True)
class FinCategory:
    """A finite category given by a total composition table.

    ``arrows`` maps each arrow id to ``(source, target)``; ``identity`` maps
    each object to its identity arrow; ``compose`` maps every composable pair
    ``(g, f)`` to ``g after f`` (identity rows included).
    """

    objects: tuple
    arrows: dict
    identity: dict
    compose: dict

    def src(self, a):
        return self.arrows[a][0]

    def tgt(self, a):
        return self.arrows[a][1]

    def id_of(self, x):
        return self.identity[x]

    def comp(self, g, f):
        return self.compose[(g, f)]

    @cached_property
    def _identity_set(self) -> frozenset:
        return frozenset(self.identity.values())

    def is_identity(self, a) -> bool:
        return a in self._identity_set

    @cached_property
    def hom_index(self) -> dict:
        idx: dict = {}
        for a, (s, t) in self.arrows.items():
            idx.setdefault((s, t), []).append(a)
        return {k: sort_ids(v) for k, v in idx.items()}

    def hom(self, x, y) -> tuple:
        return self.hom_index.get((x, y), ())

    def endos(self, x) -> tuple:
        return self.hom(x, x)

    @cached_property
    def arrows_sorted(self) -> tuple:
        return sort_ids(self.arrows)

    def nonidentity_arrows(self) -> tuple:
        return sort_ids(a for a in self.arrows if not self.is_identity(a))


def build_category(objects, arrows, compose=None, identity=None) -> FinCategory:
    """Assemble a category, materializing identities and their compositions.

    ``compose`` needs entries only for pairs of non-identity arrows; the
    identity rows and columns of the table are filled in here.
    """
    objects = sort_ids(objects)
    arrows = dict(arrows)
    if identity is None:
        identity = {}
        for x in objects:
            name = ("id", x)
            if name in arrows:
                raise DomainError(f"arrow name collision for identity of {fmt_id(x)}")
            identity[x] = name
    else:
        identity = dict(identity)
    for x, a in identity.items():
        arrows.setdefault(a, (x, x))
    table = dict(compose) if compose else {}
    for a, (s, t) in arrows.items():
        table[(a, identity[s])] = a
        table[(identity[t], a)] = a
    return FinCategory(objects, arrows, identity, table)


def validate_category(C: FinCategory) -> list[str]:
    """Check all category laws exhaustively; return the list of violations."""
    report: list[str] = []
    objset = set(C.objects)
    for x in C.objects:
        a = C.identity.get(x)
        if a is None:
            report.append(f"object {fmt_id(x)} has no identity arrow")
        elif a not in C.arrows:
            report.append(f"identity of {fmt_id(x)} is not an arrow")
        elif C.arrows[a] != (x, x):
            report.append(f"identity of {fmt_id(x)} has endpoints {C.arrows[a]}")
    for a, (s, t) in C.arrows.items():
        if s not in objset or t not in objset:
            report.append(f"arrow {fmt_id(a)} has unknown endpoint")
    for g in C.arrows:
        for f in C.arrows:
            if C.src(g) == C.tgt(f):
                if (g, f) not in C.compose:
                    report.append(
                        f"missing composite {fmt_id(g)} . {fmt_id(f)}")
            elif (g, f) in C.compose:
                report.append(
                    f"composite {fmt_id(g)} . {fmt_id(f)} of a non-composable pair")
    for (g, f), h in C.compose.items():
        if g not in C.arrows or f not in C.arrows:
            report.append(f"composite of unknown arrows {fmt_id(g)} . {fmt_id(f)}")
            continue
        if h not in C.arrows:
            report.append(f"composite {fmt_id(g)} . {fmt_id(f)} = {fmt_id(h)} is not an arrow")
            continue
        if C.src(g) != C.tgt(f):
            continue
        if C.arrows[h] != (C.src(f), C.tgt(g)):
            report.append(
                f"composite {fmt_id(g)} . {fmt_id(f)} has wrong endpoints")
    if report:
        return report
    for a in C.arrows:
        if C.compose.get((a, C.id_of(C.src(a)))) != a:
            report.append(f"right unit law fails at {fmt_id(a)}")
        if C.compose.get((C.id_of(C.tgt(a)), a)) != a:
            report.append(f"left unit law fails at {fmt_id(a)}")
    for f in C.arrows:
        for g in C.arrows:
            if C.src(g) != C.tgt(f):
                continue
            gf = C.compose[(g, f)]
            for h in C.arrows:
                if C.src(h) != C.tgt(g):
                    continue
                if C.compose[(C.compose[(h, g)], f)] != C.compose[(h, gf)]:
                    report.append(
                        "associativity fails at "
                        f"{fmt_id(h)} . {fmt_id(g)} . {fmt_id(f)}")
    return report


# ---------------------------------------------------------------------------
# stock categories

def one() -> FinCategory:
    """The terminal category: one object, identity only."""
    return build_category(("o",), {})


def interval() -> FinCategory:
    """The interval category: x -> y."""
    return build_category(("x", "y"), {"f": ("x", "y")})


def parallel_pair() -> FinCategory:
    """Two objects with a parallel pair of arrows u => v."""
    return build_category(("u", "v"), {"r": ("u", "v"), "s": ("u", "v")})


def idem_monoid() -> FinCategory:
    """The one-object monoid {1, e} with e idempotent."""
    return build_category(("s",), {"e": ("s", "s")}, {("e", "e"): "e"})


def cyclic_group(n: int) -> FinCategory:
    """The cyclic group of order n as a one-object category."""
    if n < 1:
        raise DomainError("group order must be positive")
    arrows = {f"r{k}": ("g", "g") for k in range(1, n)}
    names = {0: ("id", "g"), **{k: f"r{k}" for k in range(1, n)}}
    compose = {}
    for i in range(1, n):
        for j in range(1, n):
            compose[(names[i], names[j])] = names[(i + j) % n]
    return build_category(("g",), arrows, compose)


def monoid_category(elements, mult, unit) -> FinCategory:
    """One-object category from a monoid multiplication table.

    ``mult[(a, b)]`` is the product "a after b"; ``unit`` is the neutral
    element, which becomes the identity arrow.
    """
    obj = "m"
    arrows = {e: (obj, obj) for e in elements if e != unit}
    compose = {}
    for a in elements:
        for b in elements:
            if a != unit and b != unit:
                compose[(a, b)] = mult[(a, b)]
    return build_category((obj,), arrows, compose, identity={obj: unit})


def discrete_category(objects) -> FinCategory:
    return build_category(objects, {})


def poset_category(elements, leq) -> FinCategory:
    """Thin category from a reflexive transitive relation ``leq(x, y)``."""
    elements = sort_ids(elements)
    arrows = {}
    for x in elements:
        for y in elements:
            if x != y and leq(x, y):
                arrows[("le", x, y)] = (x, y)
    compose = {}
    for f, (x, y) in arrows.items():
        for g, (y2, z) in arrows.items():
            if y == y2:
                compose[(g, f)] = ("le", x, z)
    C = build_category(elements, arrows, compose)
    return C


# ---------------------------------------------------------------------------
# functors

@dataclass(frozen=True)
class FunctorData:
    """A functor between finite categories, as total object/arrow maps."""

    domain: FinCategory
    codomain: FinCategory
    object_map: dict
    arrow_map: dict

    def on_obj(self, x):
        return self.object_map[x]

    def on_arrow(self, a):
        return self.arrow_map[a]


def identity_functor(C: FinCategory) -> FunctorData:
    return FunctorData(C, C, {x: x for x in C.objects},
                       {a: a for a in C.arrows})


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    """``g`` after ``f``."""
    if f.codomain != g.domain:
        raise DomainError("functors not composable")
    return FunctorData(
        f.domain, g.codomain,
        {x: g.object_map[y] for x, y in f.object_map.items()},
        {a: g.arrow_map[b] for a, b in f.arrow_map.items()})


def validate_functor(F: FunctorData) -> list[str]:
    report: list[str] = []
    C, D = F.domain, F.codomain
    for x in C.objects:
        if x not in F.object_map:
            report.append(f"no image for object {fmt_id(x)}")
        elif F.object_map[x] not in set(D.objects):
            report.append(f"object image of {fmt_id(x)} not in codomain")
    for a, (s, t) in C.arrows.items():
        b = F.arrow_map.get(a)
        if b is None:
            report.append(f"no image for arrow {fmt_id(a)}")
            continue
        if b not in D.arrows:
            report.append(f"arrow image of {fmt_id(a)} not in codomain")
            continue
        if D.arrows[b] != (F.object_map.get(s), F.object_map.get(t)):
            report.append(f"arrow image of {fmt_id(a)} has wrong endpoints")
    if report:
        return report
    for x in C.objects:
        if F.arrow_map[C.id_of(x)] != D.id_of(F.object_map[x]):
            report.append(f"identity of {fmt_id(x)} not preserved")
    for (g, f), h in C.compose.items():
        if D.compose[(F.arrow_map[g], F.arrow_map[f])] != F.arrow_map[h]:
            report.append(
                f"composition {fmt_id(g)} . {fmt_id(f)} not preserved")
    return report


def freeze_functor(F: FunctorData) -> tuple:
    """Canonical hashable form of the underlying maps."""
    return (
        tuple(sorted(F.object_map.items(), key=lambda kv: idkey(kv[0]))),
        tuple(sorted(F.arrow_map.items(), key=lambda kv: idkey(kv[0]))),
    )


# ---------------------------------------------------------------------------
# categories over a base

@dataclass(frozen=True)
class OverCategory:
    """A category together with a projection functor to a base."""

    total: FinCategory
    base: FinCategory
    projection: FunctorData

    def proj_obj(self, a):
        return self.projection.object_map[a]

    def proj_arrow(self, u):
        return self.projection.arrow_map[u]

    @cached_property
    def objects_over(self) -> dict:
        idx: dict = {x: [] for x in self.base.objects}
        for a in self.total.objects:
            idx[self.proj_obj(a)].append(a)
        return {x: sort_ids(v) for x, v in idx.items()}

    @cached_property
    def arrows_over(self) -> dict:
        idx: dict = {f: [] for f in self.base.arrows}
        for u in self.total.arrows:
            idx[self.proj_arrow(u)].append(u)
        return {f: sort_ids(v) for f, v in idx.items()}

    @cached_property
    def arrow_index(self) -> dict:
        """(src, tgt, base arrow) -> arrows of the total category."""
        idx: dict = {}
        for u, (a, b) in self.total.arrows.items():
            idx.setdefault((a, b, self.proj_arrow(u)), []).append(u)
        return {k: sort_ids(v) for k, v in idx.items()}


def validate_over(p: OverCategory) -> list[str]:
    report = validate_category(p.total)
    report += validate_category(p.base)
    if report:
        return report
    if p.projection.domain != p.total or p.projection.codomain != p.base:
        report.append("projection endpoints do not match total/base")
        return report
    return validate_functor(p.projection)


def identity_over(X: FinCategory) -> OverCategory:
    return OverCategory(X, X, identity_functor(X))


def object_over(X: FinCategory, x) -> OverCategory:
    """The object x of the base as a one-object category over X."""
    if x not in set(X.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    T = build_category((x,), {})
    proj = FunctorData(T, X, {x: x}, {T.id_of(x): X.id_of(x)})
    return OverCategory(T, X, proj)


def arrow_over(X: FinCategory, f) -> OverCategory:
    """The arrow f of the base as the interval category over X."""
    if f not in X.arrows:
        raise DomainError(f"unknown arrow {fmt_id(f)}")
    T = interval()
    x, y = X.arrows[f]
    proj = FunctorData(T, X, {"x": x, "y": y},
                       {T.id_of("x"): X.id_of(x), T.id_of("y"): X.id_of(y),
                        "f": f})
    return OverCategory(T, X, proj)


# ---------------------------------------------------------------------------
# opposite, slices, pullbacks

def opposite(C: FinCategory) -> FinCategory:
    """Same objects and arrows with sources/targets and composition swapped."""
    arrows = {a: (t, s) for a, (s, t) in C.arrows.items()}
    compose = {(f, g): h for (g, f), h in C.compose.items()}
    return FinCategory(C.objects, arrows, dict(C.identity), compose)


def slice_over(C: FinCategory, x) -> OverCategory:
    """The slice C/x over C: objects are arrows into x."""
    if x not in set(C.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    objs = sort_ids(a for a in C.arrows if C.tgt(a) == x)
    arrows = {}
    for h in objs:
        for k in objs:
            for u in C.hom(C.src(h), C.src(k)):
                if C.comp(k, u) == h:
                    arrows[(h, u, k)] = (h, k)
    identity = {h: (h, C.id_of(C.src(h)), h) for h in objs}
    compose = {}
    for (h, u, k) in arrows:
        for (k2, v, l) in arrows:
            if k2 == k:
                compose[((k, v, l), (h, u, k))] = (h, C.comp(v, u), l)
    T = FinCategory(objs, arrows, identity, compose)
    proj = FunctorData(T, C, {h: C.src(h) for h in objs},
                       {a: a[1] for a in arrows})
    return OverCategory(T, C, proj)


def coslice_over(C: FinCategory, x) -> OverCategory:
    """The coslice x/C over C: objects are arrows out of x."""
    if x not in set(C.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    objs = sort_ids(a for a in C.arrows if C.src(a) == x)
    arrows = {}
    for h in objs:
        for k in objs:
            for u in C.hom(C.tgt(h), C.tgt(k)):
                if C.comp(u, h) == k:
                    arrows[(h, u, k)] = (h, k)
    identity = {h: (h, C.id_of(C.tgt(h)), h) for h in objs}
    compose = {}
    for (h, u, k) in arrows:
        for (k2, v, l) in arrows:
            if k2 == k:
                compose[((k, v, l), (h, u, k))] = (h, C.comp(v, u), l)
    T = FinCategory(objs, arrows, identity, compose)
    proj = FunctorData(T, C, {h: C.tgt(h) for h in objs},
                       {a: a[1] for a in arrows})
    return OverCategory(T, C, proj)


def pullback_total(f: FunctorData, g: FunctorData):
    """Pullback of two functors with common codomain.

    Returns the pullback category and the two projection functors.
    """
    if f.codomain != g.codomain:
        raise DomainError("pullback legs must share a codomain")
    C, D = f.domain, g.domain
    objs = sort_ids((a, b) for a in C.objects for b in D.objects
                    if f.object_map[a] == g.object_map[b])
    arrows = {}
    for u, (a, a2) in C.arrows.items():
        fu = f.arrow_map[u]
        for v, (b, b2) in D.arrows.items():
            if fu == g.arrow_map[v]:
                arrows[(u, v)] = ((a, b), (a2, b2))
    identity = {(a, b): (C.id_of(a), D.id_of(b)) for (a, b) in objs}
    compose = {}
    for (u1, v1), (s1, t1) in arrows.items():
        for (u2, v2), (s2, t2) in arrows.items():
            if t1 == s2:
                compose[((u2, v2), (u1, v1))] = (C.comp(u2, u1), D.comp(v2, v1))
    T = FinCategory(objs, arrows, identity, compose)
    left = FunctorData(T, C, {o: o[0] for o in objs}, {a: a[0] for a in arrows})
    right = FunctorData(T, D, {o: o[1] for o in objs}, {a: a[1] for a in arrows})
    return T, left, right


def product_over(p: OverCategory, q: OverCategory) -> OverCategory:
    """Binary product in the category of categories over a common base."""
    if p.base != q.base:
        raise DomainError("base mismatch")
    T, left, _right = pullback_total(p.projection, q.projection)
    proj = compose_functors(p.projection, left)
    return OverCategory(T, p.base, proj)


def product_projections(p: OverCategory, q: OverCategory):
    """The product over the base together with its two projections."""
    if p.base != q.base:
        raise DomainError("base mismatch")
    T, left, right = pullback_total(p.projection, q.projection)
    proj = compose_functors(p.projection, left)
    return OverCategory(T, p.base, proj), left, right


def fiber(p: OverCategory, x) -> FinCategory:
    """The fiber of p over an object: everything sitting over x and id_x."""
    if x not in set(p.base.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    objs = p.objects_over[x]
    idx = p.base.id_of(x)
    arrows = {u: p.total.arrows[u] for u in p.arrows_over[idx]}
    identity = {a: p.total.id_of(a) for a in objs}
    compose = {}
    for u in arrows:
        for v in arrows:
            if p.total.tgt(u) == p.total.src(v):
                compose[(v, u)] = p.total.comp(v, u)
    return FinCategory(objs, arrows, identity, compose)


def fiber_arrow(p: OverCategory, f) -> OverCategory:
    """The fiber of p over an arrow, as a category over the interval."""
    if f not in p.base.arrows:
        raise DomainError(f"unknown arrow {fmt_id(f)}")
    cls = arrow_over(p.base, f)
    T, _left, right = pullback_total(p.projection, cls.projection)
    return OverCategory(T, cls.total, right)


# ---------------------------------------------------------------------------
# quotients by arrow congruences

def quotient_category(C: FinCategory, pairs) -> FinCategory:
    """Quotient of C by the congruence generated by parallel arrow pairs."""
    parent = {a: a for a in C.arrows}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = [tuple(p) for p in pairs]
    for a, b in queue:
        if C.arrows[a] != C.arrows[b]:
            raise DomainError("congruence pairs must be parallel arrows")
    while queue:
        a, b = queue.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[rb] = ra
        for c in C.arrows:
            if C.src(c) == C.tgt(a):
                queue.append((C.comp(c, a), C.comp(c, b)))
            if C.tgt(c) == C.src(a):
                queue.append((C.comp(a, c), C.comp(b, c)))
    classes: dict = {}
    for a in C.arrows:
        classes.setdefault(find(a), []).append(a)
    rep = {r: min(members, key=idkey) for r, members in classes.items()}
    cls_of = {a: rep[find(a)] for a in C.arrows}
    arrows = {r: C.arrows[next(iter(m))]
              for r, m in ((rep[k], v) for k, v in classes.items())}
    identity = {x: cls_of[C.id_of(x)] for x in C.objects}
    compose = {}
    for r in arrows:
        for s in arrows:
            if C.src(r) == C.tgt(s):
                compose[(r, s)] = cls_of[C.comp(r, s)]
    return FinCategory(C.objects, arrows, identity, compose)


# ---------------------------------------------------------------------------
# functor enumeration

def functor_search(C: FinCategory, D: FinCategory, obj_cands, arr_cands,
                   cap: int | None = None) -> list[FunctorData]:
    """All functors C -> D with images drawn from the given candidate maps.

    ``obj_cands(x)`` yields candidate D-objects for x; ``arr_cands(a, px, py)``
    yields candidate D-arrows for ``a: x -> y`` once endpoint images are
    fixed.  Backtracking over objects with candidate-set propagation, then
    over arrows with composition checking.  Deterministic output order; the
    total node count is capped.
    """
    cap = search_cap() if cap is None else cap
    counter = [0]

    def tick():
        counter[0] += 1
        if counter[0] > cap:
            raise SizeCapError("functor enumeration exceeded the search cap")

    objs = list(C.objects)
    nonid = list(C.nonidentity_arrows())
    nonid_set = set(nonid)
    cons = [(a, C.src(a), C.tgt(a)) for a in nonid]

    compat_memo: dict = {}

    def compat(a, P, Q):
        k = (a, P, Q)
        r = compat_memo.get(k)
        if r is None:
            r = len(arr_cands(a, P, Q)) > 0
            compat_memo[k] = r
        return r

    eqs = [(g, f, h) for (g, f), h in C.compose.items()
           if g in nonid_set and f in nonid_set]
    arr_order = sorted(nonid, key=idkey)
    pos = {a: i for i, a in enumerate(arr_order)}
    eqs_at: dict = {i: [] for i in range(len(arr_order))}
    for g, f, h in eqs:
        ready = max(pos[a] for a in (g, f, h) if a in pos)
        eqs_at[ready].append((g, f, h))

    results: list[FunctorData] = []

    def assign_arrows(objmap):
        arrmap = {C.id_of(x): D.id_of(objmap[x]) for x in objs}

        def rec(i):
            if i == len(arr_order):
                results.append(FunctorData(C, D, dict(objmap), dict(arrmap)))
                return
            a = arr_order[i]
            x, y = C.arrows[a]
            for v in arr_cands(a, objmap[x], objmap[y]):
                tick()
                arrmap[a] = v
                ok = True
                for g, f, h in eqs_at[i]:
                    if D.compose[(arrmap[g], arrmap[f])] != arrmap[h]:
                        ok = False
                        break
                if ok:
                    rec(i + 1)
                del arrmap[a]

        rec(0)

    def propagate(domains) -> bool:
        while True:
            changed = False
            for a, x, y in cons:
                tick()
                if x == y:
                    nd = tuple(P for P in domains[x] if compat(a, P, P))
                    if len(nd) != len(domains[x]):
                        domains[x] = nd
                        changed = True
                else:
                    dy = domains[y]
                    nd = tuple(P for P in domains[x]
                               if any(compat(a, P, Q) for Q in dy))
                    if len(nd) != len(domains[x]):
                        domains[x] = nd
                        changed = True
                    dx = domains[x]
                    nd2 = tuple(Q for Q in dy
                                if any(compat(a, P, Q) for P in dx))
                    if len(nd2) != len(dy):
                        domains[y] = nd2
                        changed = True
            if not changed:
                return all(domains[x] for x in objs)

    def solve(domains):
        if not propagate(domains):
            return
        open_vars = [x for x in objs if len(domains[x]) > 1]
        if not open_vars:
            assign_arrows({x: domains[x][0] for x in objs})
            return
        var = min(open_vars, key=lambda x: (len(domains[x]), idkey(x)))
        for val in domains[var]:
            tick()
            nd = dict(domains)
            nd[var] = (val,)
            solve(nd)

    solve({x: sort_ids(obj_cands(x)) for x in objs})
    return results


def enumerate_functors(C: FinCategory, D: FinCategory,
                       cap: int | None = None) -> list[FunctorData]:
    """Exactly the functors C -> D, in deterministic order."""
    return functor_search(
        C, D,
        lambda x: D.objects,
        lambda a, P, Q: D.hom(P, Q),
        cap=cap)

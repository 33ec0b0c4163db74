"""The over-a-base toolbox: components, sections, hom and tensor.

Components are computed by union-find over the objects of a total category;
class identifiers are the minimum object identifier in each class, so all
outputs are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .fincat import (FinCategory, FunctorData, OverCategory, fmt_id,
                     functor_search, identity_over, idkey, product_over,
                     sort_ids)
from .setfun import CONTRA, COV, SetFunctor


class UnionFind:
    """Union-find with path compression over arbitrary hashable keys."""

    def __init__(self, keys=()):
        self.parent = {k: k for k in keys}

    def add(self, k):
        self.parent.setdefault(k, k)

    def find(self, k):
        p = self.parent
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> dict:
        """root -> sorted tuple of members."""
        out: dict = {}
        for k in self.parent:
            out.setdefault(self.find(k), []).append(k)
        return {r: sort_ids(v) for r, v in out.items()}


@dataclass(frozen=True)
class ComponentsResult:
    """Zigzag-connectedness classes of a total category or graph."""

    classes: tuple
    class_of: dict

    def __len__(self):
        return len(self.classes)


def _components_of(objects, edges) -> ComponentsResult:
    uf = UnionFind(objects)
    for a, b in edges:
        uf.union(a, b)
    members = uf.classes()
    rep = {root: mem[0] for root, mem in members.items()}
    class_of = {o: rep[uf.find(o)] for o in objects}
    return ComponentsResult(sort_ids(rep.values()), class_of)


def components(p) -> ComponentsResult:
    """Connected components of a category or of a category over a base."""
    C = p.total if isinstance(p, OverCategory) else p
    return _components_of(
        C.objects, ((C.src(a), C.tgt(a)) for a in C.arrows))


def sections(p: OverCategory) -> list[FunctorData]:
    """All functorial sections of the projection."""
    return hom_over(identity_over(p.base), p)


def hom_over(p: OverCategory, q: OverCategory,
             cap: int | None = None) -> list[FunctorData]:
    """Functors between the total categories commuting with the projections."""
    if p.base != q.base:
        raise DomainError("base mismatch")
    obj_idx = q.objects_over
    arr_idx = q.arrow_index

    return functor_search(
        p.total, q.total,
        lambda a: obj_idx[p.proj_obj(a)],
        lambda u, A, B: arr_idx.get((A, B, p.proj_arrow(u)), ()),
        cap=cap)


def ten(p: OverCategory, q: OverCategory) -> ComponentsResult:
    """Components of the product over the base."""
    if p.base != q.base:
        raise DomainError("base mismatch")
    return components(product_over(p, q))


def tensor_product_classical(A: SetFunctor, D: SetFunctor) -> ComponentsResult:
    """Coequalizer form of the tensor product of a presheaf with a copresheaf.

    Quotient of the tagged pairs (x, a, d) by the relation identifying
    (x, af, d) with (y, a, fd) for every f: x -> y.  Serves as the
    independent oracle for ``ten`` on df/dof pairs.
    """
    if A.base != D.base:
        raise DomainError("base mismatch")
    if A.variance != CONTRA or D.variance != COV:
        raise DomainError("expected a presheaf and a copresheaf")
    X = A.base
    tags = [(x, a, d) for x in X.objects
            for a in A.fibers[x] for d in D.fibers[x]]
    uf = UnionFind(tags)
    for f, (x, y) in X.arrows.items():
        Af, Df = A.actions[f], D.actions[f]
        for a in A.fibers[y]:
            for d in D.fibers[x]:
                uf.union((x, Af[a], d), (y, a, Df[d]))
    members = uf.classes()
    rep = {root: mem[0] for root, mem in members.items()}
    class_of = {t: rep[uf.find(t)] for t in tags}
    return ComponentsResult(sort_ids(rep.values()), class_of)


def over_isomorphism(p: OverCategory, q: OverCategory):
    """An isomorphism of categories over the base, or None."""
    if p.base != q.base:
        return None
    if len(p.total.objects) != len(q.total.objects) or \
            len(p.total.arrows) != len(q.total.arrows):
        return None
    for F in hom_over(p, q):
        if len(set(F.object_map.values())) == len(p.total.objects) and \
                len(set(F.arrow_map.values())) == len(p.total.arrows):
            return F
    return None


def overs_isomorphic(p: OverCategory, q: OverCategory) -> bool:
    return over_isomorphism(p, q) is not None


def discrete_object(S, X: FinCategory) -> OverCategory:
    """The discrete object on the set S: the projection S x X -> X."""
    S = sort_ids(S)
    objs = sort_ids((s, x) for s in S for x in X.objects)
    arrows = {(s, f): ((s, X.src(f)), (s, X.tgt(f)))
              for s in S for f in X.arrows}
    identity = {(s, x): (s, X.id_of(x)) for (s, x) in objs}
    compose = {}
    for s in S:
        for (g, f), h in X.compose.items():
            compose[((s, g), (s, f))] = (s, h)
    T = FinCategory(objs, arrows, identity, compose)
    proj = FunctorData(T, X, {(s, x): x for (s, x) in objs},
                       {(s, f): f for (s, f) in arrows})
    return OverCategory(T, X, proj)

"""Base change along a functor and the induced Kan extensions.

Pushforward composes with the functor; pullback is the categorical pullback
(it preserves discrete (op)fibrations).  The left extension is the dof
reflection of the pushforward; the right extension is computed fiberwise
from morphisms out of pulled-back coslices.
"""
from __future__ import annotations

from .errors import DomainError
from .fincat import (FinCategory, FunctorData, OverCategory, compose_functors,
                     coslice_over, freeze_functor, pullback_total, sort_ids)
from .overbase import hom_over
from .reflect import colimit_in_base, reflect_dof
from .setfun import COV, SetFunctor, elements

# A base change is just the functor along which extension happens.
BaseChange = FunctorData


def pushforward(f: FunctorData, p: OverCategory) -> OverCategory:
    """Same total category, projection composed with f."""
    if p.base != f.domain:
        raise DomainError("base mismatch")
    return OverCategory(p.total, f.codomain,
                        compose_functors(f, p.projection))


def pullback_along(f: FunctorData, q: OverCategory) -> OverCategory:
    """Pullback of a category over the codomain to one over the domain."""
    if q.base != f.codomain:
        raise DomainError("base mismatch")
    T, left, _right = pullback_total(f, q.projection)
    # objects of T are pairs (x, b); the projection is the first leg
    X = f.domain
    proj = FunctorData(T, X, dict(left.object_map), dict(left.arrow_map))
    return OverCategory(T, X, proj)


def check_frobenius(f: FunctorData, p: OverCategory, q: OverCategory) -> bool:
    """Whether the canonical comparison from the pushforward of the product
    with the pullback to the product with the pushforward is an isomorphism
    of categories over the codomain."""
    from .fincat import product_over
    if p.base != f.domain or q.base != f.codomain:
        raise DomainError("base mismatch")
    lhs = pushforward(f, product_over(p, pullback_along(f, q)))
    rhs = product_over(pushforward(f, p), q)
    # lhs objects: (a, (x, b));  rhs objects: (a, b)
    obj_map = {}
    for (a, (x, b)) in lhs.total.objects:
        obj_map[(a, (x, b))] = (a, b)
    arr_map = {}
    for (u, (w, v)) in lhs.total.arrows:
        arr_map[(u, (w, v))] = (u, v)
    comp = FunctorData(lhs.total, rhs.total, obj_map, arr_map)
    from .fincat import validate_functor
    if validate_functor(comp):
        return False
    if compose_functors(rhs.projection, comp).object_map != \
            lhs.projection.object_map:
        return False
    if compose_functors(rhs.projection, comp).arrow_map != \
            lhs.projection.arrow_map:
        return False
    objs_hit = set(obj_map.values())
    arrs_hit = set(arr_map.values())
    return (len(objs_hit) == len(obj_map) == len(rhs.total.objects)
            and len(arrs_hit) == len(arr_map) == len(rhs.total.arrows))


def lan(f: FunctorData, D: SetFunctor) -> SetFunctor:
    """Left Kan extension of a covariant set functor along f: the dof
    reflection of the pushforward of its elements."""
    if D.base != f.domain or D.variance != COV:
        raise DomainError("expected a copresheaf on the domain of f")
    return reflect_dof(pushforward(f, elements(D))).functor


def ran(f: FunctorData, D: SetFunctor, cap: int | None = None) -> SetFunctor:
    """Right Kan extension of a covariant set functor along f.

    The fiber at y collects the morphisms over the domain from the pulled
    back coslice under y into the elements of D; the action precomposes.
    """
    if D.base != f.domain or D.variance != COV:
        raise DomainError("expected a copresheaf on the domain of f")
    Y = f.codomain
    el_d = elements(D)
    pbs = {y: pullback_along(f, coslice_over(Y, y)) for y in Y.objects}
    by_freeze = {}
    fibers = {}
    for y in Y.objects:
        xs = hom_over(pbs[y], el_d, cap=cap)
        frz = {freeze_functor(s): s for s in xs}
        by_freeze[y] = frz
        fibers[y] = sort_ids(frz)
    actions = {}
    for g, (y, y2) in Y.arrows.items():
        # induced functor between the pulled-back coslices: (x, h) -> (x, hg)
        ind_obj = {}
        for (x, h) in pbs[y2].total.objects:
            ind_obj[(x, h)] = (x, Y.comp(h, g))
        ind_arr = {}
        for (u, (h, w, k)) in pbs[y2].total.arrows:
            ind_arr[(u, (h, w, k))] = (u, (Y.comp(h, g), w, Y.comp(k, g)))
        ind = FunctorData(pbs[y2].total, pbs[y].total, ind_obj, ind_arr)
        act = {}
        for key in fibers[y]:
            xi = by_freeze[y][key]
            act[key] = freeze_functor(compose_functors(xi, ind))
            assert act[key] in by_freeze[y2]
        actions[g] = act
    return SetFunctor(Y, COV, fibers, actions)


def weighted_colimit(A: SetFunctor, f: FunctorData):
    """Colimit of f weighted by the presheaf A: the colimit in the codomain
    of the pushforward of the elements of A.  None when not representable."""
    if A.base != f.domain:
        raise DomainError("base mismatch")
    return colimit_in_base(pushforward(f, elements(A)))

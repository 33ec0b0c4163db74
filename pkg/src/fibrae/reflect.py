"""Reflections and coreflections of categories over a base into discrete
(op)fibrations, with the induced limit/colimit machinery.

The reflection into dofs has fibers given by the components of the slice
products, with unit sending an object to the class of its identity pair; the
coreflection has fibers given by hom from coslices, with counit evaluating
at the identity.  Everything else here (limits, colimits, initiality,
absoluteness) is derived from those two constructions.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .fincat import (FinCategory, FunctorData, OverCategory, compose_functors,
                     coslice_over, fmt_id, freeze_functor, idkey,
                     product_over, slice_over, sort_ids, validate_functor)
from .overbase import ComponentsResult, components, hom_over, sections
from .setfun import (CONTRA, COV, SetFunctor, corepresentable, elements,
                     representable, setfunctor_isomorphism)


@dataclass(frozen=True)
class ReflectionResult:
    """A reflection as set-functor data plus its universal unit."""

    functor: SetFunctor
    unit: FunctorData


@dataclass(frozen=True)
class CoreflectionResult:
    """A coreflection as set-functor data plus its universal counit."""

    functor: SetFunctor
    counit: FunctorData


def _check_morphism_over(F: FunctorData, p: OverCategory, q: OverCategory):
    assert not validate_functor(F), validate_functor(F)
    assert compose_functors(q.projection, F).object_map == \
        p.projection.object_map
    assert compose_functors(q.projection, F).arrow_map == \
        p.projection.arrow_map


# ---------------------------------------------------------------------------
# reflections

def reflect_dof(p: OverCategory) -> ReflectionResult:
    """Universal discrete opfibration under p.

    The fiber over x is the set of components of the product of p with the
    slice over x; the action along f postcomposes the slice leg.
    """
    X = p.base
    comps = {}
    fibers = {}
    for x in X.objects:
        c = components(product_over(p, slice_over(X, x)))
        comps[x] = c
        fibers[x] = c.classes
    actions = {}
    for f, (x, y) in X.arrows.items():
        act = {}
        for cls in fibers[x]:
            a, h = cls
            act[cls] = comps[y].class_of[(a, X.comp(f, h))]
        actions[f] = act
    functor = SetFunctor(X, COV, fibers, actions)

    el = elements(functor)
    obj_map = {}
    for a in p.total.objects:
        x = p.proj_obj(a)
        obj_map[a] = (x, comps[x].class_of[(a, X.id_of(x))])
    arr_map = {}
    for u, (a, b) in p.total.arrows.items():
        f = p.proj_arrow(u)
        arr_map[u] = (f, obj_map[a][1])
    unit = FunctorData(p.total, el.total, obj_map, arr_map)
    if __debug__:
        _check_morphism_over(unit, p, el)
    return ReflectionResult(functor, unit)


def reflect_df(p: OverCategory) -> ReflectionResult:
    """Universal discrete fibration under p; dual of ``reflect_dof`` via
    coslices, with the action precomposing the coslice leg."""
    X = p.base
    comps = {}
    fibers = {}
    for x in X.objects:
        c = components(product_over(p, coslice_over(X, x)))
        comps[x] = c
        fibers[x] = c.classes
    actions = {}
    for f, (x, y) in X.arrows.items():
        act = {}
        for cls in fibers[y]:
            a, h = cls
            act[cls] = comps[x].class_of[(a, X.comp(h, f))]
        actions[f] = act
    functor = SetFunctor(X, CONTRA, fibers, actions)

    el = elements(functor)
    obj_map = {}
    for a in p.total.objects:
        x = p.proj_obj(a)
        obj_map[a] = (x, comps[x].class_of[(a, X.id_of(x))])
    arr_map = {}
    for u, (a, b) in p.total.arrows.items():
        f = p.proj_arrow(u)
        arr_map[u] = (f, obj_map[b][1])
    unit = FunctorData(p.total, el.total, obj_map, arr_map)
    if __debug__:
        _check_morphism_over(unit, p, el)
    return ReflectionResult(functor, unit)


# ---------------------------------------------------------------------------
# coreflections

def _precompose_coslice(X: FinCategory, f) -> FunctorData:
    """coslice(y) -> coslice(x) induced by f: x -> y by precomposition."""
    x, y = X.arrows[f]
    cy = coslice_over(X, y).total
    cx = coslice_over(X, x).total
    return FunctorData(
        cy, cx,
        {h: X.comp(h, f) for h in cy.objects},
        {(h, u, k): (X.comp(h, f), u, X.comp(k, f)) for (h, u, k) in cy.arrows})


def _postcompose_slice(X: FinCategory, f) -> FunctorData:
    """slice(x) -> slice(y) induced by f: x -> y by postcomposition."""
    x, y = X.arrows[f]
    sx = slice_over(X, x).total
    sy = slice_over(X, y).total
    return FunctorData(
        sx, sy,
        {h: X.comp(f, h) for h in sx.objects},
        {(h, u, k): (X.comp(f, h), u, X.comp(f, k)) for (h, u, k) in sx.arrows})


def coreflect_dof(p: OverCategory) -> CoreflectionResult:
    """Universal discrete opfibration over p: fibers are the morphisms from
    coslices into p, acted on by precomposition."""
    X = p.base
    fibers = {}
    by_freeze = {}
    for x in X.objects:
        xs = hom_over(coslice_over(X, x), p)
        frz = {freeze_functor(s): s for s in xs}
        by_freeze[x] = frz
        fibers[x] = sort_ids(frz)
    actions = {}
    for f, (x, y) in X.arrows.items():
        pre = _precompose_coslice(X, f)
        act = {}
        for key in fibers[x]:
            xi = by_freeze[x][key]
            act[key] = freeze_functor(compose_functors(xi, pre))
            assert act[key] in by_freeze[y]
        actions[f] = act
    functor = SetFunctor(X, COV, fibers, actions)

    el = elements(functor)
    obj_map = {}
    for (x, key) in el.total.objects:
        xi = by_freeze[x][key]
        obj_map[(x, key)] = xi.object_map[X.id_of(x)]
    arr_map = {}
    for (f, key) in el.total.arrows:
        x, y = X.arrows[f]
        xi = by_freeze[x][key]
        arr_map[(f, key)] = xi.arrow_map[(X.id_of(x), f, f)]
    counit = FunctorData(el.total, p.total, obj_map, arr_map)
    if __debug__:
        _check_morphism_over(counit, el, p)
    return CoreflectionResult(functor, counit)


def coreflect_df(p: OverCategory) -> CoreflectionResult:
    """Universal discrete fibration over p: fibers are the morphisms from
    slices into p, acted on by postcomposition."""
    X = p.base
    fibers = {}
    by_freeze = {}
    for x in X.objects:
        xs = hom_over(slice_over(X, x), p)
        frz = {freeze_functor(s): s for s in xs}
        by_freeze[x] = frz
        fibers[x] = sort_ids(frz)
    actions = {}
    for f, (x, y) in X.arrows.items():
        post = _postcompose_slice(X, f)
        act = {}
        for key in fibers[y]:
            xi = by_freeze[y][key]
            act[key] = freeze_functor(compose_functors(xi, post))
            assert act[key] in by_freeze[x]
        actions[f] = act
    functor = SetFunctor(X, CONTRA, fibers, actions)

    el = elements(functor)
    obj_map = {}
    for (x, key) in el.total.objects:
        xi = by_freeze[x][key]
        obj_map[(x, key)] = xi.object_map[X.id_of(x)]
    arr_map = {}
    for (f, key) in el.total.arrows:
        x, y = X.arrows[f]
        xi = by_freeze[y][key]
        arr_map[(f, key)] = xi.arrow_map[(f, f, X.id_of(y))]
    counit = FunctorData(el.total, p.total, obj_map, arr_map)
    if __debug__:
        _check_morphism_over(counit, el, p)
    return CoreflectionResult(functor, counit)


# ---------------------------------------------------------------------------
# universality

def verify_reflection_universal(p: OverCategory, D: SetFunctor,
                                cap: int | None = None) -> bool:
    """Every morphism from p to the elements of D factors uniquely through
    the unit of the dof reflection; checked by full enumeration."""
    if D.base != p.base or D.variance != COV:
        raise DomainError("expected a copresheaf on the same base")
    refl = reflect_dof(p)
    el_r = elements(refl.functor)
    el_d = elements(D)
    morphs = hom_over(p, el_d, cap=cap)
    lifts = hom_over(el_r, el_d, cap=cap)
    for phi in morphs:
        n = sum(1 for psi in lifts
                if compose_functors(psi, refl.unit).object_map == phi.object_map
                and compose_functors(psi, refl.unit).arrow_map == phi.arrow_map)
        if n != 1:
            return False
    return True


def verify_coreflection_universal(p: OverCategory, D: SetFunctor,
                                  cap: int | None = None) -> bool:
    """Every morphism from the elements of D to p factors uniquely through
    the counit of the dof coreflection."""
    if D.base != p.base or D.variance != COV:
        raise DomainError("expected a copresheaf on the same base")
    corefl = coreflect_dof(p)
    el_c = elements(corefl.functor)
    el_d = elements(D)
    morphs = hom_over(el_d, p, cap=cap)
    lifts = hom_over(el_d, el_c, cap=cap)
    for phi in morphs:
        n = sum(1 for psi in lifts
                if compose_functors(corefl.counit, psi).object_map == phi.object_map
                and compose_functors(corefl.counit, psi).arrow_map == phi.arrow_map)
        if n != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# limits and colimits of set functors

def limit_setfunctor(A: SetFunctor) -> list[dict]:
    """Compatible families, computed as the sections of the elements."""
    fams = []
    for s in sections(elements(A)):
        fams.append({x: s.object_map[x][1] for x in A.base.objects})
    return sorted(fams, key=lambda d: idkey(sort_ids(d.items())))


def colimit_setfunctor(A: SetFunctor) -> ComponentsResult:
    """Classes of the components of the elements."""
    return components(elements(A))


# ---------------------------------------------------------------------------
# (co)limits in the base and absoluteness

def _cone_to_slice(p: OverCategory, refl: ReflectionResult, x, iso) -> FunctorData:
    """Assemble the universal cone p -> X/x from the unit and a representing
    isomorphism of the df reflection."""
    X = p.base
    sl = slice_over(X, x).total
    obj_map = {}
    for a in p.total.objects:
        z, cls = refl.unit.object_map[a]
        obj_map[a] = iso[z][cls]
    arr_map = {}
    for u, (a, b) in p.total.arrows.items():
        f = p.proj_arrow(u)
        arr_map[u] = (obj_map[a], f, obj_map[b])
        assert arr_map[u] in sl.arrows
    return FunctorData(p.total, sl, obj_map, arr_map)


def colimit_in_base(p: OverCategory):
    """Representing object of the df reflection, with its universal cone;
    None when no object represents it."""
    X = p.base
    refl = reflect_df(p)
    for x in X.objects:
        iso = setfunctor_isomorphism(refl.functor, representable(X, x))
        if iso is not None:
            return x, _cone_to_slice(p, refl, x, iso)
    return None


def _cone_to_coslice(p: OverCategory, refl: ReflectionResult, x, iso) -> FunctorData:
    X = p.base
    cs = coslice_over(X, x).total
    obj_map = {}
    for a in p.total.objects:
        z, cls = refl.unit.object_map[a]
        obj_map[a] = iso[z][cls]
    arr_map = {}
    for u, (a, b) in p.total.arrows.items():
        f = p.proj_arrow(u)
        arr_map[u] = (obj_map[a], f, obj_map[b])
        assert arr_map[u] in cs.arrows
    return FunctorData(p.total, cs, obj_map, arr_map)


def limit_in_base(p: OverCategory):
    """Representing object of the dof reflection, with its universal cone."""
    X = p.base
    refl = reflect_dof(p)
    for x in X.objects:
        iso = setfunctor_isomorphism(refl.functor, corepresentable(X, x))
        if iso is not None:
            return x, _cone_to_coslice(p, refl, x, iso)
    return None


def is_initial_functor(p: OverCategory) -> bool:
    """Every fiber of the dof reflection is a singleton."""
    refl = reflect_dof(p)
    return all(len(refl.functor.fibers[x]) == 1 for x in p.base.objects)


def absolute_colimit(p: OverCategory):
    """Object representing the df reflection, or None."""
    found = colimit_in_base(p)
    return found[0] if found else None


def absolute_limit(p: OverCategory):
    found = limit_in_base(p)
    return found[0] if found else None


def _is_retract(A: SetFunctor, B: SetFunctor) -> bool:
    """Whether A is a retract of B in the functor category."""
    from .setfun import nat_transformations
    incl = nat_transformations(A, B)
    retr = nat_transformations(B, A)
    for i in incl:
        for r in retr:
            if all(r[x][i[x][a]] == a for x in A.base.objects
                   for a in A.fibers[x]):
                return True
    return False


def weak_absolute_colimit(p: OverCategory):
    """Object x whose representable is retracted onto by the df reflection."""
    refl = reflect_df(p).functor
    for x in p.base.objects:
        if _is_retract(refl, representable(p.base, x)):
            return x
    return None


def weak_absolute_limit(p: OverCategory):
    refl = reflect_dof(p).functor
    for x in p.base.objects:
        if _is_retract(refl, corepresentable(p.base, x)):
            return x
    return None

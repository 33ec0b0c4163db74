"""Idempotents, atoms, their reflections, and the Karoubi envelope."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, FibraeError
from .fincat import (FinCategory, FunctorData, OverCategory, fmt_id,
                     idem_monoid, idkey, sort_ids)
from .overbase import hom_over, ten
from .setfun import (CONTRA, COV, SetFunctor, corepresentable, elements,
                     make_setfunctor, nat_transformations, representable,
                     setfunctor_isomorphism)


@dataclass(frozen=True)
class Idempotent:
    carrier: object
    arrow: object


def idempotents(X: FinCategory) -> list[Idempotent]:
    """All arrows e with e . e = e, identities included."""
    out = []
    for a in sort_ids(X.arrows):
        s, t = X.arrows[a]
        if s == t and X.comp(a, a) == a:
            out.append(Idempotent(s, a))
    return out


def split_idempotent(X: FinCategory, e: Idempotent):
    """A retraction/section pair (r, i) with i . r = e and r . i = id, found
    by exhaustive search; None when e does not split."""
    if X.comp(e.arrow, e.arrow) != e.arrow:
        raise DomainError(f"{fmt_id(e.arrow)} is not idempotent")
    x = e.carrier
    for y in X.objects:
        for r in X.hom(x, y):
            for i in X.hom(y, x):
                if X.comp(i, r) == e.arrow and X.comp(r, i) == X.id_of(y):
                    return r, i
    return None


def classifying_idempotent(X: FinCategory, e: Idempotent) -> OverCategory:
    """The idempotent monoid over X, classifying e."""
    T = idem_monoid()
    proj = FunctorData(T, X, {"s": e.carrier},
                       {T.id_of("s"): X.id_of(e.carrier), "e": e.arrow})
    return OverCategory(T, X, proj)


def idempotent_presheaf(X: FinCategory, e: Idempotent) -> SetFunctor:
    """The subfunctor of the representable at the carrier given by the
    arrows fixed under postcomposition with e."""
    x0 = e.carrier
    fibers = {z: sort_ids(g for g in X.hom(z, x0)
                          if X.comp(e.arrow, g) == g)
              for z in X.objects}
    actions = {f: {g: X.comp(g, f) for g in fibers[X.tgt(f)]}
               for f in X.arrows}
    return make_setfunctor(X, CONTRA, fibers, actions)


def idempotent_copresheaf(X: FinCategory, e: Idempotent) -> SetFunctor:
    """Dual: arrows out of the carrier fixed under precomposition with e."""
    x0 = e.carrier
    fibers = {z: sort_ids(g for g in X.hom(x0, z)
                          if X.comp(g, e.arrow) == g)
              for z in X.objects}
    actions = {f: {g: X.comp(f, g) for g in fibers[X.src(f)]}
               for f in X.arrows}
    return make_setfunctor(X, COV, fibers, actions)


def reflect_idempotent(X: FinCategory, e: Idempotent) -> SetFunctor:
    """The df reflection of the classified idempotent, as a presheaf."""
    return idempotent_presheaf(X, e)


def fix_of_action(D: SetFunctor, e: Idempotent) -> tuple:
    """Fixed points of the action of an idempotent arrow on its fiber."""
    act = D.actions[e.arrow]
    return sort_ids(d for d in D.fibers[e.carrier] if act[d] == d)


def is_atom(p: OverCategory) -> bool:
    """Whether both reflections of p are those of a single idempotent.

    Uses the idempotent characterization as the primary (finite) test and
    cross-checks tensor/hom agreement against all representables.
    """
    from .reflect import reflect_df, reflect_dof
    X = p.base
    A = reflect_df(p).functor
    D = reflect_dof(p).functor
    witness = None
    for e in idempotents(X):
        if setfunctor_isomorphism(A, idempotent_presheaf(X, e)) is not None \
                and setfunctor_isomorphism(D, idempotent_copresheaf(X, e)) is not None:
            witness = e
            break
    if witness is None:
        return False
    from .fincat import coslice_over, slice_over
    for x in X.objects:
        for rep in (slice_over(X, x), coslice_over(X, x)):
            if len(ten(p, rep)) != len(hom_over(p, rep)):
                raise FibraeError("atom cross-check failed; internal error")
    return True


def karoubi_envelope(X: FinCategory):
    """The category of idempotents with two-sidedly fixed arrows, plus the
    full and faithful embedding of X."""
    es = [e.arrow for e in idempotents(X)]
    carrier = {e.arrow: e.carrier for e in idempotents(X)}
    arrows = {}
    for e in es:
        for e2 in es:
            for g in X.hom(carrier[e], carrier[e2]):
                if X.comp(g, e) == g and X.comp(e2, g) == g:
                    arrows[(e, g, e2)] = (e, e2)
    identity = {e: (e, e, e) for e in es}
    compose = {}
    for (e, g, e2) in arrows:
        for (e2b, h, e3) in arrows:
            if e2b == e2:
                compose[((e2, h, e3), (e, g, e2))] = (e, X.comp(h, g), e3)
    env = FinCategory(sort_ids(es), arrows, identity, compose)
    embedding = FunctorData(
        X, env,
        {x: X.id_of(x) for x in X.objects},
        {f: (X.id_of(X.src(f)), f, X.id_of(X.tgt(f))) for f in X.arrows})
    return env, embedding


def retract_of_representable(A: SetFunctor):
    """Exhibit A as a retract of a representable, when possible.

    Returns (carrier, idempotent, (section, retraction)) where the section
    and retraction are natural transformations composing to the identity of
    A; None when no idempotent matches.
    """
    if A.variance != CONTRA:
        raise DomainError("expected a presheaf")
    X = A.base
    for e in idempotents(X):
        iso = setfunctor_isomorphism(A, idempotent_presheaf(X, e))
        if iso is None:
            continue
        x0 = e.carrier
        inv = {z: {v: k for k, v in iso[z].items()} for z in X.objects}
        section = {z: dict(iso[z]) for z in X.objects}
        retraction = {z: {g: inv[z][X.comp(e.arrow, g)]
                          for g in X.hom(z, x0)}
                      for z in X.objects}
        return x0, e, (section, retraction)
    return None

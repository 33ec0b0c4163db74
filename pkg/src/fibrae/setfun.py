"""Set-valued functors and their interplay with discrete (op)fibrations.

A ``SetFunctor`` is presheaf or copresheaf data on a finite base category;
``elements`` turns it into a category over the base, and ``to_presheaf`` /
``to_copresheaf`` invert that up to isomorphism.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError, SizeCapError, fiber_cap, search_cap
from .fincat import (FinCategory, FunctorData, OverCategory, fmt_id, idkey,
                     sort_ids)

CONTRA = "contravariant"
COV = "covariant"


@dataclass(frozen=True)
class SetFunctor:
    """A finite-set-valued functor on a finite category.

    For contravariant A and f: x -> y, ``actions[f]`` maps A(y) -> A(x);
    for covariant D it maps D(x) -> D(y).  Identity actions are stored.
    """

    base: FinCategory
    variance: str
    fibers: dict
    actions: dict

    def fiber(self, x) -> tuple:
        return self.fibers[x]

    def act(self, f) -> dict:
        return self.actions[f]

    def action_endpoints(self, f):
        x, y = self.base.arrows[f]
        return (y, x) if self.variance == CONTRA else (x, y)


def validate_setfunctor(A: SetFunctor) -> list[str]:
    report: list[str] = []
    if A.variance not in (CONTRA, COV):
        return [f"unknown variance {A.variance!r}"]
    X = A.base
    for x in X.objects:
        if x not in A.fibers:
            report.append(f"no fiber at {fmt_id(x)}")
    for f in X.arrows:
        if f not in A.actions:
            report.append(f"no action for arrow {fmt_id(f)}")
    if report:
        return report
    for f in X.arrows:
        d, c = A.action_endpoints(f)
        act = A.actions[f]
        if set(act) != set(A.fibers[d]):
            report.append(f"action of {fmt_id(f)} not total on its fiber")
            continue
        if not set(act.values()) <= set(A.fibers[c]):
            report.append(f"action of {fmt_id(f)} escapes its target fiber")
    if report:
        return report
    for x in X.objects:
        act = A.actions[X.id_of(x)]
        if any(act[e] != e for e in A.fibers[x]):
            report.append(f"identity action at {fmt_id(x)} is not the identity")
    for (g, f), h in X.compose.items():
        if X.is_identity(g) or X.is_identity(f):
            continue
        if A.variance == CONTRA:
            lhs = {e: A.actions[f][A.actions[g][e]] for e in A.actions[h]}
        else:
            lhs = {e: A.actions[g][A.actions[f][e]] for e in A.actions[h]}
        if lhs != A.actions[h]:
            report.append(
                f"action does not respect {fmt_id(g)} . {fmt_id(f)}")
    return report


def make_setfunctor(base, variance, fibers, actions) -> SetFunctor:
    """Normalize fibers and add identity actions."""
    fib = {x: sort_ids(fibers.get(x, ())) for x in base.objects}
    acts = dict(actions)
    for x in base.objects:
        acts.setdefault(base.id_of(x), {e: e for e in fib[x]})
    return SetFunctor(base, variance, fib, acts)


def constant_setfunctor(X: FinCategory, S, variance: str = COV) -> SetFunctor:
    S = sort_ids(S)
    return make_setfunctor(X, variance, {x: S for x in X.objects},
                           {f: {s: s for s in S} for f in X.arrows})


def representable(X: FinCategory, x) -> SetFunctor:
    """The contravariant hom functor into x; action is precomposition."""
    if x not in set(X.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    fibers = {z: X.hom(z, x) for z in X.objects}
    actions = {f: {g: X.comp(g, f) for g in fibers[X.tgt(f)]}
               for f in X.arrows}
    return make_setfunctor(X, CONTRA, fibers, actions)


def corepresentable(X: FinCategory, x) -> SetFunctor:
    """The covariant hom functor out of x; action is postcomposition."""
    if x not in set(X.objects):
        raise DomainError(f"unknown object {fmt_id(x)}")
    fibers = {z: X.hom(x, z) for z in X.objects}
    actions = {f: {g: X.comp(f, g) for g in fibers[X.src(f)]}
               for f in X.arrows}
    return make_setfunctor(X, COV, fibers, actions)


# ---------------------------------------------------------------------------
# category of elements

def elements(A: SetFunctor) -> OverCategory:
    """The category of elements of A, as a df (contravariant) or dof
    (covariant) over the base."""
    X = A.base
    objs = sort_ids((x, a) for x in X.objects for a in A.fibers[x])
    arrows = {}
    if A.variance == CONTRA:
        for f, (x, y) in X.arrows.items():
            for b in A.fibers[y]:
                arrows[(f, b)] = ((x, A.actions[f][b]), (y, b))
    else:
        for f, (x, y) in X.arrows.items():
            for d in A.fibers[x]:
                arrows[(f, d)] = ((x, d), (y, A.actions[f][d]))
    identity = {(x, a): (X.id_of(x), a) for (x, a) in objs}
    compose = {}
    for (f, e1), (s1, t1) in arrows.items():
        for (g, e2), (s2, t2) in arrows.items():
            if t1 == s2:
                if A.variance == CONTRA:
                    compose[((g, e2), (f, e1))] = (X.comp(g, f), e2)
                else:
                    compose[((g, e2), (f, e1))] = (X.comp(g, f), e1)
    T = FinCategory(objs, arrows, identity, compose)
    proj = FunctorData(T, X, {(x, a): x for (x, a) in objs},
                       {k: k[0] for k in arrows})
    return OverCategory(T, X, proj)


def is_discrete_fibration(p: OverCategory) -> bool:
    """Every base arrow has exactly one lift of each object over its target."""
    for f, (x, y) in p.base.arrows.items():
        for b in p.objects_over[y]:
            lifts = [u for u in p.arrows_over[f] if p.total.tgt(u) == b]
            if len(lifts) != 1:
                return False
    return True


def is_discrete_opfibration(p: OverCategory) -> bool:
    """Every base arrow has exactly one lift of each object over its source."""
    for f, (x, y) in p.base.arrows.items():
        for a in p.objects_over[x]:
            lifts = [u for u in p.arrows_over[f] if p.total.src(u) == a]
            if len(lifts) != 1:
                return False
    return True


def to_presheaf(p: OverCategory) -> SetFunctor:
    """Presheaf data of a discrete fibration; inverse to ``elements`` up to
    isomorphism."""
    if not is_discrete_fibration(p):
        raise DomainError("not a discrete fibration")
    X = p.base
    fibers = {x: p.objects_over[x] for x in X.objects}
    actions = {}
    for f, (x, y) in X.arrows.items():
        act = {}
        for b in fibers[y]:
            u = next(u for u in p.arrows_over[f] if p.total.tgt(u) == b)
            act[b] = p.total.src(u)
        actions[f] = act
    return SetFunctor(X, CONTRA, fibers, actions)


def to_copresheaf(p: OverCategory) -> SetFunctor:
    if not is_discrete_opfibration(p):
        raise DomainError("not a discrete opfibration")
    X = p.base
    fibers = {x: p.objects_over[x] for x in X.objects}
    actions = {}
    for f, (x, y) in X.arrows.items():
        act = {}
        for a in fibers[x]:
            u = next(u for u in p.arrows_over[f] if p.total.src(u) == a)
            act[a] = p.total.tgt(u)
        actions[f] = act
    return SetFunctor(X, COV, fibers, actions)


# ---------------------------------------------------------------------------
# exponentials and complements

def _mapping_elems(dom, cod, cap):
    if len(cod) ** len(dom) > cap:
        raise SizeCapError(
            f"function-set fiber of size {len(cod)}^{len(dom)} exceeds the cap")
    dom = sort_ids(dom)
    out = []
    for values in itertools.product(sort_ids(cod), repeat=len(dom)):
        out.append(tuple(zip(dom, values)))
    return tuple(out)


def _apply(h: tuple, a):
    for k, v in h:
        if k == a:
            return v
    raise KeyError(a)


def exponential_df_dof(A: SetFunctor, D: SetFunctor,
                       cap: int | None = None) -> SetFunctor:
    """The exponential of a dof by a df, as a covariant set functor.

    Fibers are the full function sets D(x)^A(x); the action along f conjugates
    a mapping by the two actions.
    """
    if A.base != D.base:
        raise DomainError("base mismatch")
    if A.variance != CONTRA or D.variance != COV:
        raise DomainError("expected a presheaf and a copresheaf")
    cap = fiber_cap() if cap is None else cap
    X = A.base
    fibers = {x: _mapping_elems(A.fibers[x], D.fibers[x], cap)
              for x in X.objects}
    actions = {}
    for f, (x, y) in X.arrows.items():
        Af, Df = A.actions[f], D.actions[f]
        act = {}
        for h in fibers[x]:
            act[h] = tuple((a, Df[_apply(h, Af[a])]) for a in A.fibers[y])
        actions[f] = act
    return SetFunctor(X, COV, fibers, actions)


def complement(A: SetFunctor, S, cap: int | None = None) -> SetFunctor:
    """The S-complement of a set functor: all maps of fibers into S, with
    precomposition action; the result has the opposite variance."""
    cap = fiber_cap() if cap is None else cap
    X = A.base
    S = sort_ids(S)
    fibers = {x: _mapping_elems(A.fibers[x], S, cap) for x in X.objects}
    actions = {}
    if A.variance == CONTRA:
        variance = COV
        for f, (x, y) in X.arrows.items():
            Af = A.actions[f]
            actions[f] = {h: tuple((a, _apply(h, Af[a])) for a in A.fibers[y])
                          for h in fibers[x]}
    else:
        variance = CONTRA
        for f, (x, y) in X.arrows.items():
            Af = A.actions[f]
            actions[f] = {h: tuple((a, _apply(h, Af[a])) for a in A.fibers[x])
                          for h in fibers[y]}
    return SetFunctor(X, variance, fibers, actions)


def bifibration_inverse(A: SetFunctor) -> SetFunctor:
    """Swap the variance of a set functor all of whose actions are bijective."""
    X = A.base
    actions = {}
    for f in X.arrows:
        act = A.actions[f]
        if len(set(act.values())) != len(act):
            raise DomainError(f"action of {fmt_id(f)} is not bijective")
        actions[f] = {v: k for k, v in act.items()}
    variance = COV if A.variance == CONTRA else CONTRA
    return SetFunctor(X, variance, dict(A.fibers), actions)


# ---------------------------------------------------------------------------
# natural transformations and isomorphism

def nat_transformations(A: SetFunctor, B: SetFunctor,
                        bijective: bool = False,
                        first_only: bool = False,
                        cap: int | None = None) -> list[dict]:
    """Natural transformations A -> B as families of component maps.

    With ``bijective`` only pointwise bijections are produced (isomorphism
    search).  Backtracking over objects with early naturality pruning.
    """
    if A.base != B.base:
        raise DomainError("base mismatch")
    if A.variance != B.variance:
        raise DomainError("variance mismatch")
    cap = search_cap() if cap is None else cap
    X = A.base
    contra = A.variance == CONTRA
    objs = list(X.objects)
    position = {x: i for i, x in enumerate(objs)}
    arrows_ready: dict = {i: [] for i in range(len(objs))}
    for f, (x, y) in X.arrows.items():
        if X.is_identity(f):
            continue
        arrows_ready[max(position[x], position[y])].append(f)

    def candidates(x):
        if bijective and len(A.fibers[x]) != len(B.fibers[x]):
            return []
        src = A.fibers[x]
        if bijective:
            return [dict(zip(src, perm))
                    for perm in itertools.permutations(B.fibers[x])]
        return [dict(zip(src, values))
                for values in itertools.product(B.fibers[x], repeat=len(src))]

    results: list[dict] = []
    comp: dict = {}
    counter = [0]

    def natural(f) -> bool:
        x, y = X.arrows[f]
        Af, Bf = A.actions[f], B.actions[f]
        if contra:
            return all(comp[x][Af[b]] == Bf[comp[y][b]] for b in A.fibers[y])
        return all(comp[y][Af[a]] == Bf[comp[x][a]] for a in A.fibers[x])

    def rec(i):
        if results and first_only:
            return
        if i == len(objs):
            results.append({x: dict(m) for x, m in comp.items()})
            return
        x = objs[i]
        for cand in candidates(x):
            counter[0] += 1
            if counter[0] > cap:
                raise SizeCapError("natural transformation search exceeded cap")
            comp[x] = cand
            if all(natural(f) for f in arrows_ready[i]):
                rec(i + 1)
            del comp[x]

    rec(0)
    return results


def setfunctor_isomorphism(A: SetFunctor, B: SetFunctor) -> dict | None:
    """A pointwise-bijective natural transformation A -> B, or None."""
    if A.base != B.base or A.variance != B.variance:
        return None
    if any(len(A.fibers[x]) != len(B.fibers[x]) for x in A.base.objects):
        return None
    found = nat_transformations(A, B, bijective=True, first_only=True)
    return found[0] if found else None


def setfunctors_isomorphic(A: SetFunctor, B: SetFunctor) -> bool:
    return setfunctor_isomorphism(A, B) is not None

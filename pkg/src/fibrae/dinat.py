"""Profunctor data, strong dinaturality, ends and the two coends.

A profunctor value H(x, y) carries a left (contravariant) action moving the
first slot and a right (covariant) action moving the second; the induced
category over the base has the diagonal values as objects and at most one
arrow over each base arrow between two of them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .fincat import (FinCategory, FunctorData, OverCategory, fmt_id, idkey,
                     sort_ids)
from .overbase import ComponentsResult, UnionFind, components, hom_over
from .setfun import CONTRA, COV, SetFunctor


@dataclass(frozen=True)
class ProfunctorData:
    """Finite-set values H(x, y) with the two arrow actions.

    ``left[(f, z)]`` maps H(y, z) -> H(x, z) for f: x -> y;
    ``right[(z, f)]`` maps H(z, x) -> H(z, y).
    """

    base: FinCategory
    values: dict
    left: dict
    right: dict

    def value(self, x, y) -> tuple:
        return self.values[(x, y)]


def validate_profunctor(H: ProfunctorData) -> list[str]:
    report: list[str] = []
    X = H.base
    for x in X.objects:
        for y in X.objects:
            if (x, y) not in H.values:
                report.append(f"no value at ({fmt_id(x)},{fmt_id(y)})")
    for f, (x, y) in X.arrows.items():
        for z in X.objects:
            if (f, z) not in H.left:
                report.append(f"no left action for ({fmt_id(f)},{fmt_id(z)})")
            if (z, f) not in H.right:
                report.append(f"no right action for ({fmt_id(z)},{fmt_id(f)})")
    if report:
        return report
    for f, (x, y) in X.arrows.items():
        for z in X.objects:
            la = H.left[(f, z)]
            if set(la) != set(H.values[(y, z)]) or \
                    not set(la.values()) <= set(H.values[(x, z)]):
                report.append(f"left action of {fmt_id(f)} at {fmt_id(z)} ill-typed")
            ra = H.right[(z, f)]
            if set(ra) != set(H.values[(z, x)]) or \
                    not set(ra.values()) <= set(H.values[(z, y)]):
                report.append(f"right action of {fmt_id(f)} at {fmt_id(z)} ill-typed")
    if report:
        return report
    for x in X.objects:
        i = X.id_of(x)
        for z in X.objects:
            if any(H.left[(i, z)][e] != e for e in H.values[(x, z)]):
                report.append(f"left identity action at {fmt_id(x)} not identity")
            if any(H.right[(z, i)][e] != e for e in H.values[(z, x)]):
                report.append(f"right identity action at {fmt_id(x)} not identity")
    for (g, f), h in X.compose.items():
        if X.is_identity(g) or X.is_identity(f):
            continue
        for z in X.objects:
            lf, lg, lh = H.left[(f, z)], H.left[(g, z)], H.left[(h, z)]
            if any(lf[lg[e]] != lh[e] for e in lh):
                report.append(
                    f"left action not functorial on {fmt_id(g)} . {fmt_id(f)}")
            rf, rg, rh = H.right[(z, f)], H.right[(z, g)], H.right[(z, h)]
            if any(rg[rf[e]] != rh[e] for e in rh):
                report.append(
                    f"right action not functorial on {fmt_id(g)} . {fmt_id(f)}")
    for f, (x, y) in X.arrows.items():
        for g, (u, v) in X.arrows.items():
            for e in H.values[(y, u)]:
                if H.right[(x, g)][H.left[(f, u)][e]] != \
                        H.left[(f, v)][H.right[(y, g)][e]]:
                    report.append(
                        f"actions of {fmt_id(f)} and {fmt_id(g)} do not commute")
    return report


# ---------------------------------------------------------------------------
# constructors

def hom_profunctor(X: FinCategory) -> ProfunctorData:
    """H(x, y) = hom(x, y) with pre- and postcomposition actions."""
    values = {(x, y): X.hom(x, y) for x in X.objects for y in X.objects}
    left = {}
    right = {}
    for f, (x, y) in X.arrows.items():
        for z in X.objects:
            left[(f, z)] = {h: X.comp(h, f) for h in values[(y, z)]}
            right[(z, f)] = {h: X.comp(f, h) for h in values[(z, x)]}
    return ProfunctorData(X, values, left, right)


def constant_profunctor(X: FinCategory, S) -> ProfunctorData:
    S = sort_ids(S)
    values = {(x, y): S for x in X.objects for y in X.objects}
    idmap = {s: s for s in S}
    left = {(f, z): dict(idmap) for f in X.arrows for z in X.objects}
    right = {(z, f): dict(idmap) for f in X.arrows for z in X.objects}
    return ProfunctorData(X, values, left, right)


def product_profunctor(A: SetFunctor, D: SetFunctor) -> ProfunctorData:
    """H(x, y) = A(x) x D(y) for a presheaf A and a copresheaf D."""
    if A.base != D.base:
        raise DomainError("base mismatch")
    if A.variance != CONTRA or D.variance != COV:
        raise DomainError("expected a presheaf and a copresheaf")
    X = A.base
    values = {(x, y): sort_ids((a, d) for a in A.fibers[x] for d in D.fibers[y])
              for x in X.objects for y in X.objects}
    left = {}
    right = {}
    for f, (x, y) in X.arrows.items():
        Af, Df = A.actions[f], D.actions[f]
        for z in X.objects:
            left[(f, z)] = {(a, d): (Af[a], d) for (a, d) in values[(y, z)]}
            right[(z, f)] = {(a, d): (a, Df[d]) for (a, d) in values[(z, x)]}
    return ProfunctorData(X, values, left, right)


def mapping_profunctor(A: SetFunctor, B: SetFunctor) -> ProfunctorData:
    """H with H(x, x) = Set(A(x), B(x)), wired by the common variance so that
    the end recovers the natural transformations A -> B."""
    if A.base != B.base:
        raise DomainError("base mismatch")
    if A.variance != B.variance:
        raise DomainError("variance mismatch")
    X = A.base

    def maps(dom, cod):
        import itertools
        dom = sort_ids(dom)
        return sort_ids(tuple(zip(dom, values))
                        for values in itertools.product(sort_ids(cod),
                                                        repeat=len(dom)))

    def apply(h, a):
        return dict(h)[a]

    values = {}
    left = {}
    right = {}
    if A.variance == COV:
        # H(x, y) = Set(A x, B y)
        for x in X.objects:
            for y in X.objects:
                values[(x, y)] = maps(A.fibers[x], B.fibers[y])
        for f, (x, y) in X.arrows.items():
            Af, Bf = A.actions[f], B.actions[f]
            for z in X.objects:
                left[(f, z)] = {
                    h: tuple((a, apply(h, Af[a])) for a in A.fibers[x])
                    for h in values[(y, z)]}
                right[(z, f)] = {
                    h: tuple((a, Bf[apply(h, a)]) for a in A.fibers[z])
                    for h in values[(z, x)]}
    else:
        # H(x, y) = Set(A y, B x)
        for x in X.objects:
            for y in X.objects:
                values[(x, y)] = maps(A.fibers[y], B.fibers[x])
        for f, (x, y) in X.arrows.items():
            Af, Bf = A.actions[f], B.actions[f]
            for z in X.objects:
                left[(f, z)] = {
                    h: tuple((a, Bf[apply(h, a)]) for a in A.fibers[z])
                    for h in values[(y, z)]}
                right[(z, f)] = {
                    h: tuple((a, apply(h, Af[a])) for a in A.fibers[y])
                    for h in values[(z, x)]}
    return ProfunctorData(X, values, left, right)


# ---------------------------------------------------------------------------
# the category over X and its invariants

def profunctor_over(H: ProfunctorData) -> OverCategory:
    """The category over the base induced by H: objects are diagonal
    elements, with at most one arrow over each base arrow."""
    X = H.base
    objs = sort_ids((x, a) for x in X.objects for a in H.values[(x, x)])
    arrows = {}
    for f, (x, y) in X.arrows.items():
        rf = H.right[(x, f)]
        lf = H.left[(f, y)]
        for a in H.values[(x, x)]:
            for b in H.values[(y, y)]:
                if rf[a] == lf[b]:
                    arrows[(f, a, b)] = ((x, a), (y, b))
    identity = {(x, a): (X.id_of(x), a, a) for (x, a) in objs}
    compose = {}
    for (f, a, b), (s1, t1) in arrows.items():
        for (g, b2, c), (s2, t2) in arrows.items():
            if t1 == s2:
                h = X.comp(g, f)
                if (h, a, c) not in arrows:
                    raise DomainError(
                        "composition closure fails at "
                        f"{fmt_id(g)} . {fmt_id(f)} on ({fmt_id(a)}, {fmt_id(c)})")
                compose[((g, b2, c), (f, a, b))] = (h, a, c)
    T = FinCategory(objs, arrows, identity, compose)
    proj = FunctorData(T, X, {(x, a): x for (x, a) in objs},
                       {k: k[0] for k in arrows})
    return OverCategory(T, X, proj)


def _family_of_section(s: FunctorData) -> dict:
    return {x: s.object_map[x][1] for x in s.domain.objects}


def end(H: ProfunctorData) -> list[dict]:
    """Sections of H over the base, as families x -> H(x, x)."""
    from .overbase import sections
    fams = [_family_of_section(s) for s in sections(profunctor_over(H))]
    return sorted(fams, key=lambda d: idkey(sort_ids(d.items())))


def strong_coend(H: ProfunctorData) -> ComponentsResult:
    """Components of H over the base."""
    return components(profunctor_over(H))


def coend_classical(H: ProfunctorData) -> ComponentsResult:
    """Coequalizer form of the coend: the quotient of the diagonal values by
    the relation identifying the two images of every off-diagonal element."""
    X = H.base
    tags = [(x, a) for x in X.objects for a in H.values[(x, x)]]
    uf = UnionFind(tags)
    for f, (x, y) in X.arrows.items():
        for h in H.values[(y, x)]:
            uf.union((x, H.left[(f, x)][h]), (y, H.right[(y, f)][h]))
    members = uf.classes()
    rep = {root: mem[0] for root, mem in members.items()}
    class_of = {t: rep[uf.find(t)] for t in tags}
    return ComponentsResult(sort_ids(rep.values()), class_of)


def strong_dinaturals(H: ProfunctorData, K: ProfunctorData,
                      cap: int | None = None) -> list[dict]:
    """Strong dinatural transformations H -> K as families of diagonal maps."""
    if H.base != K.base:
        raise DomainError("base mismatch")
    morphs = hom_over(profunctor_over(H), profunctor_over(K), cap=cap)
    fams = []
    for F in morphs:
        fam: dict = {}
        for (x, a), (_, b) in F.object_map.items():
            fam.setdefault(x, {})[a] = b
        for x in H.base.objects:
            fam.setdefault(x, {})
        fams.append(fam)

    def canon(d):
        return idkey(tuple(
            (x, tuple(sorted(m.items(), key=lambda kv: idkey(kv[0]))))
            for x, m in sorted(d.items(), key=lambda kv: idkey(kv[0]))))

    return sorted(fams, key=canon)


def check_strong_pullback(H: ProfunctorData, f) -> bool:
    """Whether the canonical square of actions at f is a pullback of sets."""
    X = H.base
    if f not in X.arrows:
        raise DomainError(f"unknown arrow {fmt_id(f)}")
    x, y = X.arrows[f]
    pairs = {(a, b)
             for a in H.values[(x, x)] for b in H.values[(y, y)]
             if H.right[(x, f)][a] == H.left[(f, y)][b]}
    image = {}
    for h in H.values[(y, x)]:
        key = (H.left[(f, x)][h], H.right[(y, f)][h])
        if key in image.values() or key not in pairs:
            return False
        image[h] = key
    return len(image) == len(pairs)

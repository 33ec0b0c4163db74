import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibrae.errors import DomainError, SizeCapError
from fibrae.fincat import (build_category, identity_over, interval, one,
                           parallel_pair, product_over, slice_over,
                           validate_over)
from fibrae.overbase import discrete_object, hom_over, overs_isomorphic
from fibrae.randgen import random_category, random_over, random_setfunctor
from fibrae.setfun import (CONTRA, COV, SetFunctor, bifibration_inverse,
                           complement, constant_setfunctor, corepresentable,
                           elements, exponential_df_dof,
                           is_discrete_fibration, is_discrete_opfibration,
                           make_setfunctor, nat_transformations,
                           representable, setfunctor_isomorphism,
                           setfunctors_isomorphic, to_copresheaf, to_presheaf,
                           validate_setfunctor)

TWO = interval()


def _explicit_presheaf():
    # A on TWO with A(x) = {a}, A(y) = {b, b'}, both mapped onto a
    return make_setfunctor(
        TWO, CONTRA,
        {"x": ("a",), "y": ("b", "b'")},
        {"f": {"b": "a", "b'": "a"}})


def test_elements_of_constant_one_is_identity_over():
    rng = random.Random(0)
    for _ in range(8):
        X = random_category(rng)
        p = elements(constant_setfunctor(X, ("*",), CONTRA))
        assert overs_isomorphic(p, identity_over(X))


def test_elements_explicit_example():
    el = elements(_explicit_presheaf())
    assert len(el.total.objects) == 3
    assert len(el.total.nonidentity_arrows()) == 2
    assert is_discrete_fibration(el)


def test_identity_over_is_df_and_dof():
    X = random_category(random.Random(1))
    p = identity_over(X)
    assert is_discrete_fibration(p)
    assert is_discrete_opfibration(p)


def test_parallel_lifts_break_df():
    # two parallel arrows over the single loop of ONE
    PAIR = parallel_pair()
    ONE = one()
    from fibrae.fincat import FunctorData, OverCategory
    F = FunctorData(PAIR, ONE,
                    {"u": "o", "v": "o"},
                    {PAIR.id_of("u"): ONE.id_of("o"),
                     PAIR.id_of("v"): ONE.id_of("o"),
                     "r": ONE.id_of("o"), "s": ONE.id_of("o")})
    p = OverCategory(PAIR, ONE, F)
    assert not is_discrete_fibration(p)
    assert not is_discrete_opfibration(p)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_presheaf(seed):
    rng = random.Random(seed)
    X = random_category(rng)
    A = random_setfunctor(rng, X, CONTRA)
    assert setfunctors_isomorphic(to_presheaf(elements(A)), A)
    D = random_setfunctor(rng, X, COV)
    assert setfunctors_isomorphic(to_copresheaf(elements(D)), D)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_elements_round_trip_over_base(seed):
    rng = random.Random(seed)
    X = random_category(rng)
    A = random_setfunctor(rng, X, CONTRA)
    p = elements(A)
    assert overs_isomorphic(elements(to_presheaf(p)), p)


def test_to_presheaf_of_slice_is_representable():
    rng = random.Random(2)
    for _ in range(10):
        X = random_category(rng)
        x = rng.choice(X.objects)
        assert setfunctors_isomorphic(to_presheaf(slice_over(X, x)),
                                      representable(X, x))


def test_to_presheaf_of_identity_is_constant_one():
    X = random_category(random.Random(3))
    assert setfunctors_isomorphic(to_presheaf(identity_over(X)),
                                  constant_setfunctor(X, ("*",), CONTRA))


def test_to_presheaf_rejects_non_df():
    PAIR = parallel_pair()
    ONE = one()
    from fibrae.fincat import FunctorData, OverCategory
    F = FunctorData(PAIR, ONE,
                    {"u": "o", "v": "o"},
                    {PAIR.id_of("u"): ONE.id_of("o"),
                     PAIR.id_of("v"): ONE.id_of("o"),
                     "r": ONE.id_of("o"), "s": ONE.id_of("o")})
    with pytest.raises(DomainError):
        to_presheaf(OverCategory(PAIR, ONE, F))


# ---------------------------------------------------------------------------
# exponentials

def test_exponential_with_empty_base_presheaf():
    D = corepresentable(TWO, "x")
    A = constant_setfunctor(TWO, (), CONTRA)
    E = exponential_df_dof(A, D)
    assert all(len(E.fibers[x]) == 1 for x in TWO.objects)


def test_exponential_into_terminal():
    A = representable(TWO, "y")
    D = constant_setfunctor(TWO, ("*",), COV)
    E = exponential_df_dof(A, D)
    assert all(len(E.fibers[x]) == 1 for x in TWO.objects)


def test_exponential_explicit_sizes_and_action():
    A = make_setfunctor(TWO, CONTRA, {"x": ("a",), "y": ("b1", "b2")},
                        {"f": {"b1": "a", "b2": "a"}})
    D = make_setfunctor(TWO, COV, {"x": ("c1", "c2"), "y": ("d",)},
                        {"f": {"c1": "d", "c2": "d"}})
    E = exponential_df_dof(A, D)
    assert validate_setfunctor(E) == []
    assert len(E.fibers["x"]) == 2
    assert len(E.fibers["y"]) == 1
    # action: h in D(x)^A(x) goes to D(f) . h . A(f) in D(y)^A(y)
    for h in E.fibers["x"]:
        img = E.actions["f"][h]
        for (a, d) in img:
            assert d == "d"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_exponential_universal_property_counts(seed):
    rng = random.Random(seed)
    X = random_category(rng, max_objects=3, max_arrows=4)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    D = random_setfunctor(rng, X, COV, max_fiber=2)
    E = exponential_df_dof(A, D)
    Q = random_over(rng, X, max_total_objects=3, max_total_arrows=4)
    lhs = len(hom_over(Q, elements(E)))
    rhs = len(hom_over(product_over(Q, elements(A)), elements(D)))
    assert lhs == rhs


def test_exponential_size_cap():
    X = one()
    A = constant_setfunctor(X, tuple(f"a{i}" for i in range(6)), CONTRA)
    D = constant_setfunctor(X, tuple(f"d{i}" for i in range(6)), COV)
    with pytest.raises(SizeCapError):
        exponential_df_dof(A, D, cap=100)


# ---------------------------------------------------------------------------
# complements

def test_complement_by_singleton_is_terminal():
    A = _explicit_presheaf()
    C = complement(A, ("*",))
    assert C.variance == COV
    assert all(len(C.fibers[x]) == 1 for x in TWO.objects)


def test_complement_of_terminal_is_constant():
    S = ("0", "1", "2")
    C = complement(constant_setfunctor(TWO, ("*",), CONTRA), S)
    assert setfunctors_isomorphic(C, constant_setfunctor(TWO, S, COV))


def test_complement_representable_sizes():
    A = representable(TWO, "y")
    C = complement(A, ("0", "1"))
    assert [len(C.fibers[x]) for x in ("x", "y")] == [2, 2]
    # action is precomposition with A(f)
    for h in C.fibers["x"]:
        img = C.actions["f"][h]
        hmap, imap = dict(h), dict(img)
        for b in A.fibers["y"]:
            assert imap[b] == hmap[A.actions["f"][b]]


def test_complement_equals_exponential_into_constant():
    rng = random.Random(5)
    for _ in range(10):
        X = random_category(rng)
        A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
        S = ("0", "1")
        assert complement(A, S) == exponential_df_dof(
            A, constant_setfunctor(X, S, COV))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_complement_of_df_is_valid_dof(seed):
    rng = random.Random(seed)
    X = random_category(rng, max_objects=3, max_arrows=5)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    C = complement(A, ("0", "1"))
    assert C.variance == COV
    assert validate_setfunctor(C) == []
    assert is_discrete_opfibration(elements(C))


# ---------------------------------------------------------------------------
# bifibration inverse

def test_bifibration_inverse_constant():
    A = constant_setfunctor(TWO, ("0", "1"), CONTRA)
    B = bifibration_inverse(A)
    assert B.variance == COV
    assert bifibration_inverse(B) == A


def test_bifibration_inverse_regular_representation():
    from fibrae.fincat import cyclic_group
    C2 = cyclic_group(2)
    A = representable(C2, "g")
    B = bifibration_inverse(A)
    assert validate_setfunctor(B) == []
    assert B.actions["r1"][C2.id_of("g")] == "r1"


def test_bifibration_inverse_rejects_non_bijective():
    with pytest.raises(DomainError):
        bifibration_inverse(_explicit_presheaf())


# ---------------------------------------------------------------------------
# strong contraposition (testable form)

def _contraposed(h, A, B, S):
    """The family Set(h_x, S) acting on complements."""
    out = {}
    for x in A.base.objects:
        comp = {}
        for k in complement(B, S).fibers[x]:
            kmap = dict(k)
            comp[k] = tuple((a, kmap[h[x][a]]) for a in A.fibers[x])
        out[x] = comp
    return out


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_strong_contraposition_injectivity(seed):
    rng = random.Random(seed)
    X = random_category(rng, max_objects=3, max_arrows=4)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    B = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    S = ("0", "1")
    nats = nat_transformations(A, B)
    frozen = []
    CB, CA = complement(B, S), complement(A, S)
    for h in nats:
        contraposed = _contraposed(h, A, B, S)
        # the image is natural from complement(B) to complement(A)
        for f, (x, y) in X.arrows.items():
            for k in CB.fibers[x]:
                lhs = CA.actions[f][contraposed[x][k]]
                rhs = contraposed[y][CB.actions[f][k]]
                assert lhs == rhs
        frozen.append(tuple(sorted(
            (x, tuple(sorted(contraposed[x].items())))
            for x in X.objects)))
    # injectivity: distinct transformations contrapose differently
    assert len(set(frozen)) == len(nats)


def _push(k, sigma):
    return tuple((b, sigma[s]) for b, s in k)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_strong_contraposition_naturality_in_s(seed):
    # the contraposed family commutes with both probe maps S -> S + 1
    rng = random.Random(seed)
    X = random_category(rng, max_objects=2, max_arrows=3)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    B = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    S = ("0", "1")
    S2 = ("0", "1", "extra")
    include = {"0": "0", "1": "1"}
    collapse = {"0": "extra", "1": "extra"}
    for h in nat_transformations(A, B):
        cS = _contraposed(h, A, B, S)
        cS2 = _contraposed(h, A, B, S2)
        for x in X.objects:
            for k in complement(B, S).fibers[x]:
                for sigma in (include, collapse):
                    assert cS2[x][_push(k, sigma)] == _push(cS[x][k], sigma)


# ---------------------------------------------------------------------------
# exponential law at the level of counts

@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_exponential_law_counts(seed):
    rng = random.Random(seed)
    X = random_category(rng, max_objects=2, max_arrows=3)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    D = random_setfunctor(rng, X, COV, max_fiber=2)
    E = exponential_df_dof(A, D)
    Q = elements(random_setfunctor(rng, X, COV, max_fiber=2))
    assert len(hom_over(Q, elements(E))) == \
        len(hom_over(product_over(Q, elements(A)), elements(D)))

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibrae.fincat import (build_category, coslice_over, enumerate_functors,
                           fiber, fiber_arrow, identity_over, idem_monoid,
                           interval, object_over, one, opposite,
                           parallel_pair, product_over, slice_over,
                           validate_category, validate_functor, validate_over)
from fibrae.overbase import overs_isomorphic
from fibrae.randgen import random_category, random_setfunctor
from fibrae.setfun import (CONTRA, COV, corepresentable, elements,
                           is_discrete_fibration, representable)
from fibrae.errors import DomainError


def test_validate_one_is_clean():
    assert validate_category(one()) == []


def test_validate_idem_is_clean():
    assert validate_category(idem_monoid()) == []


def test_validate_reports_missing_composite():
    # TWO with an extra non-identity endo but no table entry for it
    C = build_category(("x", "y"), {"f": ("x", "y"), "g": ("y", "x")})
    report = validate_category(C)
    assert any("missing composite" in r and "g" in r for r in report)


def test_validate_reports_broken_unit():
    C = build_category(("x",), {"e": ("x", "x")}, {("e", "e"): "e"})
    # corrupt: identity composed wrongly
    bad = dict(C.compose)
    bad[(C.id_of("x"), "e")] = C.id_of("x")
    from fibrae.fincat import FinCategory
    D = FinCategory(C.objects, C.arrows, C.identity, bad)
    assert any("unit law" in r for r in validate_category(D))


def test_opposite_one_self_dual():
    assert opposite(one()) == one()


def test_opposite_involution():
    TWO = interval()
    assert opposite(opposite(TWO)) == TWO


def test_opposite_swaps_arrow():
    TWO = interval()
    op = opposite(TWO)
    assert op.arrows["f"] == ("y", "x")
    assert validate_category(op) == []


def test_slice_interval_target():
    sl = slice_over(interval(), "y")
    assert len(sl.total.objects) == 2
    non_id = sl.total.nonidentity_arrows()
    assert len(non_id) == 1
    (a,) = non_id
    # the unique non-identity arrow goes f -> id_y
    assert sl.total.arrows[a] == ("f", ("id", "y"))


def test_slice_interval_source_discrete():
    sl = slice_over(interval(), "x")
    assert len(sl.total.objects) == 1
    assert sl.total.nonidentity_arrows() == ()


def test_slice_idem_matches_hand_enumeration():
    IDEM = idem_monoid()
    sl = slice_over(IDEM, "s")
    assert set(sl.total.objects) == {"e", ("id", "s")}
    # oracle: arrows h -> k are exactly the u with k . u = h
    expected = set()
    for h in sl.total.objects:
        for k in sl.total.objects:
            for u in IDEM.arrows:
                if IDEM.comp(k, u) == h:
                    expected.add((h, u, k))
    assert set(sl.total.arrows) == expected
    # the idempotent appears as an endo-arrow of the object e
    assert ("e", "e", "e") in expected


def test_slice_unknown_object():
    with pytest.raises(DomainError):
        slice_over(interval(), "zz")


def test_product_unit_law():
    rng = random.Random(1)
    for _ in range(10):
        X = random_category(rng)
        from fibrae.randgen import random_over
        p = random_over(rng, X)
        prod = product_over(p, identity_over(X))
        assert overs_isomorphic(prod, p)


def test_product_fiber_example():
    TWO = interval()
    prod = product_over(slice_over(TWO, "y"), object_over(TWO, "x"))
    assert [o for o in prod.total.objects] == [("f", "x")]
    assert prod.total.nonidentity_arrows() == ()


def test_product_of_df_and_dof_objects():
    rng = random.Random(2)
    for _ in range(10):
        X = random_category(rng)
        A = random_setfunctor(rng, X, CONTRA)
        D = random_setfunctor(rng, X, COV)
        prod = product_over(elements(A), elements(D))
        expected = sum(len(A.fibers[x]) * len(D.fibers[x]) for x in X.objects)
        assert len(prod.total.objects) == expected


def test_fiber_of_identity_over():
    TWO = interval()
    fb = fiber(identity_over(TWO), "x")
    assert len(fb.objects) == 1
    assert len(fb.arrows) == 1


def test_fiber_of_df_is_discrete():
    rng = random.Random(3)
    for _ in range(10):
        X = random_category(rng)
        A = random_setfunctor(rng, X, CONTRA)
        for x in X.objects:
            fb = fiber(elements(A), x)
            assert len(fb.objects) == len(A.fibers[x])
            assert len(fb.arrows) == len(fb.objects)  # identities only


def test_fiber_arrow_of_dof_is_mapping_graph():
    TWO = interval()
    D = corepresentable(TWO, "x")
    fa = fiber_arrow(elements(D), "f")
    assert validate_over(fa) == []
    # objects: one copy of D(x) and one of D(y); arrows over "f" mirror D(f)
    assert len(fa.total.objects) == len(D.fibers["x"]) + len(D.fibers["y"])
    over_f = fa.arrows_over["f"]
    assert len(over_f) == len(D.fibers["x"])


def test_enumerate_functors_from_point():
    TWO = interval()
    fs = enumerate_functors(one(), TWO)
    assert len(fs) == len(TWO.objects)


def test_enumerate_functors_interval_to_interval():
    TWO = interval()
    assert len(enumerate_functors(TWO, TWO)) == 3


def test_enumerate_functors_idem_to_idem():
    IDEM = idem_monoid()
    fs = enumerate_functors(IDEM, IDEM)
    assert len(fs) == 2
    images = [f.arrow_map["e"] for f in fs]
    assert "e" in images


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_categories_are_lawful(seed):
    C = random_category(random.Random(seed))
    assert validate_category(C) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_slice_projection_is_df(seed):
    rng = random.Random(seed)
    C = random_category(rng)
    x = rng.choice(C.objects)
    sl = slice_over(C, x)
    assert validate_over(sl) == []
    assert is_discrete_fibration(sl)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_product_is_symmetric(seed):
    rng = random.Random(seed)
    X = random_category(rng, max_objects=3, max_arrows=5)
    A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
    D = random_setfunctor(rng, X, COV, max_fiber=2)
    p, q = elements(A), elements(D)
    assert overs_isomorphic(product_over(p, q), product_over(q, p))


def test_coslice_is_dual_of_slice():
    IDEM = idem_monoid()
    co = coslice_over(IDEM, "s")
    assert set(co.total.objects) == {"e", ("id", "s")}
    expected = set()
    for h in co.total.objects:
        for k in co.total.objects:
            for u in IDEM.arrows:
                if IDEM.comp(u, h) == k:
                    expected.add((h, u, k))
    assert set(co.total.arrows) == expected


def test_elements_of_representable_is_slice():
    TWO = interval()
    assert overs_isomorphic(elements(representable(TWO, "y")),
                            slice_over(TWO, "y"))

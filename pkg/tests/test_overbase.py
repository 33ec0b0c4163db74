import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fibrae.fincat import (coslice_over, discrete_category, identity_over,
                           interval, object_over, one, parallel_pair,
                           slice_over)
from fibrae.overbase import (components, discrete_object, hom_over,
                             over_isomorphism, sections, ten,
                             tensor_product_classical)
from fibrae.randgen import random_category, random_over, random_setfunctor
from fibrae.reflect import colimit_setfunctor
from fibrae.setfun import (CONTRA, COV, constant_setfunctor, corepresentable,
                           elements, make_setfunctor, nat_transformations,
                           representable)

TWO = interval()


def test_components_parallel_pair_connected():
    assert len(components(parallel_pair())) == 1


def test_components_discrete():
    assert len(components(discrete_category(("a", "b", "c")))) == 3


def test_components_elements_zigzag():
    A = make_setfunctor(TWO, CONTRA, {"x": ("a",), "y": ("b", "b'")},
                        {"f": {"b": "a", "b'": "a"}})
    assert len(components(elements(A))) == 1


def test_sections_of_identity():
    X = random_category(random.Random(0))
    assert len(sections(identity_over(X))) == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sections_of_elements_compute_limits(seed):
    import oracles
    rng = random.Random(seed)
    X = random_category(rng)
    A = random_setfunctor(rng, X, COV)
    secs = sections(elements(A))
    assert len(secs) == len(oracles.brute_limit(A))


def test_ten_against_object_atom_is_fiber_components():
    rng = random.Random(1)
    for _ in range(10):
        X = random_category(rng)
        p = random_over(rng, X)
        for x in X.objects:
            from fibrae.fincat import fiber
            assert len(ten(object_over(X, x), p)) == \
                len(components(fiber(p, x)))


def test_ten_unit():
    rng = random.Random(2)
    for _ in range(10):
        X = random_category(rng)
        p = random_over(rng, X)
        assert len(ten(p, identity_over(X))) == len(components(p))


def test_ten_slice_coslice_interval():
    t = ten(slice_over(TWO, "y"), coslice_over(TWO, "x"))
    assert len(t) == 1


def test_ten_symmetric_elementwise():
    rng = random.Random(3)
    for _ in range(10):
        X = random_category(rng, max_objects=3, max_arrows=5)
        A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
        D = random_setfunctor(rng, X, COV, max_fiber=2)
        p, q = elements(A), elements(D)
        lhs, rhs = ten(p, q), ten(q, p)
        assert len(lhs) == len(rhs)
        # the swap induces a bijection of classes
        image = {}
        for (a, b), cls in lhs.class_of.items():
            swapped = rhs.class_of[(b, a)]
            assert image.setdefault(cls, swapped) == swapped
        assert len(set(image.values())) == len(lhs)


def test_hom_over_yoneda():
    rng = random.Random(4)
    for _ in range(15):
        X = random_category(rng)
        A = random_setfunctor(rng, X, CONTRA)
        for x in X.objects:
            morphs = hom_over(slice_over(X, x), elements(A))
            assert len(morphs) == len(A.fibers[x])


def test_hom_over_terminal_singleton():
    rng = random.Random(5)
    for _ in range(10):
        X = random_category(rng)
        p = random_over(rng, X)
        assert len(hom_over(p, identity_over(X))) == 1


def test_hom_over_elements_is_nat():
    rng = random.Random(6)
    for _ in range(12):
        X = random_category(rng, max_objects=3, max_arrows=5)
        A = random_setfunctor(rng, X, CONTRA, max_fiber=2)
        B = random_setfunctor(rng, X, CONTRA, max_fiber=2)
        assert len(hom_over(elements(A), elements(B))) == \
            len(nat_transformations(A, B))


def test_classical_tensor_coyoneda():
    rng = random.Random(7)
    for _ in range(12):
        X = random_category(rng)
        A = random_setfunctor(rng, X, CONTRA)
        for x in X.objects:
            t = tensor_product_classical(A, corepresentable(X, x))
            assert len(t) == len(A.fibers[x])
            # the canonical map sends the class of (z, a, h) to A(h)(a)
            values = {}
            for (z, a, h), cls in t.class_of.items():
                v = A.actions[h][a]
                assert values.setdefault(cls, v) == v
            assert set(values.values()) == set(A.fibers[x])


def test_classical_tensor_unit_weight_is_colimit():
    rng = random.Random(8)
    for _ in range(12):
        X = random_category(rng)
        D = random_setfunctor(rng, X, COV)
        t = tensor_product_classical(constant_setfunctor(X, ("*",), CONTRA), D)
        assert len(t) == len(colimit_setfunctor(D))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ten_matches_classical_tensor(seed):
    rng = random.Random(seed)
    X = random_category(rng)
    A = random_setfunctor(rng, X, CONTRA)
    D = random_setfunctor(rng, X, COV)
    assert len(ten(elements(A), elements(D))) == \
        len(tensor_product_classical(A, D))


def test_discrete_object_singleton_is_identity_over():
    X = random_category(random.Random(9))
    assert over_isomorphism(discrete_object(("*",), X),
                            identity_over(X)) is not None


def test_discrete_object_empty():
    X = random_category(random.Random(10))
    d = discrete_object((), X)
    assert d.total.objects == ()


def test_discrete_object_adjunction_counts():
    rng = random.Random(11)
    for _ in range(8):
        X = random_category(rng, max_objects=3, max_arrows=4)
        p = random_over(rng, X, max_total_objects=3, max_total_arrows=4)
        S = ("0", "1")
        n_sections = len(sections(p))
        n_classes = len(components(p))
        assert len(hom_over(discrete_object(S, X), p)) == n_sections ** len(S)
        assert len(hom_over(p, discrete_object(S, X))) == len(S) ** n_classes


def test_sections_of_discrete_object_count_component_maps():
    rng = random.Random(12)
    for _ in range(8):
        X = random_category(rng)
        S = ("0", "1", "2")
        n = len(components(X))
        assert len(sections(discrete_object(S, X))) == len(S) ** n

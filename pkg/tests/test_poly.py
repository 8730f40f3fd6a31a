import itertools
import json

import numpy as np
import pytest

from qpolylearn import (
    ContextMismatch,
    DimensionMismatch,
    FieldCtx,
    InvalidDegree,
    MultilinearPoly,
    add_points,
    basis_point,
    coefficient_count,
    derive_seed,
    index_to_point,
    point_to_index,
    poly_equal,
    random_poly,
    subset_from_members,
    subset_members,
    subsets_of_size,
    subsets_up_to,
    zero_point,
)
from qpolylearn.poly import all_points, point_matrix


def mk(ctx, n, d, coeffs_by_members):
    return MultilinearPoly(
        ctx, n, d,
        {subset_from_members(s): v for s, v in coeffs_by_members.items()},
    )


# ---------------------------------------------------------------------
# subsets
# ---------------------------------------------------------------------

def test_subset_round_trip():
    mask = subset_from_members((1, 3, 4))
    assert mask == 0b1101
    assert subset_members(mask) == (1, 3, 4)
    assert subset_members(0) == ()


def test_subset_from_members_validates():
    with pytest.raises(ValueError):
        subset_from_members((3, 1))
    with pytest.raises(ValueError):
        subset_from_members((0, 1))
    with pytest.raises(ValueError):
        subset_from_members((1, 5), n=4)


def test_subsets_canonical_order():
    assert list(subsets_of_size(3, 2)) == [0b011, 0b101, 0b110]
    assert list(subsets_up_to(3, 2)) == [0, 1, 2, 4, 3, 5, 6]
    assert list(subsets_of_size(3, 0)) == [0]
    assert list(subsets_of_size(3, 4)) == []
    assert len(list(subsets_of_size(6, 3))) == 20


# ---------------------------------------------------------------------
# points and indexing
# ---------------------------------------------------------------------

def test_point_helpers(f5):
    assert zero_point(3) == (0, 0, 0)
    assert basis_point(4, 2) == (0, 1, 0, 0)
    with pytest.raises(ValueError):
        basis_point(4, 5)
    assert add_points(f5, (1, 4), (2, 3)) == (3, 2)
    with pytest.raises(DimensionMismatch):
        add_points(f5, (1,), (1, 2))


def test_index_round_trip(f3):
    for idx in range(27):
        pt = index_to_point(f3, 3, idx)
        assert point_to_index(f3, pt) == idx
    # register 1 is the most significant digit
    assert index_to_point(f3, 3, 9) == (1, 0, 0)


def test_point_matrix_matches_index_decoding(f4):
    pm = point_matrix(f4, 2)
    for idx in range(16):
        assert tuple(pm[idx]) == index_to_point(f4, 2, idx)
    assert all_points(f4, 2)[5] == index_to_point(f4, 2, 5)


# ---------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------

def test_degree_clamped_with_warning(f2):
    with pytest.warns(UserWarning, match="clamping"):
        f = MultilinearPoly(f2, 2, 5, {})
    assert f.d == 2


def test_construction_validates(f2):
    with pytest.raises(ValueError):
        MultilinearPoly(f2, 2, 1, {0b11: 1})  # |S| = 2 > d = 1
    with pytest.raises(ValueError):
        MultilinearPoly(f2, 2, 2, {0b100: 1})  # variable 3 of 2
    with pytest.raises(ValueError):
        MultilinearPoly(f2, 2, 2, {0b1: 2})  # value outside field


def test_zero_coefficients_dropped(f3):
    f = mk(f3, 2, 2, {(1,): 2, (1, 2): 0})
    assert f.num_terms() == 1
    assert f.coeff(subset_from_members((1, 2))) == 0


# ---------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------

def test_evaluate_examples(f2, f5):
    f = mk(f2, 2, 2, {(): 1, (1, 2): 1})
    assert f.evaluate((1, 1)) == 0

    g = mk(f5, 3, 3, {(1,): 2, (1, 2): 4, (1, 2, 3): 1})
    assert g.evaluate((1, 1, 1)) == 2  # 2 + 4 + 1 mod 5

    with pytest.raises(DimensionMismatch):
        g.evaluate((1, 1))


def test_evaluate_at_zero_gives_constant(f5):
    for seed in range(5):
        f = random_poly(f5, 4, 2, seed)
        assert f.evaluate(zero_point(4)) == f.coeff(0)


def test_evaluate_linear_in_coefficients(f4):
    for seed in range(10):
        f = random_poly(f4, 3, 2, derive_seed(1, seed))
        g = random_poly(f4, 3, 2, derive_seed(2, seed))
        for x in all_points(f4, 3):
            assert (f + g).evaluate(x) == f4.add(f.evaluate(x), g.evaluate(x))


@pytest.mark.parametrize("spec", ["2", "3", "5", "2^2:1,1,1"])
def test_value_table_matches_pointwise_evaluate(spec):
    from qpolylearn import parse_field_spec

    ctx = parse_field_spec(spec)
    for seed in range(5):
        f = random_poly(ctx, 3, 3, derive_seed(7, seed))
        table = f.value_table()
        for idx, x in enumerate(all_points(ctx, 3)):
            assert table[idx] == f.evaluate(x)


# ---------------------------------------------------------------------
# degree parts and derivatives
# ---------------------------------------------------------------------

def test_degree_part(f2, f5):
    f = mk(f2, 2, 2, {(): 1, (1,): 1, (1, 2): 1})
    assert poly_equal(f.degree_part(1), mk(f2, 2, 1, {(1,): 1}))
    assert poly_equal(f.degree_part(0), mk(f2, 2, 0, {(): 1}))

    g = mk(f5, 3, 3, {(1,): 2, (1, 2): 4, (1, 2, 3): 1})
    assert poly_equal(g.degree_part(3), mk(f5, 3, 3, {(1, 2, 3): 1}))
    with pytest.raises(InvalidDegree):
        g.degree_part(4)
    with pytest.raises(InvalidDegree):
        g.degree_part(-1)


def test_discrete_derivative_examples(f2):
    f = mk(f2, 3, 2, {(1, 2): 1})
    assert poly_equal(f.discrete_derivative(1), mk(f2, 3, 1, {(2,): 1}))
    assert poly_equal(f.discrete_derivative(3), mk(f2, 3, 1, {}))
    with pytest.raises(ValueError):
        f.discrete_derivative(4)
    with pytest.raises(ValueError):
        f.discrete_derivative(0)


@pytest.mark.parametrize("p", [3, 7])
def test_iterated_derivative_of_quadratic_is_constant_one(p):
    # d1 d2 (x1 x2 + x1 + 5) = 1, with 5 reduced mod p
    ctx = FieldCtx(p)
    f = mk(ctx, 2, 2, {(): 5 % p, (1,): 1, (1, 2): 1})
    dd = f.discrete_derivative(2).discrete_derivative(1)
    assert poly_equal(dd, mk(ctx, 2, 0, {(): 1}))
    # pointwise route agrees everywhere
    fn, cost = f.derivative_function(subset_from_members((1, 2)))
    assert cost == 4
    assert all(fn(x) == 1 for x in all_points(ctx, 2))


def test_derivative_function_spot_formula(f5):
    # for S = {1,2}: f(x) - f(x+e1) - f(x+e2) + f(x+e1+e2)
    f = random_poly(f5, 3, 3, 99)
    fn, cost = f.derivative_function(subset_from_members((1, 2)))
    assert cost == 4
    e1, e2 = basis_point(3, 1), basis_point(3, 2)
    for x in [(0, 0, 0), (1, 2, 3), (4, 4, 1)]:
        manual = f.evaluate(x)
        manual = f5.sub(manual, f.evaluate(add_points(f5, x, e1)))
        manual = f5.sub(manual, f.evaluate(add_points(f5, x, e2)))
        manual = f5.add(manual, f.evaluate(add_points(f5, x, add_points(f5, e1, e2))))
        assert fn(x) == manual


def test_derivative_function_strips_one_variable(f2):
    # f = x1 x2: the derivative along {1} is x2 at every point
    f = mk(f2, 2, 2, {(1, 2): 1})
    fn, cost = f.derivative_function(subset_from_members((1,)))
    assert cost == 2
    for x in all_points(f2, 2):
        assert fn(x) == x[1]


def test_derivative_function_empty_subset_is_f(f3):
    f = random_poly(f3, 2, 2, 5)
    fn, cost = f.derivative_function(0)
    assert cost == 1
    assert all(fn(x) == f.evaluate(x) for x in all_points(f3, 2))


@pytest.mark.parametrize("spec", ["2", "3", "2^2:1,1,1", "5"])
def test_derivative_function_matches_iterated_symbolic(spec):
    from qpolylearn import parse_field_spec

    ctx = parse_field_spec(spec)
    n = 3
    for seed in range(3):
        f = random_poly(ctx, n, 3, derive_seed(3, seed))
        for members in [(1,), (2, 3), (1, 2, 3)]:
            fn, _ = f.derivative_function(subset_from_members(members))
            for order in itertools.permutations(members):
                g = f
                for i in order:
                    g = g.discrete_derivative(i)
                assert all(fn(x) == g.evaluate(x) for x in all_points(ctx, n))


def test_full_order_derivative_is_top_coefficient(f3):
    # |S| = d: the derivative along S is the constant alpha_S
    for seed in range(10):
        f = random_poly(f3, 4, 3, derive_seed(4, seed))
        for members in [(1, 2, 3), (2, 3, 4), (1, 3, 4)]:
            mask = subset_from_members(members)
            fn, _ = f.derivative_function(mask)
            want = f.coeff(mask)
            assert all(fn(x) == want for x in all_points(f3, 4))


# ---------------------------------------------------------------------
# random generation and equality
# ---------------------------------------------------------------------

def test_random_poly_deterministic(f4):
    a = random_poly(f4, 4, 2, 123)
    b = random_poly(f4, 4, 2, 123)
    assert poly_equal(a, b)
    c = random_poly(f4, 4, 2, 124)
    assert not poly_equal(a, c)  # astronomically unlikely to collide


def test_random_poly_degree_zero(f2):
    outcomes = {random_poly(f2, 1, 0, s).coeff(0) for s in range(16)}
    assert outcomes == {0, 1}


def test_coefficient_count():
    assert coefficient_count(4, 2) == 11
    assert coefficient_count(3, 3) == 8
    assert coefficient_count(5, 0) == 1


def test_poly_equal_semantics(f3, f5):
    f = mk(f3, 2, 2, {(1,): 2})
    assert poly_equal(f, mk(f3, 2, 2, {(1,): 2, (2,): 0}))
    assert not poly_equal(f, mk(f3, 2, 2, {(1,): 1}))
    with pytest.raises(ContextMismatch):
        poly_equal(f, mk(f5, 2, 2, {(1,): 2}))
    with pytest.raises(ContextMismatch):
        poly_equal(f, mk(f3, 3, 2, {(1,): 2}))


def test_add_context_mismatch(f3, f5):
    with pytest.raises(ContextMismatch):
        mk(f3, 2, 1, {}) + mk(f5, 2, 1, {})


# ---------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------

def test_json_round_trip(f4):
    f = random_poly(f4, 3, 2, 77)
    g = MultilinearPoly.from_json(f.to_json())
    assert g.ctx == f4 and g.n == 3 and g.d == 2
    assert poly_equal(f, g)


def test_serializer_canonical_order(f2):
    f = mk(f2, 3, 2, {(2, 3): 1, (1,): 1, (): 1, (1, 3): 1})
    doc = f.to_dict()
    assert [e["S"] for e in doc["coeffs"]] == [[], [1], [1, 3], [2, 3]]
    assert doc["field"] == {"p": 2, "r": 1, "modulus": [0, 1]}


def test_parser_rejections():
    base = {
        "field": {"p": 2, "r": 2, "modulus": [1, 1, 1]},
        "n": 3,
        "d": 2,
        "coeffs": [{"S": [1, 2], "alpha": 3}],
    }
    ok = MultilinearPoly.from_dict(base)
    assert ok.coeff(subset_from_members((1, 2))) == 3

    too_big = dict(base, coeffs=[{"S": [1, 2, 3], "alpha": 1}])
    with pytest.raises(ValueError, match="degree"):
        MultilinearPoly.from_dict(too_big)

    dup = dict(base, coeffs=[{"S": [1, 2], "alpha": 3}, {"S": [1, 2], "alpha": 1}])
    with pytest.raises(ValueError, match="duplicate"):
        MultilinearPoly.from_dict(dup)

    out_of_range = dict(base, coeffs=[{"S": [1], "alpha": 4}])
    with pytest.raises(ValueError, match="outside"):
        MultilinearPoly.from_dict(out_of_range)

    unsorted = dict(base, coeffs=[{"S": [2, 1], "alpha": 1}])
    with pytest.raises(ValueError, match="increasing"):
        MultilinearPoly.from_dict(unsorted)

    bad_member = dict(base, coeffs=[{"S": [4], "alpha": 1}])
    with pytest.raises(ValueError, match="exceeds"):
        MultilinearPoly.from_dict(bad_member)

    with pytest.raises(ValueError, match="malformed"):
        MultilinearPoly.from_dict({"n": 3})


def test_from_json_string(f3):
    doc = json.dumps({
        "field": {"p": 3, "r": 1, "modulus": [0, 1]},
        "n": 2,
        "d": 1,
        "coeffs": [{"S": [], "alpha": 2}, {"S": [2], "alpha": 1}],
    })
    f = MultilinearPoly.from_json(doc)
    assert f.evaluate((0, 1)) == 0  # 2 + 1 mod 3

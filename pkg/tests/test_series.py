import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane.coeff import ONE, ZERO, QQi, make_q, parse_scalar
from qplane.series import (
    Series1,
    Series2,
    SeriesError,
    UnknownCoefficient,
    diff_quot_u,
    diff_quot_v,
    divide_by_var,
    divide_diagonal,
    join_axes,
    project_Pd,
    split_axes,
    translate_q,
)

from strategies import qparams, scalars, series1, series2

N = 8
Q = make_q(parse_scalar("1/2"))


def s1(*cs, trunc=N):
    return Series1(cs, trunc)


def s2(terms, trunc=N):
    return Series2(terms, trunc)


# one variable

def test_project_examples():
    assert project_Pd(s1(0, 1, 0, 1), 2) == s1(0, 0, 0, 1)
    f = s1(3, 1, 4, 1, 5)
    assert project_Pd(f, 0) == f
    assert project_Pd(s1(1, 1, 1), 3).is_zero()


def test_project_beyond_window_raises():
    with pytest.raises(SeriesError):
        project_Pd(s1(1, 2, trunc=2), 5)


def test_translate_examples():
    assert translate_q(s1(0, 0, 1), Q) == s1(0, 0, Q.pow(2))
    assert translate_q(s1(1), Q) == s1(1)
    f = s1(1, 1)
    assert translate_q(project_Pd(f, 1), Q) == project_Pd(translate_q(f, Q), 1) == s1(0, Q.q)


def test_divide_by_var_examples():
    assert divide_by_var(s1(0, 0, 1, 1), 1) == Series1([0, 1, 1], N - 1)
    f = s1(2, 3)
    assert divide_by_var(f, 0) == f
    with pytest.raises(SeriesError, match=r"not in O\(2\)"):
        divide_by_var(s1(0, 1), 2)


def test_unknown_coefficients_are_not_zero():
    f = s1(1, 2, trunc=2)
    assert f[2] == ZERO
    with pytest.raises(UnknownCoefficient):
        f[3]
    assert Series1([1, 2])[7] == ZERO  # polynomials are exact everywhere


def test_product_window():
    f, g = s1(1, 1, trunc=3), s1(1, -1, trunc=5)
    h = f * g
    assert h.trunc == 3 and h == Series1([1, 0, -1], 3)


def test_series1_json_roundtrip():
    f = Series1([QQi(1, 2), 0, QQi(-3)], 4)
    assert Series1.from_json(f.to_json()) == f
    p = Series1([1, 0, 5])
    assert Series1.from_json(p.to_json()) == p


@given(series1(), st.integers(0, N + 1))
def test_project_idempotent_with_polynomial_kernel(f, d):
    p = project_Pd(f, d)
    assert project_Pd(p, d) == p
    low = f - p
    assert all(low[k] == ZERO for k in range(d, N + 1))
    assert project_Pd(low, d).is_zero()


@given(series1(), st.integers(0, N))
def test_divide_after_multiply(f, d):
    assert divide_by_var(f.shift_up(d), d) == f


@given(series1(), qparams, qparams)
def test_translate_composition(f, q1, q2):
    assert translate_q(translate_q(f, q1), q2) == translate_q(f, q1.q * q2.q)


@given(series1(), qparams, st.integers(0, N))
def test_translate_commutes_with_projection(f, q, d):
    assert translate_q(project_Pd(f, d), q) == project_Pd(translate_q(f, q), d)


# two variables

def test_difference_quotient_examples():
    theta = s2({(1, 1): 1, (2, 0): 1})
    assert diff_quot_u(theta).agrees(s2({(0, 1): 1, (1, 0): 1}))
    assert diff_quot_u(s2({(0, 2): 1})).is_zero()
    step = diff_quot_u(s2({(2, 1): 1}))
    assert step.agrees(s2({(1, 1): 1}))
    assert diff_quot_v(step).agrees(s2({(1, 0): 1}))


def test_split_examples():
    a, b, m = split_axes(s2({(1, 0): 1, (0, 1): 1, (1, 1): 1}))
    assert a.agrees(Series1([0, 1])) and b.agrees(Series1([0, 1])) and m.agrees(Series2.const(1))
    a, b, m = split_axes(s2({(2, 2): 1}))
    assert a.is_zero() and b.is_zero() and m.agrees(s2({(1, 1): 1}))
    with pytest.raises(SeriesError):
        split_axes(s2({(1, 0): 1, (0, 0): 1}))


def test_divide_diagonal_examples():
    assert divide_diagonal(s2({(0, 1): 1, (1, 0): -1})).agrees(Series2.const(1))
    assert divide_diagonal(s2({(0, 2): 1, (2, 0): -1})).agrees(s2({(0, 1): 1, (1, 0): 1}))
    with pytest.raises(SeriesError, match="not diagonal-divisible"):
        divide_diagonal(s2({(1, 1): 1}))


def test_restrictions():
    h = s2({(0, 0): 1, (2, 0): 3, (0, 1): 5, (1, 1): 7})
    assert h.eval_v0().agrees(Series1([1, 0, 3]))
    assert h.eval_u0().agrees(Series1([1, 5]))
    assert h.dv_at_v0().agrees(Series1([5, 7]))
    assert h.du_at_u0().agrees(Series1([0, 7]))
    # h(t, 2t) = 1 + 10 t + (3 + 14) t^2
    assert h.on_line(1, 2).agrees(Series1([1, 10, 17]))


def test_series2_json_roundtrip():
    h = s2({(0, 0): QQi(1, -1), (2, 3): 4}, trunc=6)
    assert Series2.from_json(h.to_json()) == h
    p = Series2({(1, 2): 3})
    assert Series2.from_json(p.to_json()) == p


@given(series2())
def test_split_join_roundtrip(h):
    h = h - Series2.const(h.at00(), h.trunc)
    a, b, m = split_axes(h)
    assert join_axes(a, b, m).agrees(h)


@given(series2())
def test_difference_quotient_reassembly(h):
    u = Series2.monomial(1, 0)
    back = (u * diff_quot_u(h)) + Series2.from_v(h.eval_u0())
    assert back.agrees(h)


@given(series2())
def test_divide_diagonal_inverts_multiplication(h):
    lin = s2({(0, 1): 1, (1, 0): -1}, None)
    prod = lin * h
    assert divide_diagonal(prod).agrees(h, h.trunc)
    assert (lin * divide_diagonal(prod)).agrees(prod)


@given(series2(), scalars, scalars)
def test_div_linear_general(h, a, b):
    if not a and not b:
        return
    lin = Series2({(1, 0): a, (0, 1): b})
    assert (lin * h).div_linear(a, b).agrees(h, h.trunc - 1)

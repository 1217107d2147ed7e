import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane import random_inputs as R
from qplane.coeff import ONE, ZERO, make_q, parse_scalar
from qplane.graded_sheaf import (
    GENERATORS,
    CompatibilityError,
    FqElement,
    GermPair,
    GradedElement,
    alpha_d,
    decompose,
    fq_mul,
    fq_project_pd,
    generator_action_fq,
    generator_action_graded,
    graded_component,
    lambda_U,
    mult_w,
    mult_z,
    op_M_x,
    op_M_y,
    op_N_x,
    op_N_y,
    raw_M_x,
    raw_M_y,
    raw_N_x,
    raw_N_y,
)
from qplane.qalgebra import QSeries, qmul
from qplane.series import Series1

from strategies import contractive_q, qparams, seeds

N = 6
Q = make_q(parse_scalar("1/2"))


def pair(f, g, trunc=N):
    return GermPair(Series1(f, trunc), Series1(g, trunc))


def graded(f, g, d, trunc=N):
    return GradedElement(pair(f, g, trunc), d)


Z = [0, 1]
W = [0, 1]


def test_germ_pair_requires_matching_constants():
    with pytest.raises(CompatibilityError):
        pair([1], [2])


def test_multiplication_operators():
    assert mult_z(graded([1], [1], 0)).pair.agrees(pair([0, 1], []))
    assert mult_w(graded(Z, W, 0)).pair.agrees(pair([], [0, 0, 1]))


@given(seeds, st.integers(0, 4))
def test_z_and_w_annihilate_each_other(seed, d):
    h = R.graded_element(random.Random(seed), d, N)
    assert mult_z(mult_w(h)).is_zero() and mult_w(mult_z(h)).is_zero()


def test_degree_raising_examples():
    h = graded([0, 0, 1], [0, 0, 1], 2)
    assert op_N_x(h).pair.agrees(pair([0, 1], [0]))
    assert op_M_x(h).pair.agrees(pair([0], [0, 1]))
    for d in range(4):
        c = Q.pow(d + 1)
        out = op_N_y(graded([0], [0, 1], d), Q)
        assert out.degree == d + 1
        assert out.pair.agrees(pair([c], [c]))


@given(seeds, st.integers(0, 5), qparams)
def test_reduced_operators_match_raw_forms(seed, d, q):
    h = R.graded_element(random.Random(seed), d, N + d + 2)
    r = h.raw()
    for raw, red in ((raw_N_x(r, d), op_N_x(h)), (raw_N_y(r, d, q), op_N_y(h, q)),
                     (raw_M_x(r, d), op_M_x(h)), (raw_M_y(r, d, q), op_M_y(h, q))):
        assert red.degree == d + 1
        assert GradedElement.from_raw(raw, d + 1).agrees(red)


@given(seeds, st.integers(0, 5))
def test_d_isomorphism(seed, d):
    h = R.graded_element(random.Random(seed), d, N)
    assert GradedElement.from_raw(h.raw(), d).agrees(h)
    # it intertwines multiplication by z and by w
    assert mult_z(h).raw().agrees(GermPair(h.raw().f.shift_up(1), Series1.zero()))
    assert mult_w(h).raw().agrees(GermPair(Series1.zero(), h.raw().g.shift_up(1)))


# the fibered product

def test_grid_compatibility_is_enforced():
    F = [Series1([1, 1], N)] + [Series1.zero(N)] * N
    G = [Series1([1], N)] + [Series1.zero(N)] * N
    with pytest.raises(CompatibilityError):
        FqElement(F, G, N, Q)


def test_projection_examples():
    h = graded([1, 2, 3], [1, -1], 2)
    a = alpha_d(h, N, Q)
    assert fq_project_pd(a, 2) == a
    for m in range(N + 1):
        if m != 2:
            assert fq_project_pd(a, m).is_zero()
    x = FqElement.x(N, Q)
    assert fq_project_pd(x, 0) == x
    assert fq_project_pd(FqElement.zero(N, Q), 3).is_zero()
    assert fq_project_pd(x, N + 1).is_zero()


def test_alpha_examples():
    assert alpha_d(graded([1], [1], 0), N, Q) == FqElement.unit(N, Q)
    # the reduced pair (1, 1) in degree 1 is the raw pair (z, w)
    a = alpha_d(graded([1], [1], 1), N, Q)
    assert a.F[1].agrees(Series1([0, 1])) and a.G[1].agrees(Series1([0, 1]))
    assert all(a.F[k].is_zero() for k in range(N + 1) if k != 1)
    assert a == FqElement.from_grid({(1, 1): 1}, N, Q)


def test_product_examples():
    x, y = FqElement.x(N, Q), FqElement.y(N, Q)
    xy = FqElement.from_grid({(1, 1): 1}, N, Q)
    assert fq_mul(x, y) == xy
    assert fq_mul(y, x) == xy.scale(Q.q)
    xi = R.fq_element(random.Random(1), N, Q)
    assert fq_mul(FqElement.unit(N, Q), xi) == xi == fq_mul(xi, FqElement.unit(N, Q))


def test_generator_examples():
    one = graded([1], [1], 0)
    low, high = generator_action_graded("L_x", one, Q)
    assert low.pair.agrees(pair([0, 1], [0])) and high.is_zero()
    low, high = generator_action_graded("R_y", one, Q)
    assert low.pair.agrees(pair([0], [0, 1])) and high.is_zero()


def _square_oracle(a: FqElement, b: FqElement) -> FqElement:
    """Product through qmul at a total-degree window covering the square grid."""
    N, q = a.trunc, a.q
    big = qmul(QSeries(a.grid(), 2 * N, q), QSeries(b.grid(), 2 * N, q))
    return FqElement.from_grid({k: v for k, v in big.c.items() if k[0] <= N and k[1] <= N}, N, q)


@given(seeds, qparams)
def test_fq_product_matches_qmul_oracle(seed, q):
    rng = random.Random(seed)
    a, b = R.fq_element(rng, 4, q), R.fq_element(rng, 4, q)
    assert fq_mul(a, b) == _square_oracle(a, b)


@given(seeds, qparams)
def test_decomposition(seed, q):
    xi = R.fq_element(random.Random(seed), N, q)
    total = FqElement.zero(N, q)
    for d in range(N + 1):
        pd = fq_project_pd(xi, d)
        total = total + pd
        assert fq_project_pd(pd, d) == pd
        for m in range(N + 1):
            if m != d:
                assert fq_project_pd(pd, m).is_zero()
    assert total == xi
    rebuilt = FqElement.zero(N, q)
    for h in decompose(xi):
        rebuilt = rebuilt + alpha_d(h, N, q)
    assert rebuilt == xi


@given(seeds)
def test_lambda_is_a_left_inverse_of_alpha0(seed):
    fg = R.germ_pair(random.Random(seed), N)
    assert lambda_U(alpha_d(GradedElement(fg, 0), N, Q)).agrees(fg)


@given(seeds, st.integers(0, N))
def test_alpha_is_injective_with_component_inverse(seed, d):
    h = R.graded_element(random.Random(seed), d, N)
    assert graded_component(alpha_d(h, N, Q), d).agrees(h, N - d)


@given(seeds)
def test_radical_characterization(seed):
    xi = R.fq_element(random.Random(seed), N, Q)
    rad = xi - fq_project_pd(xi, 0)
    assert fq_project_pd(rad, 0).is_zero()
    assert lambda_U(rad).is_zero()
    assert (lambda_U(xi).is_zero()) == fq_project_pd(xi, 0).is_zero()


@given(seeds, st.integers(0, 6), st.sampled_from(GENERATORS), contractive_q)
def test_generator_actions_match_products(seed, d, gen, q):
    M = max(N, d + 2)
    h = R.graded_element(random.Random(seed), d, M)
    low, high = generator_action_graded(gen, h, q)
    prod = generator_action_fq(gen, h, M, q)
    for m in range(M + 1):
        c = graded_component(prod, m)
        if m == d:
            assert c.agrees(low)
        elif m == d + 1:
            assert c.agrees(high)
        else:
            assert c.is_zero()


@given(seeds)
def test_monomial_reconstruction(seed):
    xi = R.fq_element(random.Random(seed), N, Q)
    acc = FqElement.zero(N, Q)
    for (i, k), v in xi.grid().items():
        acc = acc + FqElement.from_grid({(i, k): ONE}, N, Q).scale(v)
    assert acc == xi


def test_json_roundtrip():
    xi = R.fq_element(random.Random(3), 4, Q)
    assert FqElement.from_json(xi.to_json()) == xi
    h = graded([1, 2], [1, 5], 3)
    assert GradedElement.from_json(h.to_json()).agrees(h)

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane import random_inputs as R
from qplane.coeff import ONE, make_q, parse_scalar
from qplane.complexes import (
    DMN_NAMES,
    LEFT,
    RIGHT,
    CocycleError,
    DiagParams,
    FormalChainElement,
    FormalComplex,
    cell_less,
    coboundary_criterion,
    cohomology_H1_split,
    diag_d0,
    diag_d1,
    diag_pi,
    dmn_identities,
    gamma_correction,
    graded_d0,
    graded_d1,
    homotopy_tau,
    index_order,
    op_T,
    op_T_inverse,
    op_Tinv_d0,
    pair_agrees,
    pair_is_zero,
    phi,
    psi,
    tau0,
    tau1,
    theta_conditions,
    theta_to_alpha,
)
from qplane.graded_sheaf import GermPair, GradedElement
from qplane.quadruples import Quadruple, tensor_embed
from qplane.series import Series1, Series2

from strategies import qparams, seeds

N = 6
Q = make_q(parse_scalar("1/2"))
cells = st.tuples(st.integers(0, 3), st.integers(0, 3))

U, V = Series2.monomial(1, 0), Series2.monomial(0, 1)
O = Series2.zero()


def params(d, l, q=Q, trunc=N):
    return DiagParams(d, l, q, trunc)


def draw(seed, *kinds, trunc=N):
    rng = random.Random(seed)
    gens = {"quad": R.quadruple, "free": R.free_quadruple, "pair": R.germ_pair}
    return [gens[k](rng, trunc) for k in kinds]


# the diagonal complex

@pytest.mark.parametrize("d,l", [(0, 0), (1, 2), (3, 0)])
def test_d0_of_constant(d, l):
    p = params(d, l)
    c, c2 = p.c, p.c2
    row1, row2 = diag_d0(Quadruple.const(1), p)
    assert row1.agrees(Quadruple(O, V.scale(-c2), U, U - V.scale(c2), check=False))
    assert row2.agrees(Quadruple(V - U.scale(c), U.scale(-c), V, O, check=False))


@given(seeds, cells, qparams)
def test_d1_d0_and_pi_d1(seed, cell, q):
    z, a, b = draw(seed, "quad", "quad", "quad")
    p = params(*cell, q)
    assert diag_d1(diag_d0(z, p), p).is_zero()
    assert diag_pi(diag_d1((a, b), p), p).is_zero()


def test_T_examples():
    p = params(1, 2)
    zero = Quadruple.zero(N, compat=False)
    assert pair_is_zero(op_T(zero, p))
    theta = Quadruple.free(O, Series2.const(1), O, O)
    zeta, eta = op_T(theta, p)
    c, c2 = p.c, p.c2
    assert zeta.agrees(Quadruple(O, V.scale(-c2), O, V.scale(-c2), check=False))
    assert eta.agrees(Quadruple(U.scale(-c), U.scale(-c), O, O, check=False))


@given(seeds, cells, qparams)
def test_T_round_trips(seed, cell, q):
    theta, alpha, fg = draw(seed, "free", "quad", "pair")
    p = params(*cell, q)
    beta = op_T(theta, p)
    assert diag_d1(beta, p).is_zero()
    assert op_T_inverse(beta, p).agrees(theta)
    a, b = diag_d0(alpha, p)
    s, t = op_T(psi(fg, p), p)
    cocycle = (a + s, b + t)
    assert pair_agrees(op_T(op_T_inverse(cocycle, p), p), cocycle)


def test_T_inverse_rejects_non_cocycles():
    p = params(0, 0)
    z = Quadruple.const(1)
    with pytest.raises(CocycleError, match="not a cocycle"):
        op_T_inverse((z, Quadruple.zero(N)), p)


def test_Tinv_d0_examples():
    p = params(1, 1)
    theta = op_Tinv_d0(Quadruple.const(1), p)
    assert theta.agrees(Quadruple.free(O, Series2.const(1), Series2.const(1), O))
    zw = GradedElement(GermPair(Series1([0, 1]), Series1([0, 1])), 0)
    one = GradedElement(GermPair(Series1([1]), Series1([1])), 0)
    theta = op_Tinv_d0(tensor_embed(zw, one), p)
    # alpha = (u, u, u, u); theta4 = (alpha4)_w2 - q^(l+1) (alpha4)_w1 = -q^(l+1)
    assert theta.agrees(Quadruple.free(Series2.const(1), U, U, Series2.const(-p.c2)))


@given(seeds, cells, qparams)
def test_Tinv_d0_closed_form(seed, cell, q):
    (alpha,) = draw(seed, "quad")
    p = params(*cell, q)
    theta = op_Tinv_d0(alpha, p)
    assert pair_agrees(op_T(theta, p), diag_d0(alpha, p))
    assert theta_conditions(theta, p) == []
    assert theta_to_alpha(theta, p).agrees(alpha)


@given(seeds, cells)
def test_conditions_detect_obstructions(seed, cell):
    (fg,) = draw(seed, "pair")
    p = params(*cell)
    if fg.f.diff_quot().is_zero() and fg.g.diff_quot().is_zero():
        return
    assert theta_conditions(psi(fg, p), p)


# cohomology

@given(seeds, cells)
def test_phi_psi(seed, cell):
    (fg,) = draw(seed, "pair")
    p = params(*cell)
    assert phi(psi(fg, p), p).agrees(fg)


@given(seeds, cells, qparams)
def test_H1_split(seed, cell, q):
    alpha, fg = draw(seed, "quad", "pair")
    p = params(*cell, q)
    rep, a = cohomology_H1_split(op_T(psi(fg, p), p), p)
    assert rep.agrees(fg) and a.is_zero()
    rep, a = cohomology_H1_split(diag_d0(alpha, p), p)
    assert rep.is_zero() and a.agrees(alpha)
    x, y = diag_d0(alpha, p)
    s, t = op_T(psi(fg, p), p)
    rep, a = cohomology_H1_split((x + s, y + t), p)
    assert rep.agrees(fg) and a.agrees(alpha)


@given(seeds, cells, qparams)
def test_H0(seed, cell, q):
    (alpha,) = draw(seed, "quad")
    p = params(*cell, q)
    image = diag_d0(alpha, p)
    if not alpha.is_zero():
        assert not pair_is_zero(image)
    assert theta_to_alpha(op_T_inverse(image, p), p).agrees(alpha)


def test_tau0_example():
    p = params(2, 1)
    fg = GermPair(Series1([0, 1]), Series1([0, 1]))
    assert tau0(fg, p).agrees(Quadruple(U, U + V, O, V))


@given(seeds, st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda c: sum(c) <= 4), qparams)
def test_homotopy(seed, cell, q):
    z, fg = draw(seed, "quad", "pair")
    p = params(*cell, q)
    assert diag_pi(tau0(fg, p), p).pair.agrees(fg)
    t0, ab = homotopy_tau(z, p)
    assert (t0 + diag_d1(ab, p)).agrees(z)


@given(seeds, cells)
def test_H2_kernel_of_pi_is_exact(seed, cell):
    (z,) = draw(seed, "quad")
    p = params(*cell)
    k = z - tau0(diag_pi(z, p).pair, p)
    assert diag_pi(k, p).is_zero()
    assert diag_d1(tau1(k, p), p).agrees(k)


# the coboundary criterion

@given(seeds, cells)
def test_criterion_on_coboundaries(seed, cell):
    (alpha,) = draw(seed, "quad")
    p = params(*cell)
    res = coboundary_criterion(diag_d0(alpha, p), p)
    assert res and res.via_M and res.via_N
    assert pair_agrees(diag_d0(res.preimage, p), diag_d0(alpha, p))


@given(seeds, cells)
def test_criterion_on_obstructions(seed, cell):
    (fg,) = draw(seed, "pair")
    if not (any(fg.f.coeffs[1:]) and any(fg.g.coeffs[1:])):
        return
    p = params(*cell)
    assert not coboundary_criterion(op_T(psi(fg, p), p), p)


def test_criterion_on_zero():
    p = params(1, 1)
    zero = Quadruple.zero(N)
    res = coboundary_criterion((zero, zero), p)
    assert res.via_M and res.via_N and res.preimage.is_zero()


# one-sided complexes

def _chain(rng, depth, trunc, poly, side):
    layers = []
    for _ in range(depth):
        h = R.series2(rng, trunc)
        layers.append(Series2(h.c, None) if poly else h)
    return FormalChainElement(layers, side)


sides = st.sampled_from([LEFT, RIGHT])
models = st.booleans()


@given(seeds, sides, models, qparams)
def test_formal_identities_and_witnesses(seed, side, poly, q):
    rng = random.Random(seed)
    C = FormalComplex(side, q)
    h, f, g = (_chain(rng, 6, 5, poly, side) for _ in range(3))
    assert C.d1(C.d0(h)).is_zero()
    assert C.pi(C.d1((f, g))).is_zero()
    w = C.d1_witness(C.d0(h))
    assert w.agrees(h)
    a, b = C.d0(w)
    fg = C.d0(h)
    assert a.agrees(fg[0]) and b.agrees(fg[1])
    k = C.d1((f, g))
    assert C.d1(C.pi_witness(k)).agrees(k)


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_formal_witness_rejects(side):
    C = FormalComplex(side, Q)
    one = FormalChainElement([Series2.const(1)] * 3, side)
    with pytest.raises(CocycleError):
        C.d1_witness((one, one))
    with pytest.raises(CocycleError):
        C.pi_witness(one)


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_formal_zero_witness(side):
    C = FormalComplex(side, Q)
    zero = FormalChainElement([Series2.zero()] * 3, side)
    assert C.d1_witness((zero, zero)).is_zero()
    a, b = C.pi_witness(zero)
    assert a.is_zero() and b.is_zero()


# graded assembly

def test_index_order():
    assert index_order(2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert index_order(1, mirrored=True) == [(0, 0), (1, 0), (0, 1)]
    assert cell_less((0, 2), (1, 1)) and not cell_less((1, 1), (0, 2))
    assert cell_less((1, 1), (0, 2), mirrored=True)


@given(seeds, st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda c: sum(c) <= 6), qparams)
def test_dmn_identities(seed, cell, q):
    (z,) = draw(seed, "quad", trunc=5)
    for name, (lhs, rhs) in dmn_identities(z, *cell, q).items():
        assert name in DMN_NAMES
        assert lhs.agrees(rhs), name


def test_dmn_count():
    z = Quadruple.const(1, N)
    assert len(dmn_identities(z, 2, 2, Q)) == 5
    assert len(dmn_identities(z, 0, 0, Q)) == 0


@given(seeds, qparams)
def test_graded_d1_d0(seed, q):
    rng = random.Random(seed)
    D = 4
    xi = {c: R.quadruple(rng, 4) for c in index_order(D)}
    out = graded_d1(graded_d0(xi, D, q), D, q)
    assert all(v.is_zero() for v in out.values())


@given(seeds, st.integers(0, 5))
def test_graded_d0_lower_triangular(seed, k):
    D = 3
    order = index_order(D)
    cell = order[k]
    xi = {c: Quadruple.zero(4) for c in order}
    xi[cell] = R.quadruple(random.Random(seed), 4)
    out = graded_d0(xi, D, Q)
    for c in order:
        if cell_less(c, cell):
            a, b = out[c]
            assert a.is_zero() and b.is_zero()


# corrections

def _ge(f, g, d):
    return GradedElement(GermPair(Series1(f, 8), Series1(g, 8)), d)


def test_gamma_examples():
    zw = _ge([0, 1], [0, 1], 0)
    for m in range(9):
        g = gamma_correction(zw, zw, m, 8, Q)
        if m == 1:
            # (x + y)^2 - (x^2 + y^2) = (1 + q) x y
            assert g.pair.agrees(GermPair(Series1([ONE + Q.q]), Series1([ONE + Q.q])))
        else:
            assert g.is_zero()
    one = _ge([1], [1], 0)
    assert all(gamma_correction(one, one, m, 8, Q).is_zero() for m in range(1, 9))
    with pytest.raises(ValueError):
        gamma_correction(one, one, 9, 8, Q)


@given(seeds, st.integers(0, 2), st.integers(0, 2), qparams)
def test_gamma_vanishes_in_low_degree(seed, d, l, q):
    rng = random.Random(seed)
    z, e = R.graded_element(rng, d, 6), R.graded_element(rng, l, 6)
    for m in range(d + l + 1):
        assert gamma_correction(z, e, m, 6, q).is_zero()

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane import random_inputs as R
from qplane.coeff import make_q, parse_scalar
from qplane.graded_sheaf import GermPair, GradedElement, op_M_x, op_M_y, op_N_x, op_N_y
from qplane.qalgebra import UsageError
from qplane.quadruples import (
    CompatibilityError,
    Quadruple,
    elementary_decomposition,
    lifted_ops,
    mult_vars,
    op_N_x1,
    op_N_y1,
    pi_dl,
    reconstruct,
    tensor_embed,
)
from qplane.series import Series1, Series2

from strategies import qparams, quadruples, seeds

N = 6
Q = make_q(parse_scalar("1/3"))


def ge(f, g, d=0, trunc=None):
    return GradedElement(GermPair(Series1(f, trunc), Series1(g, trunc)), d)


ONE_PAIR = ge([1], [1])
ZW = ge([0, 1], [0, 1])
U, V = Series2.monomial(1, 0), Series2.monomial(0, 1)
UV = Series2.monomial(1, 1)


def test_tensor_examples():
    assert tensor_embed(ONE_PAIR, ONE_PAIR).agrees(Quadruple.const(1))
    assert tensor_embed(ZW, ZW).agrees(Quadruple(UV, UV, UV, UV))
    assert tensor_embed(ZW, ONE_PAIR).agrees(Quadruple(U, U, U, U))


def test_variable_actions():
    one = Quadruple.const(1)
    zero = Series2.zero()
    assert mult_vars("z1", one).agrees(Quadruple(U, U, zero, zero))
    assert mult_vars("w2", one).agrees(Quadruple(zero, V, zero, V))
    with pytest.raises(UsageError):
        mult_vars("z1", one.as_free())
    with pytest.raises(ValueError):
        mult_vars("t", one)


@given(quadruples())
def test_variable_actions_stay_compatible_and_z2_w2_vanish(z):
    for v in ("z1", "z2", "w1", "w2"):
        assert mult_vars(v, z).is_compatible()
    assert mult_vars("z2", mult_vars("w2", z)).is_zero()
    assert mult_vars("z1", mult_vars("w1", z)).is_zero()


def test_edge_conditions_detected():
    with pytest.raises(CompatibilityError):
        Quadruple(U, Series2.zero(), Series2.zero(), Series2.zero())
    free = Quadruple.free(U, Series2.zero(), Series2.zero(), Series2.zero())
    assert not free.is_compatible()
    with pytest.raises(UsageError):
        pi_dl(free, 0, 0, Q)


def _monomial_pairs(n=3):
    out = [ONE_PAIR]
    for k in range(1, n + 1):
        out.append(ge([0] * k + [1], [0]))
        out.append(ge([0], [0] * k + [1]))
    return out


@pytest.mark.parametrize("d", [0, 1, 3])
def test_lifted_operators_on_monomial_tensors(d):
    for a in _monomial_pairs():
        for b in _monomial_pairs():
            a_d, b_d = GradedElement(a.pair, d), GradedElement(b.pair, d)
            t = tensor_embed(a_d, b_d)
            assert lifted_ops("M_x2", t, d, Q).agrees(tensor_embed(a_d, op_M_x(b_d)))
            assert lifted_ops("M_y2", t, d, Q).agrees(tensor_embed(a_d, op_M_y(b_d, Q)))
            assert lifted_ops("N_x1", t, d, Q).agrees(tensor_embed(op_N_x(a_d), b_d))
            assert lifted_ops("N_y1", t, d, Q).agrees(tensor_embed(op_N_y(a_d, Q), b_d))


@given(seeds)
def test_constant_first_factor_kills_N_x1(seed):
    eta = R.graded_element(random.Random(seed), 0, N)
    assert op_N_x1(tensor_embed(ONE_PAIR, eta)).is_zero()


@given(quadruples(), st.integers(0, 4), qparams)
def test_N_y1_prefactor(z, d, q):
    assert op_N_y1(z, d + 1, q).agrees(op_N_y1(z, d, q).scale(q.q))


@given(quadruples(), st.sampled_from(["N_x1", "N_y1", "M_x2", "M_y2"]), st.integers(0, 3))
def test_lifted_operators_preserve_compatibility(z, which, k):
    assert lifted_ops(which, z, k, Q).is_compatible()


@pytest.mark.parametrize("d,l", [(0, 0), (1, 2), (3, 1)])
def test_pi_examples(d, l):
    out = pi_dl(tensor_embed(ZW, ZW), d, l, Q)
    assert out.degree == d + l
    assert out.pair.agrees(GermPair(Series1([0, 0, Q.pow(d)]), Series1([0, 0, Q.pow(l)])))


@given(seeds)
def test_pi_of_unit_tensor(seed):
    fg = R.germ_pair(random.Random(seed), N)
    assert pi_dl(tensor_embed(ONE_PAIR, GradedElement(fg, 0)), 0, 0, Q).pair.agrees(fg)


@given(quadruples(), st.integers(0, 3), st.integers(0, 3), qparams)
def test_pi_kills_first_relation(z, d, l, q):
    rel = mult_vars("z2", z) - mult_vars("z1", z).scale(q.pow(d))
    assert pi_dl(rel, d, l, q).is_zero()


@given(quadruples(), quadruples(), st.integers(0, 3), st.integers(0, 3))
def test_pi_linear(a, b, d, l):
    assert pi_dl(a + b, d, l, Q).agrees(pi_dl(a, d, l, Q) + pi_dl(b, d, l, Q))


@given(seeds, seeds)
def test_tensors_are_compatible(s1, s2):
    a = R.graded_element(random.Random(s1), 0, N)
    b = R.graded_element(random.Random(s2), 0, N)
    assert tensor_embed(a, b).is_compatible()


@given(quadruples())
def test_elementary_reconstruction(z):
    assert reconstruct(elementary_decomposition(z), z.trunc).agrees(z)


@given(quadruples())
def test_json_roundtrip(z):
    assert Quadruple.from_json(z.to_json()) == z

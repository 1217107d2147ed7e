"""The quantum-plane product, checked against a word-rewriting oracle."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane.coeff import ONE, QQi, make_q, parse_scalar
from qplane.qalgebra import (
    QSeries,
    UsageError,
    dilate_x,
    qmul,
    qmul_left_form,
    qmul_right_form,
    radical_test,
    trivial_character,
)

from strategies import qparams
from qplane import random_inputs as R

Q = make_q(parse_scalar("2/3"))


def rewrite_product(f: QSeries, g: QSeries) -> QSeries:
    """Concatenate words and bubble every 'yx' into q 'xy' one swap at a time."""
    q, N = f.q.q, f.trunc
    out = {}
    for (s, i), a in f.c.items():
        for (t, j), b in g.c.items():
            if s + i + t + j > N:
                continue
            word = list("x" * s + "y" * i + "x" * t + "y" * j)
            coeff = a * b
            swapped = True
            while swapped:
                swapped = False
                for k in range(len(word) - 1):
                    if word[k] == "y" and word[k + 1] == "x":
                        word[k], word[k + 1] = "x", "y"
                        coeff = coeff * q
                        swapped = True
            key = (word.count("x"), word.count("y"))
            out[key] = out.get(key, QQi(0)) + coeff
    return QSeries(out, N, f.q)


def mono(i, k, q=Q, N=8, v=1):
    return QSeries.monomial(i, k, q, N, v)


def test_generators_relation():
    x, y = QSeries.x(Q, 8), QSeries.y(Q, 8)
    assert qmul(y, x) == mono(1, 1).scale(Q.q)
    assert qmul(x, y) == mono(1, 1)


def test_unit():
    f = R.qseries(R.cell_rng(0, "unit"), 8, Q)
    assert qmul(QSeries.one(Q, 8), f) == f == qmul(f, QSeries.one(Q, 8))


def test_associativity_example():
    x, y = QSeries.x(Q, 8), QSeries.y(Q, 8)
    assert qmul(qmul(x, y), y) == qmul(x, qmul(y, y)) == mono(1, 2)


def test_forms_examples():
    x, y = QSeries.x(Q, 8), QSeries.y(Q, 8)
    assert qmul_left_form(y, x) == mono(1, 1).scale(Q.q)
    assert qmul_right_form(mono(2, 0), mono(0, 3)) == mono(2, 3)


def test_character_examples():
    f = QSeries({(0, 0): 3, (1, 0): 1, (1, 1): 1}, 8, Q)
    assert trivial_character(f) == QQi(3)
    assert trivial_character(QSeries.x(Q, 8)) == QQi(0)


def test_radical_examples():
    assert radical_test(QSeries({(1, 0): 1, (0, 2): 1}, 8, Q))
    assert not radical_test(QSeries({(0, 0): 1, (1, 0): 1}, 8, Q))


def test_mismatch_is_usage_error():
    with pytest.raises(UsageError):
        qmul(QSeries.x(Q, 8), QSeries.x(Q, 6))
    with pytest.raises(UsageError):
        qmul(QSeries.x(Q, 8), QSeries.x(make_q(parse_scalar("1/2")), 8))


def test_truncation_drops_high_terms():
    x = QSeries.x(Q, 3)
    assert qmul(qmul(x, x), qmul(x, x)) == QSeries({}, 3, Q)


def test_json_roundtrip():
    f = QSeries({(0, 0): QQi(1, 2), (2, 1): -3}, 5, make_q(parse_scalar("(1+i)/4")))
    assert QSeries.from_json(f.to_json()) == f


def pairs(N=6):
    return st.tuples(qparams, st.integers(0, 2 ** 32 - 1)).map(
        lambda t: _pair(t[0], t[1], N))


def _pair(q, seed, N):
    import random
    rng = random.Random(seed)
    return R.qseries(rng, N, q), R.qseries(rng, N, q), R.qseries(rng, N, q)


@given(pairs())
def test_product_matches_rewriting(fgh):
    f, g, _ = fgh
    assert qmul(f, g) == rewrite_product(f, g)


@given(pairs())
def test_three_forms_agree(fgh):
    f, g, _ = fgh
    p = qmul(f, g)
    assert qmul_left_form(f, g) == p
    assert qmul_right_form(f, g) == p


@given(pairs())
def test_associative_and_distributive(fgh):
    f, g, h = fgh
    assert qmul(qmul(f, g), h) == qmul(f, qmul(g, h))
    assert qmul(f, g + h) == qmul(f, g) + qmul(f, h)
    assert qmul(f + g, h) == qmul(f, h) + qmul(g, h)


@given(pairs())
def test_character_is_multiplicative(fgh):
    f, g, _ = fgh
    assert trivial_character(qmul(f, g)) == trivial_character(f) * trivial_character(g)


@given(pairs())
def test_radical_is_an_ideal(fgh):
    f, _, _ = fgh
    x = QSeries.x(f.q, f.trunc)
    assert radical_test(qmul(x, f)) and radical_test(qmul(f, x))


@given(pairs(8), st.integers(0, 8))
def test_commutation_with_powers(fgh, n):
    f, _, _ = fgh
    q, N = f.q, f.trunc
    g = QSeries({k: v for k, v in f.c.items() if k[1] == 0}, N, q)
    yn, xn = mono(0, n, q, N), mono(n, 0, q, N)
    assert qmul(yn, g) == qmul(dilate_x(g, q.pow(n)), yn)
    h = QSeries({k: v for k, v in f.c.items() if k[0] == 0}, N, q)
    shifted = QSeries({(0, k): v * q.pow(n * k) for (_, k), v in h.c.items()}, N, q)
    assert qmul(h, xn) == qmul(xn, shifted)

"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from qplane import random_inputs as R
from qplane.coeff import QQi, make_q, parse_scalar
from qplane.series import Series1, Series2

Q_VALUES = ["1/2", "1/3", "(1+i)/4", "2/3", "-1/2", "3", "i/2"]
CONTRACTIVE_Q = ["1/2", "1/3", "(1+i)/4", "-2/5", "i/3"]

small_int = st.integers(-5, 5)
scalars = st.builds(QQi, small_int, small_int)
nonzero_scalars = scalars.filter(bool)
qparams = st.sampled_from(Q_VALUES).map(lambda s: make_q(parse_scalar(s)))
contractive_q = st.sampled_from(CONTRACTIVE_Q).map(lambda s: make_q(parse_scalar(s)))
seeds = st.integers(0, 2 ** 32 - 1)


def series1(trunc=8):
    return st.lists(scalars, min_size=trunc + 1, max_size=trunc + 1).map(lambda cs: Series1(cs, trunc))


def series2(trunc=6):
    n = (trunc + 1) * (trunc + 2) // 2
    keys = [(i, d - i) for d in range(trunc + 1) for i in range(d + 1)]
    return st.lists(scalars, min_size=n, max_size=n).map(lambda cs: Series2(dict(zip(keys, cs)), trunc))


def seeded(gen, *args):
    """A strategy drawing an object from one of the seeded generators."""
    return seeds.map(lambda s: gen(random.Random(s), *args))


def quadruples(trunc=6):
    return seeded(R.quadruple, trunc)


def germ_pairs(trunc=8):
    return seeded(R.germ_pair, trunc)

"""Seeded random inputs for the identity suites.

Every generator takes a ``random.Random``.  Coefficients are Gaussian
integers a + b*i with a, b drawn uniformly from [-bound, bound], consumed in
the order the docstrings state, so a seed reproduces the same inputs in any
implementation that follows the same stream.
"""

from __future__ import annotations

import random
from typing import Dict, Tuple

from .coeff import QParam, QQi
from .graded_sheaf import FqElement, GermPair, GradedElement
from .qalgebra import QSeries
from .quadruples import Quadruple
from .series import Series1, Series2

BOUND = 3


def cell_rng(seed: int, suite: str, d: int = 0, l: int = 0) -> random.Random:
    """The stream used for one (suite, cell) pair."""
    return random.Random(f"{seed}:{suite}:{d}:{l}")


def scalar(rng: random.Random, bound: int = BOUND) -> QQi:
    re = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound)
    return QQi(re, im)


def series1(rng: random.Random, trunc: int, bound: int = BOUND) -> Series1:
    """Coefficients of degree 0..trunc in increasing order."""
    return Series1([scalar(rng, bound) for _ in range(trunc + 1)], trunc)


def series2(rng: random.Random, trunc: int, bound: int = BOUND) -> Series2:
    """Coefficients by total degree n = 0..trunc, then by the first exponent."""
    c = {}
    for n in range(trunc + 1):
        for i in range(n + 1):
            c[(i, n - i)] = scalar(rng, bound)
    return Series2(c, trunc)


def germ_pair(rng: random.Random, trunc: int, bound: int = BOUND) -> GermPair:
    """f, then g with its constant term overwritten by f(0)."""
    f = series1(rng, trunc, bound)
    g = series1(rng, trunc, bound)
    return GermPair(f, Series1([f[0]] + g.coeffs[1:], trunc))


def graded_element(rng: random.Random, degree: int, trunc: int, bound: int = BOUND) -> GradedElement:
    return GradedElement(germ_pair(rng, trunc, bound), degree)


def _overwrite(s: Series2, keep) -> Dict[Tuple[int, int], QQi]:
    return {k: v for k, v in s.c.items() if keep(*k)}


def quadruple(rng: random.Random, trunc: int, bound: int = BOUND) -> Quadruple:
    """A compatible quadruple: four full draws, then the edges are glued.

    z1w2 takes its u-edge from z1z2, w1z2 its v-edge from z1z2, w1w2 its
    u-edge from w1z2 and its v-edge from z1w2.
    """
    a, b, c, d = (series2(rng, trunc, bound) for _ in range(4))
    b = Series2({**_overwrite(b, lambda i, j: j > 0), **_overwrite(a, lambda i, j: j == 0)}, trunc)
    c = Series2({**_overwrite(c, lambda i, j: i > 0), **_overwrite(a, lambda i, j: i == 0)}, trunc)
    d = Series2({**_overwrite(d, lambda i, j: i > 0 and j > 0),
                 **_overwrite(c, lambda i, j: j == 0),
                 **_overwrite(b, lambda i, j: i == 0)}, trunc)
    return Quadruple(a, b, c, d)


def free_quadruple(rng: random.Random, trunc: int, bound: int = BOUND) -> Quadruple:
    return Quadruple(*(series2(rng, trunc, bound) for _ in range(4)), compat=False)


def qseries(rng: random.Random, trunc: int, q: QParam, bound: int = BOUND) -> QSeries:
    """Dense element, coefficients by total degree then by the x-exponent."""
    c = {}
    for n in range(trunc + 1):
        for i in range(n + 1):
            c[(i, n - i)] = scalar(rng, bound)
    return QSeries(c, trunc, q)


def fq_element(rng: random.Random, trunc: int, q: QParam, bound: int = BOUND) -> FqElement:
    """Random grid a[i, k] for i, k <= trunc, row by row."""
    grid = {(i, k): scalar(rng, bound) for i in range(trunc + 1) for k in range(trunc + 1)}
    return FqElement.from_grid(grid, trunc, q)

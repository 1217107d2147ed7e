"""Germ pairs on the union of the two coordinate axes and their graded pieces.

A ``GermPair`` (f, g) couples a series f(z) on the x-axis with a series g(w)
on the y-axis, subject to f(0) = g(0).  The graded piece of degree d consists
of pairs vanishing to order d; it is stored in reduced form (f, g), standing
for the raw pair (z**d f, w**d g).

``FqElement`` models the fibered product of O[[y]] and [[x]]O: a family of
series F_k(z) (coefficient of y**k) and G_i(w) (coefficient of x**i) whose
Taylor coefficients agree on the grid [z**i] F_k = [w**k] G_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .coeff import ONE, ZERO, QParam, QQi, make_q, scalar_from_json
from .qalgebra import QSeries
from .series import Series1, SeriesError, Trunc, tmin


class CompatibilityError(ValueError):
    """Raised when a pair or an F_q element violates its gluing condition."""


def _common_window(f: Series1, g: Series1) -> Trunc:
    return tmin(f.trunc, g.trunc)


@dataclass(frozen=True)
class GermPair:
    f: Series1
    g: Series1

    def __post_init__(self):
        t = _common_window(self.f, self.g)
        if (t is None or t >= 0) and self.f[0] != self.g[0]:
            raise CompatibilityError(f"f(0) = {self.f[0]} differs from g(0) = {self.g[0]}")

    @classmethod
    def zero(cls, trunc: Trunc = None) -> "GermPair":
        return cls(Series1.zero(trunc), Series1.zero(trunc))

    @classmethod
    def const(cls, c, trunc: Trunc = None) -> "GermPair":
        return cls(Series1.const(c, trunc), Series1.const(c, trunc))

    @property
    def trunc(self) -> Trunc:
        return _common_window(self.f, self.g)

    def __add__(self, other: "GermPair") -> "GermPair":
        return GermPair(self.f + other.f, self.g + other.g)

    def __sub__(self, other: "GermPair") -> "GermPair":
        return GermPair(self.f - other.f, self.g - other.g)

    def __neg__(self) -> "GermPair":
        return GermPair(-self.f, -self.g)

    def scale(self, c) -> "GermPair":
        return GermPair(self.f.scale(c), self.g.scale(c))

    def agrees(self, other: "GermPair", window: Trunc = None) -> bool:
        return self.f.agrees(other.f, window) and self.g.agrees(other.g, window)

    def is_zero(self, window: Trunc = None) -> bool:
        return self.f.is_zero(window) and self.g.is_zero(window)

    def truncate(self, n: Trunc) -> "GermPair":
        return GermPair(self.f.truncate(n), self.g.truncate(n))

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, obj) -> "GermPair":
        return cls(Series1.from_json(obj["f"]), Series1.from_json(obj["g"]))


@dataclass(frozen=True)
class GradedElement:
    """Reduced model of a pair vanishing to order ``degree``."""

    pair: GermPair
    degree: int

    @property
    def f(self) -> Series1:
        return self.pair.f

    @property
    def g(self) -> Series1:
        return self.pair.g

    @classmethod
    def of(cls, f, g, degree: int) -> "GradedElement":
        return cls(GermPair(f, g), degree)

    def raw(self) -> GermPair:
        """(z**d f, w**d g)."""
        d = self.degree
        return GermPair(self.f.shift_up(d), self.g.shift_up(d))

    @classmethod
    def from_raw(cls, pair: GermPair, degree: int) -> "GradedElement":
        """Inverse of ``raw``; the pair must vanish to order ``degree``."""
        return cls(GermPair(pair.f.shift_down(degree), pair.g.shift_down(degree)), degree)

    def __add__(self, other: "GradedElement") -> "GradedElement":
        _same_degree(self, other)
        return GradedElement(self.pair + other.pair, self.degree)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        _same_degree(self, other)
        return GradedElement(self.pair - other.pair, self.degree)

    def scale(self, c) -> "GradedElement":
        return GradedElement(self.pair.scale(c), self.degree)

    def agrees(self, other: "GradedElement", window: Trunc = None) -> bool:
        return self.degree == other.degree and self.pair.agrees(other.pair, window)

    def is_zero(self, window: Trunc = None) -> bool:
        return self.pair.is_zero(window)

    def to_json(self) -> dict:
        return {"degree": self.degree, **self.pair.to_json()}

    @classmethod
    def from_json(cls, obj) -> "GradedElement":
        return cls(GermPair.from_json(obj), int(obj["degree"]))


def _same_degree(a: GradedElement, b: GradedElement) -> None:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")


# multiplication operators

def mult_z(h: GradedElement) -> GradedElement:
    """(f, g) -> (z f, 0)."""
    return GradedElement(GermPair(h.f.shift_up(1), Series1.zero(h.g.trunc)), h.degree)


def mult_w(h: GradedElement) -> GradedElement:
    """(f, g) -> (0, w g)."""
    return GradedElement(GermPair(Series1.zero(h.f.trunc), h.g.shift_up(1)), h.degree)


# the degree-raising operators, reduced form

def op_N_x(h: GradedElement) -> GradedElement:
    """((f - f(0))/z, f'(0))."""
    f = h.f
    t = f.trunc if f.trunc is None else f.trunc - 1
    return GradedElement(GermPair(f.diff_quot(), Series1.const(f[1], t)), h.degree + 1)


def op_N_y(h: GradedElement, q: QParam) -> GradedElement:
    """q**(d+1) (g'(0), (g(q w) - g(0))/(q w))."""
    g = h.g
    d = h.degree
    t = g.trunc if g.trunc is None else g.trunc - 1
    # (g(qw) - g(0))/(qw) = sum_k g_{k+1} q**k w**k
    second = g.diff_quot().dilate(q)
    c = q.pow(d + 1)
    return GradedElement(GermPair(Series1.const(g[1], t).scale(c), second.scale(c)), d + 1)


def op_M_x(h: GradedElement) -> GradedElement:
    """(g'(0), (g - g(0))/w)."""
    g = h.g
    t = g.trunc if g.trunc is None else g.trunc - 1
    return GradedElement(GermPair(Series1.const(g[1], t), g.diff_quot()), h.degree + 1)


def op_M_y(h: GradedElement, q: QParam) -> GradedElement:
    """q**(l+1) ((f(q z) - f(0))/(q z), f'(0))."""
    f = h.f
    l = h.degree
    t = f.trunc if f.trunc is None else f.trunc - 1
    first = f.diff_quot().dilate(q)
    c = q.pow(l + 1)
    return GradedElement(GermPair(first.scale(c), Series1.const(f[1], t).scale(c)), l + 1)


# the same operators written on raw pairs, used as an independent check

def raw_N_x(p: GermPair, d: int) -> GermPair:
    f = p.f
    return GermPair(f.project(d + 1), Series1.monomial(d + 1, f[d + 1], f.trunc))


def raw_N_y(p: GermPair, d: int, q: QParam) -> GermPair:
    g = p.g
    return GermPair(Series1.monomial(d + 1, q.pow(d + 1) * g[d + 1], g.trunc),
                    g.dilate(q).project(d + 1))


def raw_M_x(p: GermPair, l: int) -> GermPair:
    g = p.g
    return GermPair(Series1.monomial(l + 1, g[l + 1], g.trunc), g.project(l + 1))


def raw_M_y(p: GermPair, l: int, q: QParam) -> GermPair:
    f = p.f
    return GermPair(f.dilate(q).project(l + 1),
                    Series1.monomial(l + 1, q.pow(l + 1) * f[l + 1], f.trunc))


# the fibered product F_q

class FqElement:
    """Truncated element of the fibered product, stored on both sides."""

    __slots__ = ("F", "G", "trunc", "q")

    def __init__(self, F: List[Series1], G: List[Series1], trunc: int, q: QParam, check: bool = True):
        if len(F) != trunc + 1 or len(G) != trunc + 1:
            raise ValueError("F and G need trunc+1 layers")
        for s in list(F) + list(G):
            if s.trunc is not None and s.trunc < trunc:
                raise ValueError(f"layer window {s.trunc} below {trunc}")
        self.F = [Series1._raw(list(s.coeffs[: trunc + 1]), trunc) for s in F]
        self.G = [Series1._raw(list(s.coeffs[: trunc + 1]), trunc) for s in G]
        self.trunc = trunc
        self.q = q
        if check:
            self.check()

    def check(self) -> None:
        N = self.trunc
        for k in range(N + 1):
            for i in range(N + 1):
                if self.F[k][i] != self.G[i][k]:
                    raise CompatibilityError(
                        f"grid mismatch at (i={i}, k={k}): {self.F[k][i]} vs {self.G[i][k]}")

    @classmethod
    def from_grid(cls, a: Dict[Tuple[int, int], object], trunc: int, q: QParam) -> "FqElement":
        """Element whose shared coefficient grid is a[i, k] (x**i y**k)."""
        N = trunc
        F = [Series1([a.get((i, k), ZERO) for i in range(N + 1)], N) for k in range(N + 1)]
        G = [Series1([a.get((i, k), ZERO) for k in range(N + 1)], N) for i in range(N + 1)]
        return cls(F, G, N, q, check=False)

    @classmethod
    def from_qseries(cls, s: QSeries) -> "FqElement":
        return cls.from_grid(s.c, s.trunc, s.q)

    def grid(self) -> Dict[Tuple[int, int], QQi]:
        N = self.trunc
        return {(i, k): self.F[k][i] for k in range(N + 1) for i in range(N + 1) if self.F[k][i]}

    @classmethod
    def zero(cls, trunc: int, q: QParam) -> "FqElement":
        return cls.from_grid({}, trunc, q)

    @classmethod
    def unit(cls, trunc: int, q: QParam) -> "FqElement":
        return cls.from_grid({(0, 0): ONE}, trunc, q)

    @classmethod
    def x(cls, trunc: int, q: QParam) -> "FqElement":
        return cls.from_grid({(1, 0): ONE}, trunc, q)

    @classmethod
    def y(cls, trunc: int, q: QParam) -> "FqElement":
        return cls.from_grid({(0, 1): ONE}, trunc, q)

    def _same(self, other: "FqElement") -> None:
        if self.trunc != other.trunc or self.q != other.q:
            raise ValueError("F_q elements with different parameters")

    def __add__(self, other: "FqElement") -> "FqElement":
        self._same(other)
        return FqElement([a + b for a, b in zip(self.F, other.F)],
                         [a + b for a, b in zip(self.G, other.G)], self.trunc, self.q, check=False)

    def __sub__(self, other: "FqElement") -> "FqElement":
        self._same(other)
        return FqElement([a - b for a, b in zip(self.F, other.F)],
                         [a - b for a, b in zip(self.G, other.G)], self.trunc, self.q, check=False)

    def scale(self, c) -> "FqElement":
        return FqElement([a.scale(c) for a in self.F], [a.scale(c) for a in self.G],
                         self.trunc, self.q, check=False)

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.F) and all(s.is_zero() for s in self.G)

    def __eq__(self, other):
        if not isinstance(other, FqElement):
            return NotImplemented
        return (self.trunc == other.trunc and self.q == other.q
                and all(a.agrees(b) for a, b in zip(self.F, other.F))
                and all(a.agrees(b) for a, b in zip(self.G, other.G)))

    __hash__ = None

    def __repr__(self):
        return f"FqElement(grid={self.grid()}, trunc={self.trunc})"

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "trunc": self.trunc,
                "F": [s.to_json() for s in self.F], "G": [s.to_json() for s in self.G]}

    @classmethod
    def from_json(cls, obj) -> "FqElement":
        q = make_q(scalar_from_json(obj["q"]))
        return cls([Series1.from_json(s) for s in obj["F"]],
                   [Series1.from_json(s) for s in obj["G"]], int(obj["trunc"]), q)


def fq_mul(a: FqElement, b: FqElement) -> FqElement:
    """Product: F-side by the y-graded formula, G-side by the x-graded one."""
    a._same(b)
    N, q = a.trunc, a.q
    F = []
    for n in range(N + 1):
        acc = Series1.zero(N)
        for i in range(n + 1):
            acc = acc + a.F[i] * b.F[n - i].dilate(q.pow(i))
        F.append(acc)
    G = []
    for n in range(N + 1):
        acc = Series1.zero(N)
        for i in range(n + 1):
            j = n - i
            acc = acc + a.G[i].dilate(q.pow(j)) * b.G[j]
        G.append(acc)
    out = FqElement(F, G, N, q, check=False)
    try:
        out.check()
    except CompatibilityError as exc:  # pragma: no cover - would be an implementation bug
        raise AssertionError(f"product left the fibered product: {exc}") from exc
    return out


def fq_project_pd(xi: FqElement, d: int) -> FqElement:
    """The projection onto the degree-d summand."""
    N, q = xi.trunc, xi.q
    if d > N:
        return FqElement.zero(N, q)
    F = [Series1.zero(N) for _ in range(N + 1)]
    G = [Series1.zero(N) for _ in range(N + 1)]
    F[d] = xi.F[d].project(d)
    G[d] = xi.G[d].project(d)
    for k in range(d + 1, N + 1):
        F[k] = Series1.monomial(d, xi.G[d][k], N)
    for i in range(d + 1, N + 1):
        G[i] = Series1.monomial(d, xi.F[d][i], N)
    return FqElement(F, G, N, q, check=False)


def alpha_d(h: GradedElement, trunc: int, q: QParam) -> FqElement:
    """Embed a reduced graded element into F_q at the given cutoff."""
    d, N = h.degree, trunc
    if d > N:
        return FqElement.zero(N, q)
    need = N - d
    for s in (h.f, h.g):
        if s.trunc is not None and s.trunc < need:
            raise SeriesError(f"graded element known to {s.trunc}, need {need} at cutoff {N}")
    raw = h.raw()
    F = [Series1.zero(N) for _ in range(N + 1)]
    G = [Series1.zero(N) for _ in range(N + 1)]
    F[d] = Series1(raw.f.truncate(N).coeffs, N)
    G[d] = Series1(raw.g.truncate(N).coeffs, N)
    for k in range(d + 1, N + 1):
        F[k] = Series1.monomial(d, h.g[k - d], N)
    for i in range(d + 1, N + 1):
        G[i] = Series1.monomial(d, h.f[i - d], N)
    return FqElement(F, G, N, q, check=False)


def graded_component(xi: FqElement, d: int) -> GradedElement:
    """Reduced degree-d component, i.e. the left inverse of alpha_d after p_d."""
    N = xi.trunc
    if d > N:
        raise ValueError(f"degree {d} above cutoff {N}")
    p = fq_project_pd(xi, d)
    return GradedElement(GermPair(p.F[d].shift_down(d), p.G[d].shift_down(d)), d)


def lambda_U(xi: FqElement) -> GermPair:
    """(F_0, G_0)."""
    return GermPair(xi.F[0], xi.G[0])


def decompose(xi: FqElement) -> List[GradedElement]:
    return [graded_component(xi, d) for d in range(xi.trunc + 1)]


GENERATORS = ("L_x", "L_y", "R_x", "R_y")


def generator_action_graded(gen: str, h: GradedElement, q: QParam) -> Tuple[GradedElement, GradedElement]:
    """Degree-d and degree-(d+1) parts of a generator acting on alpha_d(h).

    L_x = z + M_x, L_y = q**d w + M_y, R_x = q**d z + N_y, R_y = w + N_x.
    """
    d = h.degree
    if gen == "L_x":
        return mult_z(h), op_M_x(h)
    if gen == "L_y":
        return mult_w(h).scale(q.pow(d)), op_M_y(h, q)
    if gen == "R_x":
        return mult_z(h).scale(q.pow(d)), op_N_y(h, q)
    if gen == "R_y":
        return mult_w(h), op_N_x(h)
    raise ValueError(f"unknown generator {gen!r}; expected one of {GENERATORS}")


def generator_action_fq(gen: str, h: GradedElement, trunc: int, q: QParam) -> FqElement:
    """The same action computed as a product in F_q."""
    a = alpha_d(h, trunc, q)
    if gen == "L_x":
        return fq_mul(FqElement.x(trunc, q), a)
    if gen == "L_y":
        return fq_mul(FqElement.y(trunc, q), a)
    if gen == "R_x":
        return fq_mul(a, FqElement.x(trunc, q))
    if gen == "R_y":
        return fq_mul(a, FqElement.y(trunc, q))
    raise ValueError(f"unknown generator {gen!r}; expected one of {GENERATORS}")

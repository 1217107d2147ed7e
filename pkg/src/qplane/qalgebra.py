"""Truncated formal series in the quantum plane, x*y = q**-1 * y*x.

Elements are stored in ordered normal form sum a[i,k] x**i y**k, truncated
to total degree N.  The product is implemented three times: directly from
the coefficient formula, through the y-graded form
    f*g = sum_n (sum_{i+j=n} f_i(x) g_j(q**i x)) y**n
and through the mirrored x-graded form
    f*g = sum_n x**n (sum_{i+j=n} f_i(q**j y) g_j(y)).
"""

from __future__ import annotations

from typing import Dict, Tuple

from .coeff import ONE, ZERO, QParam, QQi, make_q, scalar_from_json

Key = Tuple[int, int]


class UsageError(ValueError):
    """Raised on mismatched parameters."""


class QSeries:
    """Element of the truncated quantum-plane algebra."""

    __slots__ = ("c", "trunc", "q")

    def __init__(self, coeffs: Dict[Key, object], trunc: int, q: QParam):
        c = {}
        for (i, k), v in coeffs.items():
            if i + k > trunc:
                continue
            v = QQi.coerce(v)
            if v:
                c[(i, k)] = v
        self.c: Dict[Key, QQi] = c
        self.trunc = trunc
        self.q = q

    @classmethod
    def _raw(cls, c, trunc, q) -> "QSeries":
        s = object.__new__(cls)
        s.c, s.trunc, s.q = c, trunc, q
        return s

    @classmethod
    def monomial(cls, i: int, k: int, q: QParam, trunc: int, v=1) -> "QSeries":
        return cls({(i, k): v}, trunc, q)

    @classmethod
    def one(cls, q: QParam, trunc: int) -> "QSeries":
        return cls.monomial(0, 0, q, trunc)

    @classmethod
    def x(cls, q: QParam, trunc: int) -> "QSeries":
        return cls.monomial(1, 0, q, trunc)

    @classmethod
    def y(cls, q: QParam, trunc: int) -> "QSeries":
        return cls.monomial(0, 1, q, trunc)

    def __getitem__(self, key: Key) -> QQi:
        return self.c.get(key, ZERO)

    def _check(self, other: "QSeries") -> None:
        if self.trunc != other.trunc:
            raise UsageError(f"truncation mismatch: {self.trunc} vs {other.trunc}")
        if self.q != other.q:
            raise UsageError(f"parameter mismatch: {self.q.q} vs {other.q.q}")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return QSeries._raw(out, self.trunc, self.q)

    def __neg__(self) -> "QSeries":
        return QSeries._raw({k: -v for k, v in self.c.items()}, self.trunc, self.q)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, v) -> "QSeries":
        v = QQi.coerce(v)
        if not v:
            return QSeries._raw({}, self.trunc, self.q)
        return QSeries._raw({k: v * x for k, x in self.c.items()}, self.trunc, self.q)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qmul(self, other)
        return self.scale(other)

    def __pow__(self, n: int) -> "QSeries":
        r = QSeries.one(self.q, self.trunc)
        for _ in range(n):
            r = qmul(r, self)
        return r

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.q == other.q and self.c == other.c

    def __hash__(self):
        return hash((self.trunc, frozenset(self.c.items())))

    def __repr__(self):
        terms = [f"({v})*x^{i}y^{k}" for (i, k), v in sorted(self.c.items())]
        return f"QSeries[{' + '.join(terms) or '0'}; trunc={self.trunc}]"

    def x_layer(self, k: int) -> Dict[int, QQi]:
        """Coefficient of y**k as a sparse series in x."""
        return {i: v for (i, kk), v in self.c.items() if kk == k}

    def to_json(self) -> dict:
        return {
            "q": self.q.to_json(),
            "trunc": self.trunc,
            "coeffs": [[i, k, v.to_json()] for (i, k), v in sorted(self.c.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "QSeries":
        q = make_q(scalar_from_json(obj["q"]))
        trunc = int(obj["trunc"])
        return cls({(int(i), int(k)): scalar_from_json(v) for i, k, v in obj["coeffs"]}, trunc, q)


def qmul(f: QSeries, g: QSeries) -> QSeries:
    """Product from the coefficient formula c_mn = sum a_si q**(i t) b_tj."""
    f._check(g)
    N, q = f.trunc, f.q
    out: Dict[Key, QQi] = {}
    for (s, i), a in f.c.items():
        d = s + i
        for (t, j), b in g.c.items():
            if d + t + j > N:
                continue
            key = (s + t, i + j)
            term = a * b
            e = i * t
            if e:
                term = term * q.pow(e)
            w = out.get(key)
            out[key] = term if w is None else w + term
    return QSeries._raw({k: v for k, v in out.items() if v}, N, q)


def _poly_mul(a: Dict[int, QQi], b: Dict[int, QQi], limit: int, out: Dict[int, QQi]) -> None:
    for i, x in a.items():
        for j, y in b.items():
            if i + j > limit:
                continue
            out[i + j] = out.get(i + j, ZERO) + x * y


def qmul_left_form(f: QSeries, g: QSeries) -> QSeries:
    """Product via f*g = sum_n (sum_{i+j=n} f_i(x) g_j(q**i x)) y**n."""
    f._check(g)
    N, q = f.trunc, f.q
    fl = [f.x_layer(k) for k in range(N + 1)]
    gl = [g.x_layer(k) for k in range(N + 1)]
    out: Dict[Key, QQi] = {}
    for n in range(N + 1):
        acc: Dict[int, QQi] = {}
        for i in range(n + 1):
            j = n - i
            if not fl[i] or not gl[j]:
                continue
            # g_j(q**i x)
            shifted = {t: b * q.pow(i * t) for t, b in gl[j].items()}
            _poly_mul(fl[i], shifted, N - n, acc)
        for m, v in acc.items():
            if v:
                out[(m, n)] = v
    return QSeries._raw(out, N, q)


def qmul_right_form(f: QSeries, g: QSeries) -> QSeries:
    """Product via f*g = sum_n x**n (sum_{i+j=n} f_i(q**j y) g_j(y))."""
    f._check(g)
    N, q = f.trunc, f.q
    fl = [{k: v for (i, k), v in f.c.items() if i == m} for m in range(N + 1)]
    gl = [{k: v for (i, k), v in g.c.items() if i == m} for m in range(N + 1)]
    out: Dict[Key, QQi] = {}
    for n in range(N + 1):
        acc: Dict[int, QQi] = {}
        for i in range(n + 1):
            j = n - i
            if not fl[i] or not gl[j]:
                continue
            # f_i(q**j y)
            shifted = {s: a * q.pow(j * s) for s, a in fl[i].items()}
            _poly_mul(shifted, gl[j], N - n, acc)
        for k, v in acc.items():
            if v:
                out[(n, k)] = v
    return QSeries._raw(out, N, q)


def trivial_character(f: QSeries) -> QQi:
    """Value of the character killing x and y."""
    return f[(0, 0)]


def radical_test(f: QSeries) -> bool:
    """True when f lies in the ideal generated by x and y."""
    return not trivial_character(f)


def dilate_x(g: QSeries, c) -> QSeries:
    """g(c x, y) in normal form."""
    c = QQi.coerce(c)
    return QSeries._raw({(i, k): v * c ** i for (i, k), v in g.c.items()}, g.trunc, g.q)


def dilate_y(g: QSeries, c) -> QSeries:
    c = QQi.coerce(c)
    return QSeries._raw({(i, k): v * c ** k for (i, k), v in g.c.items()}, g.trunc, g.q)


__all__ = [
    "QSeries",
    "UsageError",
    "qmul",
    "qmul_left_form",
    "qmul_right_form",
    "trivial_character",
    "radical_test",
    "dilate_x",
    "dilate_y",
]

"""Exact truncated power series in one and two commuting variables.

A series carries ``trunc``: every coefficient of (total) degree <= trunc is
known exactly, coefficients above it are unknown.  ``trunc=None`` marks an
exact polynomial, for which every coefficient is known.  Operations compute
the window of their output from the windows of their inputs, so composite
identities can be asserted exactly on the part that is actually determined.

Two-variable series use a total-degree window.  Division by a linear form
``v - c*u`` and restriction to a line ``v = c*u`` are only defined modulo
powers of the maximal ideal, which a rectangular window does not respect.
"""

from __future__ import annotations

from math import comb
from typing import Dict, Iterable, List, Optional, Tuple

from .coeff import ONE, ZERO, QQi, QParam, scalar_from_json

Trunc = Optional[int]


class SeriesError(ValueError):
    """Raised when a series fails the precondition of an operation."""


class UnknownCoefficient(SeriesError):
    """Raised when a coefficient above the truncation window is requested."""


def tmin(*ts: Trunc) -> Trunc:
    vals = [t for t in ts if t is not None]
    return min(vals) if vals else None


def _tadd(t: Trunc, k: int) -> Trunc:
    return None if t is None else t + k


def _inf(t: Trunc) -> float:
    return float("inf") if t is None else t


def _powers(c: QQi, n: int) -> List[QQi]:
    out = [ONE]
    for _ in range(n):
        out.append(out[-1] * c)
    return out


def _q(c) -> QQi:
    if isinstance(c, QParam):
        return c.q
    return QQi.coerce(c)


class Series1:
    """Power series sum_k coeffs[k] * t**k, known up to degree ``trunc``."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Iterable = (), trunc: Trunc = None):
        cs = [QQi.coerce(c) for c in coeffs]
        if trunc is None:
            while cs and not cs[-1]:
                cs.pop()
        else:
            if trunc < -1:
                trunc = -1
            if len(cs) > trunc + 1:
                del cs[trunc + 1:]
            else:
                cs.extend([ZERO] * (trunc + 1 - len(cs)))
        self.coeffs: List[QQi] = cs
        self.trunc: Trunc = trunc

    @classmethod
    def _raw(cls, cs: List[QQi], trunc: Trunc) -> "Series1":
        s = object.__new__(cls)
        if trunc is None:
            while cs and not cs[-1]:
                cs.pop()
        s.coeffs = cs
        s.trunc = trunc
        return s

    # constructors
    @classmethod
    def zero(cls, trunc: Trunc = None) -> "Series1":
        return cls((), trunc)

    @classmethod
    def const(cls, c, trunc: Trunc = None) -> "Series1":
        return cls((c,), trunc)

    @classmethod
    def monomial(cls, k: int, c=1, trunc: Trunc = None) -> "Series1":
        return cls([ZERO] * k + [QQi.coerce(c)], trunc)

    # access
    def __getitem__(self, k: int) -> QQi:
        if self.trunc is not None and k > self.trunc:
            raise UnknownCoefficient(f"coefficient of degree {k} is beyond the window {self.trunc}")
        if k < 0:
            return ZERO
        return self.coeffs[k] if k < len(self.coeffs) else ZERO

    def at0(self) -> QQi:
        return self[0]

    def valuation(self) -> float:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return _inf(self.trunc) + 1

    def is_poly(self) -> bool:
        return self.trunc is None

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, n: Trunc) -> "Series1":
        t = tmin(self.trunc, n)
        if t == self.trunc:
            return self
        return Series1(self.coeffs[: t + 1], t)

    # arithmetic
    def _binop(self, other: "Series1", sign: int) -> "Series1":
        t = tmin(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b)) if t is None else t + 1
        out = []
        for k in range(n):
            x = a[k] if k < len(a) else ZERO
            y = b[k] if k < len(b) else ZERO
            out.append(x + y if sign > 0 else x - y)
        return Series1._raw(out, t)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return Series1._raw([-c for c in self.coeffs], self.trunc)

    def scale(self, c) -> "Series1":
        c = QQi.coerce(c)
        if not c:
            return Series1.zero(self.trunc)
        return Series1._raw([c * x for x in self.coeffs], self.trunc)

    def __mul__(self, other):
        if not isinstance(other, Series1):
            return self.scale(other)
        t = tmin(_tnum(self.trunc, other.valuation()), _tnum(other.trunc, self.valuation()))
        a, b = self.coeffs, other.coeffs
        n = len(a) + len(b) - 1 if t is None else t + 1
        out = [ZERO] * max(n, 0)
        for i, x in enumerate(a):
            if not x or i >= n:
                continue
            for j, y in enumerate(b):
                if i + j >= n:
                    break
                if y:
                    out[i + j] = out[i + j] + x * y
        return Series1._raw(out, t)

    __rmul__ = __mul__

    def shift_up(self, d: int) -> "Series1":
        """Multiply by t**d."""
        return Series1._raw([ZERO] * d + list(self.coeffs), _tadd(self.trunc, d))

    def shift_down(self, d: int) -> "Series1":
        """Divide by t**d; the low coefficients must vanish."""
        for k in range(d):
            if (self.trunc is None or k <= self.trunc) and self[k]:
                raise SeriesError(f"not in O({d})")
        return Series1._raw(list(self.coeffs[d:]), _tadd(self.trunc, -d))

    def project(self, d: int) -> "Series1":
        """Remove the terms of degree < d."""
        cs = list(self.coeffs)
        for k in range(min(d, len(cs))):
            cs[k] = ZERO
        return Series1._raw(cs, self.trunc)

    def dilate(self, c) -> "Series1":
        """t -> c*t."""
        c = _q(c)
        pw = _powers(c, len(self.coeffs))
        return Series1._raw([x * pw[k] for k, x in enumerate(self.coeffs)], self.trunc)

    def diff_quot(self) -> "Series1":
        """(f(t) - f(0)) / t."""
        return Series1._raw(list(self.coeffs[1:]), _tadd(self.trunc, -1))

    def deriv0(self, k: int = 1) -> QQi:
        """k-th Taylor coefficient (f^(k)(0)/k!)."""
        return self[k]

    # comparison
    def agrees(self, other: "Series1", window: Trunc = None) -> bool:
        t = tmin(self.trunc, other.trunc, window)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b)) if t is None else t + 1
        for k in range(n):
            x = a[k] if k < len(a) else ZERO
            y = b[k] if k < len(b) else ZERO
            if x != y:
                return False
        return True

    def is_zero(self, window: Trunc = None) -> bool:
        return self.agrees(Series1.zero(), window)

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return self.trunc == other.trunc and self.agrees(other)

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs)))

    def __repr__(self):
        terms = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"Series1[{body}; trunc={self.trunc}]"

    def to_json(self) -> dict:
        return {"trunc": self.trunc, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "Series1":
        return cls([scalar_from_json(c) for c in obj["coeffs"]], obj.get("trunc"))


def _tnum(t: Trunc, v: float) -> Trunc:
    """Window bound t + v for a product; None when unbounded."""
    if t is None or v == float("inf"):
        return None
    return t + int(v)


Key = Tuple[int, int]


class Series2:
    """Power series sum c[i,j] u**i v**j, known for total degree <= trunc.

    Storage is a sparse dict of the nonzero known coefficients.
    """

    __slots__ = ("c", "trunc")

    def __init__(self, coeffs: Optional[Dict[Key, object]] = None, trunc: Trunc = None):
        c = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if trunc is not None and i + j > trunc:
                    continue
                v = QQi.coerce(v)
                if v:
                    c[(i, j)] = v
        self.c: Dict[Key, QQi] = c
        self.trunc: Trunc = trunc

    @classmethod
    def _raw(cls, c: Dict[Key, QQi], trunc: Trunc) -> "Series2":
        s = object.__new__(cls)
        s.c = c
        s.trunc = trunc
        return s

    # constructors
    @classmethod
    def zero(cls, trunc: Trunc = None) -> "Series2":
        return cls._raw({}, trunc)

    @classmethod
    def const(cls, v, trunc: Trunc = None) -> "Series2":
        return cls({(0, 0): v}, trunc)

    @classmethod
    def monomial(cls, i: int, j: int, v=1, trunc: Trunc = None) -> "Series2":
        return cls({(i, j): v}, trunc)

    @classmethod
    def from_u(cls, f: Series1) -> "Series2":
        """f(u) viewed as a series in (u, v)."""
        return cls._raw({(k, 0): x for k, x in enumerate(f.coeffs) if x}, f.trunc)

    @classmethod
    def from_v(cls, f: Series1) -> "Series2":
        return cls._raw({(0, k): x for k, x in enumerate(f.coeffs) if x}, f.trunc)

    @classmethod
    def from_rows(cls, rows, trunc: Trunc = None) -> "Series2":
        return cls({(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}, trunc)

    # access
    def __getitem__(self, key: Key) -> QQi:
        i, j = key
        if self.trunc is not None and i + j > self.trunc:
            raise UnknownCoefficient(f"coefficient ({i},{j}) is beyond the window {self.trunc}")
        return self.c.get(key, ZERO)

    def at00(self) -> QQi:
        return self[(0, 0)]

    def valuation(self) -> float:
        if not self.c:
            return _inf(self.trunc) + 1
        return min(i + j for i, j in self.c)

    def is_poly(self) -> bool:
        return self.trunc is None

    def truncate(self, n: Trunc) -> "Series2":
        t = tmin(self.trunc, n)
        if t == self.trunc:
            return self
        return Series2._raw({k: v for k, v in self.c.items() if k[0] + k[1] <= t}, t)

    def keys_in_window(self, window: Trunc = None):
        t = tmin(self.trunc, window)
        if t is None:
            return None
        return [(i, n - i) for n in range(t + 1) for i in range(n + 1)]

    # arithmetic
    def __add__(self, other: "Series2") -> "Series2":
        t = tmin(self.trunc, other.trunc)
        out = dict(self.c) if t is None else {k: v for k, v in self.c.items() if k[0] + k[1] <= t}
        for k, v in other.c.items():
            if t is not None and k[0] + k[1] > t:
                continue
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                s = w + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Series2._raw(out, t)

    def __neg__(self) -> "Series2":
        return Series2._raw({k: -v for k, v in self.c.items()}, self.trunc)

    def __sub__(self, other: "Series2") -> "Series2":
        return self + (-other)

    def scale(self, v) -> "Series2":
        v = QQi.coerce(v)
        if not v:
            return Series2.zero(self.trunc)
        if v == ONE:
            return self
        return Series2._raw({k: v * x for k, x in self.c.items()}, self.trunc)

    def __mul__(self, other):
        if not isinstance(other, Series2):
            return self.scale(other)
        t = tmin(_tnum(self.trunc, other.valuation()), _tnum(other.trunc, self.valuation()))
        out: Dict[Key, QQi] = {}
        for (i, j), x in self.c.items():
            for (k, l), y in other.c.items():
                if t is not None and i + j + k + l > t:
                    continue
                key = (i + k, j + l)
                w = out.get(key)
                out[key] = x * y if w is None else w + x * y
        return Series2._raw({k: v for k, v in out.items() if v}, t)

    __rmul__ = __mul__

    def mul_u(self, k: int = 1) -> "Series2":
        return Series2._raw({(i + k, j): v for (i, j), v in self.c.items()}, _tadd(self.trunc, k))

    def mul_v(self, k: int = 1) -> "Series2":
        return Series2._raw({(i, j + k): v for (i, j), v in self.c.items()}, _tadd(self.trunc, k))

    # restrictions
    def eval_v0(self) -> Series1:
        """h(u, 0) as a series in u."""
        return self._line_coeffs(lambda i, j: j == 0, lambda i, j: i)

    def eval_u0(self) -> Series1:
        """h(0, v) as a series in v."""
        return self._line_coeffs(lambda i, j: i == 0, lambda i, j: j)

    def _line_coeffs(self, keep, index) -> Series1:
        n = 0 if self.trunc is None else self.trunc + 1
        for (i, j) in self.c:
            if keep(i, j):
                n = max(n, index(i, j) + 1)
        cs = [ZERO] * n
        for (i, j), v in self.c.items():
            if keep(i, j):
                cs[index(i, j)] = v
        return Series1._raw(cs, self.trunc)

    def dv_at_v0(self) -> Series1:
        """(d/dv h)(u, 0) as a series in u."""
        cs = {}
        for (i, j), v in self.c.items():
            if j == 1:
                cs[i] = v
        return _from_sparse(cs, _tadd(self.trunc, -1))

    def du_at_u0(self) -> Series1:
        """(d/du h)(0, v) as a series in v."""
        cs = {}
        for (i, j), v in self.c.items():
            if i == 1:
                cs[j] = v
        return _from_sparse(cs, _tadd(self.trunc, -1))

    def on_line(self, a, b) -> Series1:
        """h(a*t, b*t) as a series in t."""
        a, b = _q(a), _q(b)
        n = self.trunc if self.trunc is not None else max((i + j for i, j in self.c), default=-1)
        deg = max((max(i, j) for i, j in self.c), default=0)
        pa, pb = _powers(a, deg), _powers(b, deg)
        cs = [ZERO] * (n + 1)
        for (i, j), v in self.c.items():
            cs[i + j] = cs[i + j] + v * pa[i] * pb[j]
        return Series1._raw(cs, self.trunc)

    def dilate(self, a, b) -> "Series2":
        """h(a*u, b*v)."""
        a, b = _q(a), _q(b)
        deg = max((max(i, j) for i, j in self.c), default=0)
        pa, pb = _powers(a, deg), _powers(b, deg)
        out = {}
        for (i, j), v in self.c.items():
            w = v * pa[i] * pb[j]
            if w:
                out[(i, j)] = w
        return Series2._raw(out, self.trunc)

    def swap(self) -> "Series2":
        return Series2._raw({(j, i): v for (i, j), v in self.c.items()}, self.trunc)

    # quotients
    def dq_u(self) -> "Series2":
        """(h(u,v) - h(0,v)) / u."""
        return Series2._raw({(i - 1, j): v for (i, j), v in self.c.items() if i > 0},
                            _tadd(self.trunc, -1))

    def dq_v(self) -> "Series2":
        """(h(u,v) - h(u,0)) / v."""
        return Series2._raw({(i, j - 1): v for (i, j), v in self.c.items() if j > 0},
                            _tadd(self.trunc, -1))

    def dq_uv(self) -> "Series2":
        """The mixed quotient h_uv with h = h(u,0) + h(0,v) - h(0,0) + u*v*h_uv."""
        return Series2._raw({(i - 1, j - 1): v for (i, j), v in self.c.items() if i > 0 and j > 0},
                            _tadd(self.trunc, -2))

    def div_u(self) -> "Series2":
        if any(i == 0 for (i, j) in self.c):
            raise SeriesError("not divisible by the first variable")
        return self.dq_u()

    def div_v(self) -> "Series2":
        if any(j == 0 for (i, j) in self.c):
            raise SeriesError("not divisible by the second variable")
        return self.dq_v()

    def div_linear(self, a, b, message: str = "does not vanish on the line") -> "Series2":
        """Divide by the linear form a*u + b*v, which must divide h."""
        a, b = QQi.coerce(a), QQi.coerce(b)
        if not b:
            if not a:
                raise ZeroDivisionError("zero linear form")
            try:
                return self.div_u().scale(a.inverse())
            except SeriesError as exc:
                raise SeriesError(message) from exc
        # a*u + b*v = b*(v - c*u)
        c = -a / b
        return self._div_v_minus(c, message).scale(b.inverse())

    def _div_v_minus(self, c: QQi, message: str) -> "Series2":
        if not c:
            try:
                return self.div_v()
            except SeriesError as exc:
                raise SeriesError(message) from exc
        deg = max((j for _, j in self.c), default=0)
        pc = _powers(c, deg + 1)
        # substitute v = s + c*u
        h: Dict[Key, QQi] = {}
        for (i, j), v in self.c.items():
            for k in range(j + 1):
                key = (i + j - k, k)
                w = v * pc[j - k] * comb(j, k)
                h[key] = h.get(key, ZERO) + w
        for (a_, k), v in h.items():
            if k == 0 and v:
                raise SeriesError(message)
        # divide by s and substitute s = v - c*u back
        negc = _powers(-c, deg + 1)
        out: Dict[Key, QQi] = {}
        for (a_, k), v in h.items():
            if k == 0 or not v:
                continue
            k1 = k - 1
            for m in range(k1 + 1):
                key = (a_ + k1 - m, m)
                out[key] = out.get(key, ZERO) + v * negc[k1 - m] * comb(k1, m)
        return Series2._raw({k: v for k, v in out.items() if v}, _tadd(self.trunc, -1))

    # comparison
    def agrees(self, other: "Series2", window: Trunc = None) -> bool:
        t = tmin(self.trunc, other.trunc, window)
        keys = set(self.c) | set(other.c)
        for k in keys:
            if t is not None and k[0] + k[1] > t:
                continue
            if self.c.get(k, ZERO) != other.c.get(k, ZERO):
                return False
        return True

    def is_zero(self, window: Trunc = None) -> bool:
        t = tmin(self.trunc, window)
        return all(t is not None and i + j > t for (i, j) in self.c)

    def max_defect(self, other: "Series2", window: Trunc = None) -> float:
        t = tmin(self.trunc, other.trunc, window)
        worst = 0.0
        for k in set(self.c) | set(other.c):
            if t is not None and k[0] + k[1] > t:
                continue
            d = abs(self.c.get(k, ZERO) - other.c.get(k, ZERO))
            worst = max(worst, d)
        return worst

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return self.trunc == other.trunc and self.c == other.c

    def __hash__(self):
        return hash((self.trunc, frozenset(self.c.items())))

    def __repr__(self):
        terms = [f"({v})*u^{i}v^{j}" for (i, j), v in sorted(self.c.items())]
        body = " + ".join(terms) if terms else "0"
        return f"Series2[{body}; trunc={self.trunc}]"

    def to_json(self) -> dict:
        if self.trunc is None:
            du = max((i for i, _ in self.c), default=-1)
            dv = max((j for _, j in self.c), default=-1)
            rows = [[self.c.get((i, j), ZERO).to_json() for j in range(dv + 1)] for i in range(du + 1)]
        else:
            n = self.trunc
            rows = [[self.c.get((i, j), ZERO).to_json() for j in range(n - i + 1)] for i in range(n + 1)]
        return {"trunc": self.trunc, "coeffs": rows}

    @classmethod
    def from_json(cls, obj) -> "Series2":
        rows = [[scalar_from_json(v) for v in row] for row in obj["coeffs"]]
        return cls.from_rows(rows, obj.get("trunc"))


def _from_sparse(cs: Dict[int, QQi], trunc: Trunc) -> Series1:
    n = max(cs, default=-1) + 1
    if trunc is not None:
        n = trunc + 1
    out = [ZERO] * max(n, 0)
    for k, v in cs.items():
        if trunc is None or k <= trunc:
            out[k] = v
    return Series1._raw(out, trunc)


# public operations

def project_Pd(f: Series1, d: int) -> Series1:
    """f minus its Taylor polynomial of degree < d."""
    if f.trunc is not None and d > f.trunc + 1:
        raise SeriesError(f"projection order {d} exceeds the window {f.trunc}")
    return f.project(d)


def translate_q(f: Series1, q) -> Series1:
    """f(z) -> f(q z)."""
    return f.dilate(q)


def divide_by_var(f: Series1, d: int) -> Series1:
    """z**(-d) f for f vanishing to order d at the origin."""
    return f.shift_down(d)


def diff_quot_u(h: Series2) -> Series2:
    """(h(u,v) - h(0,v)) / u."""
    return h.dq_u()


def diff_quot_v(h: Series2) -> Series2:
    """(h(u,v) - h(u,0)) / v."""
    return h.dq_v()


def split_axes(h: Series2) -> Tuple[Series1, Series1, Series2]:
    """Write h = h(u,0) + h(0,v) + u*v*h_uv for h(0,0) = 0."""
    if h.at00():
        raise SeriesError("the constant term must vanish")
    return h.eval_v0(), h.eval_u0(), h.dq_uv()


def join_axes(a: Series1, b: Series1, m: Series2) -> Series2:
    """Inverse of ``split_axes``."""
    return Series2.from_u(a) + Series2.from_v(b) + m.mul_u().mul_v()


def divide_diagonal(h: Series2) -> Series2:
    """The series f with (v - u) f = h; h must vanish on the diagonal."""
    return h.div_linear(-1, 1, message="not diagonal-divisible")

"""Scalars over the Gaussian rationals and the deformation parameter q.

Exact scalars are ``QQi`` values, a pair of ``gmpy2.mpq`` numbers.  Float
scalars are plain Python ``complex`` values compared with a tolerance; they
are used only by the spectral scans.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

DEFAULT_TOL = 1e-9


class DomainError(ValueError):
    """Raised when a value lies outside the domain of an operation."""


def _to_mpq(v) -> mpq:
    if isinstance(v, type(mpq(0))):
        return v
    if isinstance(v, (int, Fraction)):
        return mpq(v)
    if isinstance(v, str):
        return mpq(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DomainError(f"non-finite value {v!r}")
        return mpq(Fraction(v))
    raise TypeError(f"cannot convert {type(v).__name__} to a rational")


_MPQ = type(mpq(0))
_ZERO = mpq(0)
_ONE = mpq(1)


class QQi:
    """Exact complex number re + i*im with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, complex):
            self.re = _to_mpq(re.real)
            self.im = _to_mpq(re.imag) + _to_mpq(im)
            return
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @staticmethod
    def _mk(re, im) -> "QQi":
        r = object.__new__(QQi)
        r.re = re
        r.im = im
        return r

    @classmethod
    def coerce(cls, v) -> "QQi":
        if isinstance(v, QQi):
            return v
        if isinstance(v, str):
            return parse_scalar(v)
        return cls(v)

    # arithmetic
    def __add__(self, o):
        if not isinstance(o, QQi):
            try:
                o = QQi(o)
            except TypeError:
                return NotImplemented
        return QQi._mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, QQi):
            try:
                o = QQi(o)
            except TypeError:
                return NotImplemented
        return QQi._mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QQi.coerce(o) - self

    def __neg__(self):
        return QQi._mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, o):
        if not isinstance(o, QQi):
            try:
                o = QQi(o)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return QQi._mk(a * c, _ZERO)
        return QQi._mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "QQi":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by zero scalar")
        return QQi._mk(self.re / n, -self.im / n)

    def __truediv__(self, o):
        o = QQi.coerce(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return QQi.coerce(o) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QQi":
        return QQi._mk(self.re, -self.im)

    def abs2(self) -> mpq:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, QQi):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction, _MPQ)):
            return self.im == 0 and self.re == o
        if isinstance(o, complex):
            return complex(self) == o
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"QQi({self})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return str(re)
        if not re:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"

    def to_json(self) -> dict:
        return {"re": _rat_str(self.re), "im": _rat_str(self.im)}


def _rat_str(r: mpq) -> str:
    return f"{r.numerator}/{r.denominator}"


ZERO = QQi._mk(_ZERO, _ZERO)
ONE = QQi._mk(_ONE, _ZERO)
I = QQi._mk(_ZERO, _ONE)

Scalar = Union[QQi, complex]


# parsing

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_scalar(text: str) -> QQi:
    """Parse an exact scalar such as ``1/2``, ``2/3+0i`` or ``(1+i)/4``."""
    src = text.strip().replace("j", "i").replace("^", "**")
    if not src:
        raise DomainError("empty scalar")
    try:
        tree = ast.parse(_mark_imag(src), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse scalar {text!r}") from exc
    return _eval_node(tree.body, text)


def _mark_imag(src: str) -> str:
    # "3i" -> "3*I", lone "i" -> "I"
    out = []
    for k, ch in enumerate(src):
        if ch == "i":
            prev = src[k - 1] if k else ""
            if prev.isdigit() or prev == ")":
                out.append("*I")
            else:
                out.append("I")
        else:
            out.append(ch)
    return "".join(out)


def _eval_node(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return QQi(node.value)
    if isinstance(node, ast.Constant) and isinstance(node.value, float):
        return QQi(mpq(repr(node.value)))
    if isinstance(node, ast.Name) and node.id == "I":
        return I
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        a = _eval_node(node.left, text)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise DomainError(f"only integer powers allowed in {text!r}")
            return a ** node.right.value
        b = _eval_node(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if not b:
            raise DomainError(f"division by zero in {text!r}")
        return a / b
    raise DomainError(f"unsupported syntax in scalar {text!r}")


# float backend helpers

def float_eq(a: complex, b: complex, tol: float = DEFAULT_TOL) -> bool:
    return abs(complex(a) - complex(b)) <= tol


def scalar_to_json(v: Scalar) -> dict:
    if isinstance(v, QQi):
        return v.to_json()
    c = complex(v)
    return {"re": c.real, "im": c.imag}


def scalar_from_json(obj) -> Scalar:
    """Inverse of ``scalar_to_json``; strings give exact, numbers give float."""
    if isinstance(obj, str):
        return parse_scalar(obj)
    if isinstance(obj, (int,)):
        return QQi(obj)
    if isinstance(obj, dict):
        re, im = obj.get("re", 0), obj.get("im", 0)
        if isinstance(re, float) or isinstance(im, float):
            return complex(float(re), float(im))
        return QQi(mpq(str(re)), mpq(str(im)))
    if isinstance(obj, float):
        return complex(obj)
    raise DomainError(f"cannot read scalar from {obj!r}")


# the deformation parameter

CONTRACTIVE = "contractive"
UNIMODULAR = "unimodular"
EXPANDING = "expanding"


@dataclass(frozen=True, eq=False)
class QParam:
    """The deformation parameter together with its modulus class."""

    q: QQi
    modulus_class: str
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def pow(self, n: int) -> QQi:
        """q**n, exact, cached; negative n allowed."""
        cache = self._powers
        v = cache.get(n)
        if v is None:
            v = self.q ** n
            cache[n] = v
        return v

    def abs2(self) -> mpq:
        return self.q.abs2()

    def require_contractive(self) -> None:
        if self.modulus_class != CONTRACTIVE:
            raise DomainError(f"q = {self.q} is {self.modulus_class}; this operation needs |q| < 1")

    def __eq__(self, other):
        return isinstance(other, QParam) and self.q == other.q

    def __hash__(self):
        return hash(self.q)

    def __repr__(self):
        return f"QParam({self.q}, {self.modulus_class})"

    def to_json(self) -> dict:
        return self.q.to_json()


def make_q(value) -> QParam:
    """Build the deformation parameter, rejecting 0 and 1."""
    q = QQi.coerce(value)
    if not q:
        raise DomainError("q must be nonzero")
    if q == ONE:
        raise DomainError("q must differ from 1")
    m = q.abs2()
    if m < 1:
        cls = CONTRACTIVE
    elif m == 1:
        cls = UNIMODULAR
    else:
        cls = EXPANDING
    return QParam(q, cls)

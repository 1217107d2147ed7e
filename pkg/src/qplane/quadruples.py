"""Quadruples of two-variable series modelling tensor products of germ pairs.

A quadruple (z1z2, z1w2, w1z2, w1w2) lists one series on each product of
axes.  In every component the first variable belongs to the first tensor
factor and the second variable to the second one.  A compatible quadruple
satisfies the four edge conditions

    z1z2(u, 0) = z1w2(u, 0)      w1z2(u, 0) = w1w2(u, 0)
    z1z2(0, v) = w1z2(0, v)      z1w2(0, v) = w1w2(0, v)

A free quadruple carries no conditions.
"""

from __future__ import annotations

from typing import Iterable, List, Tuple

from .coeff import ONE, QParam, QQi
from .graded_sheaf import GermPair, GradedElement
from .qalgebra import UsageError
from .series import Series1, Series2, Trunc, tmin

COMPONENTS = ("z1z2", "z1w2", "w1z2", "w1w2")
VARIABLES = ("z1", "z2", "w1", "w2")


class CompatibilityError(ValueError):
    """Raised when a quadruple declared compatible violates an edge condition."""


class Quadruple:
    __slots__ = ("parts", "compat")

    def __init__(self, z1z2: Series2, z1w2: Series2, w1z2: Series2, w1w2: Series2,
                 compat: bool = True, check: bool = True):
        self.parts: Tuple[Series2, Series2, Series2, Series2] = (z1z2, z1w2, w1z2, w1w2)
        self.compat = compat
        if compat and check:
            bad = self.edge_defects()
            if bad:
                raise CompatibilityError(f"edge condition fails: {', '.join(bad)}")

    @classmethod
    def free(cls, *parts: Series2) -> "Quadruple":
        return cls(*parts, compat=False)

    @classmethod
    def zero(cls, trunc: Trunc = None, compat: bool = True) -> "Quadruple":
        z = Series2.zero(trunc)
        return cls(z, z, z, z, compat=compat, check=False)

    @classmethod
    def const(cls, c, trunc: Trunc = None) -> "Quadruple":
        s = Series2.const(c, trunc)
        return cls(s, s, s, s, check=False)

    @property
    def z1z2(self) -> Series2:
        return self.parts[0]

    @property
    def z1w2(self) -> Series2:
        return self.parts[1]

    @property
    def w1z2(self) -> Series2:
        return self.parts[2]

    @property
    def w1w2(self) -> Series2:
        return self.parts[3]

    def __getitem__(self, k: int) -> Series2:
        """1-based access matching the usual numbering of the components."""
        return self.parts[k - 1]

    @property
    def trunc(self) -> Trunc:
        return tmin(*(p.trunc for p in self.parts))

    def edge_defects(self) -> List[str]:
        a, b, c, d = self.parts
        out = []
        if not a.eval_v0().agrees(b.eval_v0()):
            out.append("z1z2(u,0) = z1w2(u,0)")
        if not c.eval_v0().agrees(d.eval_v0()):
            out.append("w1z2(u,0) = w1w2(u,0)")
        if not a.eval_u0().agrees(c.eval_u0()):
            out.append("z1z2(0,v) = w1z2(0,v)")
        if not b.eval_u0().agrees(d.eval_u0()):
            out.append("z1w2(0,v) = w1w2(0,v)")
        return out

    def is_compatible(self) -> bool:
        return not self.edge_defects()

    def as_free(self) -> "Quadruple":
        return Quadruple(*self.parts, compat=False)

    def as_compatible(self) -> "Quadruple":
        return Quadruple(*self.parts, compat=True)

    def _combine(self, other: "Quadruple", op) -> "Quadruple":
        parts = [op(a, b) for a, b in zip(self.parts, other.parts)]
        return Quadruple(*parts, compat=self.compat and other.compat, check=False)

    def __add__(self, other: "Quadruple") -> "Quadruple":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "Quadruple") -> "Quadruple":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "Quadruple":
        return Quadruple(*(-p for p in self.parts), compat=self.compat, check=False)

    def scale(self, c) -> "Quadruple":
        return Quadruple(*(p.scale(c) for p in self.parts), compat=self.compat, check=False)

    def map(self, fn) -> "Quadruple":
        return Quadruple(*(fn(p) for p in self.parts), compat=self.compat, check=False)

    def truncate(self, n: Trunc) -> "Quadruple":
        return self.map(lambda p: p.truncate(n))

    def agrees(self, other: "Quadruple", window: Trunc = None) -> bool:
        return all(a.agrees(b, window) for a, b in zip(self.parts, other.parts))

    def is_zero(self, window: Trunc = None) -> bool:
        return all(p.is_zero(window) for p in self.parts)

    def max_defect(self, other: "Quadruple", window: Trunc = None) -> float:
        return max(a.max_defect(b, window) for a, b in zip(self.parts, other.parts))

    def __eq__(self, other):
        if not isinstance(other, Quadruple):
            return NotImplemented
        return self.compat == other.compat and self.parts == other.parts

    __hash__ = None

    def __repr__(self):
        kind = "compatible" if self.compat else "free"
        return f"Quadruple[{kind}]({', '.join(map(repr, self.parts))})"

    def to_json(self) -> dict:
        out = {"compat": self.compat}
        for name, p in zip(COMPONENTS, self.parts):
            out[name] = p.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "Quadruple":
        parts = [Series2.from_json(obj[name]) for name in COMPONENTS]
        return cls(*parts, compat=bool(obj.get("compat", True)))


def require_compatible(*qs: Quadruple) -> None:
    for z in qs:
        if not z.compat:
            raise UsageError("operation needs a compatible quadruple, got a free one")


def tensor_embed(a: GradedElement, b: GradedElement) -> Quadruple:
    """(f, g) (x) (u, v) -> (f u, f v, g u, g v)."""
    f, g = Series2.from_u(a.f), Series2.from_u(a.g)
    u, v = Series2.from_v(b.f), Series2.from_v(b.g)
    return Quadruple(f * u, f * v, g * u, g * v, check=False)


def mult_vars(var: str, z: Quadruple) -> Quadruple:
    """Multiplication by one of the coordinates z1, z2, w1, w2."""
    require_compatible(z)
    a, b, c, d = z.parts
    t = z.trunc
    zero = Series2.zero(None if t is None else t + 1)
    if var == "z1":
        return Quadruple(a.mul_u(), b.mul_u(), zero, zero, check=False)
    if var == "z2":
        return Quadruple(a.mul_v(), zero, c.mul_v(), zero, check=False)
    if var == "w1":
        return Quadruple(zero, zero, c.mul_u(), d.mul_u(), check=False)
    if var == "w2":
        return Quadruple(zero, b.mul_v(), zero, d.mul_v(), check=False)
    raise ValueError(f"unknown variable {var!r}; expected one of {VARIABLES}")


LIFTED = ("N_x1", "N_y1", "M_x2", "M_y2")


def op_M_x2(z: Quadruple) -> Quadruple:
    """The first-factor-preserving lift of (g'(0), (g - g(0))/w)."""
    require_compatible(z)
    _, b, _, d = z.parts
    return Quadruple(Series2.from_u(b.dv_at_v0()), b.dq_v(),
                     Series2.from_u(d.dv_at_v0()), d.dq_v(), check=False)


def op_M_y2(z: Quadruple, l: int, q: QParam) -> Quadruple:
    require_compatible(z)
    a, _, c, _ = z.parts
    qq = q.q
    k = q.pow(l + 1)
    return Quadruple(a.dq_v().dilate(ONE, qq), Series2.from_u(a.dv_at_v0()),
                     c.dq_v().dilate(ONE, qq), Series2.from_u(c.dv_at_v0()),
                     check=False).scale(k)


def op_N_x1(z: Quadruple) -> Quadruple:
    require_compatible(z)
    a, b, _, _ = z.parts
    return Quadruple(a.dq_u(), b.dq_u(),
                     Series2.from_v(a.du_at_u0()), Series2.from_v(b.du_at_u0()), check=False)


def op_N_y1(z: Quadruple, d: int, q: QParam) -> Quadruple:
    require_compatible(z)
    _, _, c, e = z.parts
    qq = q.q
    k = q.pow(d + 1)
    return Quadruple(Series2.from_v(c.du_at_u0()), Series2.from_v(e.du_at_u0()),
                     c.dq_u().dilate(qq, ONE), e.dq_u().dilate(qq, ONE),
                     check=False).scale(k)


def lifted_ops(which: str, z: Quadruple, index: int, q: QParam) -> Quadruple:
    """Apply a lifted operator; ``index`` is d for N-operators and l for M-operators."""
    if which == "N_x1":
        return op_N_x1(z)
    if which == "N_y1":
        return op_N_y1(z, index, q)
    if which == "M_x2":
        return op_M_x2(z)
    if which == "M_y2":
        return op_M_y2(z, index, q)
    raise ValueError(f"unknown operator {which!r}; expected one of {LIFTED}")


def pi_dl(z: Quadruple, d: int, l: int, q: QParam) -> GradedElement:
    """Diagonal multiplication (z1z2(t, q**d t), w1w2(q**l t, t)), normalized."""
    require_compatible(z)
    f = z.z1z2.on_line(ONE, q.pow(d))
    g = z.w1w2.on_line(q.pow(l), ONE)
    return GradedElement(GermPair(f, g), d + l)


# elementary tensor decomposition over monomial germ pairs

Basis = Tuple[str, int]   # ("1", 0), ("z", i) or ("w", k)


def basis_pair(b: Basis, trunc: Trunc = None) -> GermPair:
    kind, n = b
    if kind == "1":
        return GermPair.const(1, trunc)
    if kind == "z":
        return GermPair(Series1.monomial(n, 1, trunc), Series1.zero(trunc))
    return GermPair(Series1.zero(trunc), Series1.monomial(n, 1, trunc))


def _axis_basis(side: str, n: int) -> Basis:
    return ("1", 0) if n == 0 else (side, n)


def elementary_decomposition(z: Quadruple) -> List[Tuple[QQi, Basis, Basis]]:
    """Coefficients c with z = sum c * tensor(b1, b2) over monomial basis pairs."""
    require_compatible(z)
    terms = {}
    sides = (("z", "z"), ("z", "w"), ("w", "z"), ("w", "w"))
    for part, (s1, s2) in zip(z.parts, sides):
        for (i, j), v in part.c.items():
            key = (_axis_basis(s1, i), _axis_basis(s2, j))
            prev = terms.get(key)
            if prev is not None and prev != v:
                raise CompatibilityError(f"edge coefficient mismatch at {key}")
            terms[key] = v
    return sorted(((v, a, b) for (a, b), v in terms.items()), key=lambda t: (t[1], t[2]))


def reconstruct(terms: Iterable[Tuple[QQi, Basis, Basis]], trunc: Trunc = None) -> Quadruple:
    out = Quadruple.zero(None)
    for c, a, b in terms:
        e = tensor_embed(GradedElement(basis_pair(a), 0), GradedElement(basis_pair(b), 0))
        out = out + e.scale(c)
    return out.truncate(trunc)

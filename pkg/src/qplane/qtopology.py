"""Region algebra for the q-topology on the union of two coordinate axes.

A region is the origin flag plus, on each axis, a union of primitives of the
punctured axis.  Radial primitives are described through the squared modulus
s = |z|**2, which stays rational for Gaussian rational q since |q|**2 is:

  Interval(lo, hi)     {lo < s < hi} with closed/open ends, hi may be infinite
  AnnulusFamily(lo, hi) the union over k >= 0 of Interval(lo, hi) / rho**k,
                        rho = |q|**2, with hi < lo / rho (otherwise it is an
                        interval reaching infinity)

and the discrete primitives are finite point sets, backward orbits
{q**-k p}, forward orbits {q**k p} (whose limit 0 is the origin flag) and
open off-center disks, which are only used to build Runge neighbourhoods.

Membership is exact.  Containment and equality are decided semantically:
beyond the largest finite endpoint every radial set is invariant under
s -> s / rho, so radial containment reduces to a bounded window, and orbit
containment to finitely many points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .coeff import ZERO, DomainError, QParam, QQi, make_q, parse_scalar

X_AXIS, Y_AXIS = "x", "y"
AXES = (X_AXIS, Y_AXIS)

MAX_ORBIT_STEPS = 100_000


class UndecidedError(RuntimeError):
    """Raised when a containment question leaves the decidable fragment."""


def _rat(v) -> mpq:
    if isinstance(v, QQi):
        if v.im:
            raise DomainError(f"expected a real value, got {v}")
        return v.re
    if isinstance(v, str):
        return _rat(parse_scalar(v))
    return mpq(v)


def _rat_json(r: Optional[mpq]) -> Optional[str]:
    if r is None:
        return None
    return f"{r.numerator}/{r.denominator}"


def _log(r: mpq) -> float:
    return math.log(int(r.numerator)) - math.log(int(r.denominator))


def _sqrt_sum_le(a: mpq, b: mpq, c: mpq) -> bool:
    """sqrt(a) + sqrt(b) <= sqrt(c) for nonnegative rationals, exactly."""
    rest = c - a - b
    return rest >= 0 and 4 * a * b <= rest * rest


def _sqrt_sum_lt(a: mpq, b: mpq, c: mpq) -> bool:
    rest = c - a - b
    return rest > 0 and 4 * a * b < rest * rest


# primitives

@dataclass(frozen=True)
class Interval:
    lo: mpq
    hi: Optional[mpq]          # None means infinity
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo < 0:
            raise DomainError("squared radii are nonnegative")
        if self.lo == 0 and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    def is_empty(self) -> bool:
        if self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, s: mpq) -> bool:
        if s < self.lo or (s == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return s < self.hi or (s == self.hi and self.hi_closed)

    def scaled(self, r: mpq) -> "Interval":
        return Interval(self.lo * r, None if self.hi is None else self.hi * r,
                        self.lo_closed, self.hi_closed)

    def is_open(self) -> bool:
        return not self.lo_closed and not self.hi_closed

    def sort_key(self):
        return (0, self.lo, float("inf") if self.hi is None else self.hi,
                not self.lo_closed, not self.hi_closed)

    def to_json(self) -> dict:
        return {"type": "interval", "s_lo": _rat_json(self.lo), "s_hi": _rat_json(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}


@dataclass(frozen=True)
class AnnulusFamily:
    base: Interval
    rho: mpq

    def contains(self, s: mpq) -> bool:
        lo, rho = self.base.lo, self.rho
        if s < lo:
            return False
        # the only candidate is the largest k with s * rho**k >= lo
        k = max(0, int(math.floor((_log(s) - _log(lo)) / -_log(rho))) - 1)
        while k > 0 and s * rho ** k < lo:
            k -= 1
        while s * rho ** (k + 1) >= lo:
            k += 1
        return self.base.contains(s * rho ** k)

    def sort_key(self):
        return (1,) + self.base.sort_key()[1:]

    def to_json(self) -> dict:
        b = self.base
        return {"type": "annulus_family", "s_lo": _rat_json(b.lo), "s_hi": _rat_json(b.hi),
                "lo_closed": b.lo_closed, "hi_closed": b.hi_closed}


def make_family(base: Interval, rho: mpq):
    """The union of base / rho**k over k >= 0, normalized."""
    if base.is_empty():
        return None
    if base.hi is None or base.lo == 0:
        return Interval(base.lo, None, base.lo_closed, False)
    edge = base.lo / rho
    if base.hi > edge or (base.hi == edge and (base.lo_closed or base.hi_closed)):
        return Interval(base.lo, None, base.lo_closed, False)
    return AnnulusFamily(base, rho)


@dataclass(frozen=True)
class Points:
    values: Tuple[QQi, ...]

    def sort_key(self):
        return (2, tuple((v.re, v.im) for v in self.values))

    def to_json(self) -> dict:
        return {"type": "points", "values": [v.to_json() for v in self.values]}


@dataclass(frozen=True)
class BackwardOrbit:
    base: QQi

    def sort_key(self):
        return (3, self.base.re, self.base.im)

    def to_json(self) -> dict:
        return {"type": "backward_orbit", "base": self.base.to_json()}


@dataclass(frozen=True)
class ForwardOrbit:
    base: QQi

    def sort_key(self):
        return (4, self.base.re, self.base.im)

    def to_json(self) -> dict:
        return {"type": "forward_orbit", "base": self.base.to_json()}


@dataclass(frozen=True)
class Disk:
    """Open disk |z - center|**2 < s_radius."""

    center: QQi
    s_radius: mpq

    def contains(self, z: QQi) -> bool:
        return (z - self.center).abs2() < self.s_radius

    def contains_origin_ball(self, s: mpq) -> bool:
        """Whether the closed ball |z|**2 <= s lies inside the disk."""
        return _sqrt_sum_lt(self.center.abs2(), s, self.s_radius)

    def sort_key(self):
        return (5, self.center.re, self.center.im, self.s_radius)

    def to_json(self) -> dict:
        return {"type": "disk", "center": self.center.to_json(), "s_radius": _rat_json(self.s_radius)}


Primitive = Union[Interval, AnnulusFamily, Points, BackwardOrbit, ForwardOrbit, Disk]


def _orbit_index(z: QQi, base: QQi, q: QParam, forward: bool) -> Optional[int]:
    """k >= 0 with z = q**k base (forward) or z = q**-k base (backward)."""
    if not z or not base:
        return None
    ratio = z.abs2() / base.abs2()
    rho = q.abs2()
    est = _log(ratio) / _log(rho)
    if not forward:
        est = -est
    k0 = int(round(est))
    for k in (k0, k0 - 1, k0 + 1):
        if k < 0:
            continue
        if forward and q.pow(k) * base == z:
            return k
        if not forward and q.pow(k) * z == base:
            return k
    return None


# interval lists

def _merge(ivs: Iterable[Interval]) -> List[Interval]:
    items = sorted((iv for iv in ivs if not iv.is_empty()),
                   key=lambda iv: (iv.lo, not iv.lo_closed))
    out: List[Interval] = []
    for iv in items:
        if out:
            cur = out[-1]
            touches = (cur.hi is None or iv.lo < cur.hi
                       or (iv.lo == cur.hi and (cur.hi_closed or iv.lo_closed)))
            if touches:
                if cur.hi is None:
                    continue
                if iv.hi is None or iv.hi > cur.hi:
                    out[-1] = Interval(cur.lo, iv.hi, cur.lo_closed, iv.hi_closed)
                elif iv.hi == cur.hi and iv.hi_closed and not cur.hi_closed:
                    out[-1] = Interval(cur.lo, cur.hi, cur.lo_closed, True)
                continue
        out.append(iv)
    return out


def _iv_subset(a: Interval, b: Interval) -> bool:
    if a.lo < b.lo or (a.lo == b.lo and a.lo_closed and not b.lo_closed):
        return False
    if b.hi is None:
        return True
    if a.hi is None:
        return False
    return a.hi < b.hi or (a.hi == b.hi and (b.hi_closed or not a.hi_closed))


def _clip(iv: Interval, w: mpq) -> Optional[Interval]:
    if iv.lo > w:
        return None
    if iv.hi is None or iv.hi > w:
        return Interval(iv.lo, w, iv.lo_closed, True)
    return iv


# axis sets

@dataclass(frozen=True)
class AxisSet:
    """A subset of one punctured axis."""

    parts: Tuple[Primitive, ...] = ()

    def of(self, kind) -> List:
        return [p for p in self.parts if isinstance(p, kind)]

    def radial(self) -> List[Union[Interval, AnnulusFamily]]:
        return [p for p in self.parts if isinstance(p, (Interval, AnnulusFamily))]

    def points(self) -> List[QQi]:
        return [v for p in self.of(Points) for v in p.values]

    def is_empty(self) -> bool:
        return not self.parts

    def radial_contains(self, s: mpq) -> bool:
        return any(p.contains(s) for p in self.radial())

    def contains(self, z: QQi, q: QParam) -> bool:
        if not z:
            return False
        s = z.abs2()
        if self.radial_contains(s):
            return True
        if any(z == v for v in self.points()):
            return True
        if any(d.contains(z) for d in self.of(Disk)):
            return True
        if any(_orbit_index(z, o.base, q, False) is not None for o in self.of(BackwardOrbit)):
            return True
        return any(_orbit_index(z, o.base, q, True) is not None for o in self.of(ForwardOrbit))

    def threshold(self) -> mpq:
        """A bound S beyond which the radial set is invariant under s -> s/rho."""
        vals = [mpq(1)]
        for p in self.radial():
            iv = p if isinstance(p, Interval) else p.base
            vals.append(iv.lo)
            if iv.hi is not None:
                vals.append(iv.hi)
        return max(vals)

    def extent(self) -> mpq:
        """A bound on |z|**2 for the bounded discrete parts."""
        vals = [self.threshold()]
        vals += [v.abs2() for v in self.points()]
        vals += [o.base.abs2() for o in self.of(ForwardOrbit)]
        vals += [2 * (d.center.abs2() + d.s_radius) for d in self.of(Disk)]
        return max(vals)

    def window_intervals(self, w: mpq) -> List[Interval]:
        out = []
        for p in self.radial():
            if isinstance(p, Interval):
                c = _clip(p, w)
                if c is not None:
                    out.append(c)
            else:
                k = 0
                while True:
                    iv = p.base.scaled(p.rho ** -k)
                    c = _clip(iv, w)
                    if c is None:
                        break
                    out.append(c)
                    k += 1
        return _merge(out)

    def is_zero_neighbourhood_at(self, z: QQi) -> bool:
        """Whether every point q**j z, j >= 0, is known to lie in the set."""
        s = z.abs2()
        for p in self.radial():
            if isinstance(p, Interval) and p.lo == 0 and p.contains(s):
                return True
        return any(d.contains_origin_ball(s) for d in self.of(Disk))

    def has_zero_neighbourhood(self) -> bool:
        for p in self.radial():
            if isinstance(p, Interval) and p.lo == 0 and (p.hi is None or p.hi > 0):
                return True
        return any(d.center.abs2() < d.s_radius for d in self.of(Disk))

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]


def _axis_canonical(parts: Iterable[Primitive], rho: mpq) -> AxisSet:
    radial: List[Interval] = []
    families: List[AnnulusFamily] = []
    pts: List[QQi] = []
    rest: List[Primitive] = []
    for p in parts:
        if isinstance(p, Interval):
            if not p.is_empty():
                radial.append(p)
        elif isinstance(p, AnnulusFamily):
            fam = make_family(p.base, rho)
            if isinstance(fam, Interval):
                radial.append(fam)
            elif fam is not None:
                families.append(fam)
        elif isinstance(p, Points):
            pts.extend(v for v in p.values if v)
        elif isinstance(p, (BackwardOrbit, ForwardOrbit)):
            if p.base:
                rest.append(p)
        elif isinstance(p, Disk):
            if p.s_radius > 0:
                rest.append(p)
        else:
            raise TypeError(f"unknown primitive {p!r}")
    merged = _merge(radial)
    uniq = sorted(set(pts), key=lambda v: (v.re, v.im))
    items: List[Primitive] = list(merged) + sorted(set(families), key=lambda f: f.sort_key())
    items += sorted(set(rest), key=lambda p: p.sort_key())
    if uniq:
        items.append(Points(tuple(uniq)))
    return AxisSet(tuple(items))


# regions

@dataclass(frozen=True, eq=False)
class QRegion:
    q: QParam
    origin: bool = False
    x: AxisSet = AxisSet()
    y: AxisSet = AxisSet()

    def __post_init__(self):
        self.q.require_contractive()
        rho = self.q.abs2()
        object.__setattr__(self, "x", _axis_canonical(self.x.parts, rho))
        object.__setattr__(self, "y", _axis_canonical(self.y.parts, rho))

    @property
    def rho(self) -> mpq:
        return self.q.abs2()

    def axis(self, name: str) -> AxisSet:
        if name == X_AXIS:
            return self.x
        if name == Y_AXIS:
            return self.y
        raise ValueError(f"unknown axis {name!r}")

    # constructors
    @classmethod
    def empty(cls, q: QParam) -> "QRegion":
        return cls(q)

    @classmethod
    def whole(cls, q: QParam) -> "QRegion":
        full = AxisSet((Interval(mpq(0), None, False, False),))
        return cls(q, True, full, full)

    @classmethod
    def on_axis(cls, q: QParam, axis: str, *parts: Primitive, origin: bool = False) -> "QRegion":
        a = AxisSet(tuple(parts))
        if axis == X_AXIS:
            return cls(q, origin, a, AxisSet())
        if axis == Y_AXIS:
            return cls(q, origin, AxisSet(), a)
        raise ValueError(f"unknown axis {axis!r}")

    @classmethod
    def origin_disk(cls, q: QParam, s_radius, closed: bool = False, axis: Optional[str] = None) -> "QRegion":
        """|z|**2 < s_radius (or <=) on one axis, or on both when axis is None."""
        s = _rat(s_radius)
        if s <= 0:
            raise DomainError("radius must be positive")
        a = AxisSet((Interval(mpq(0), s, False, closed),))
        if axis is None:
            return cls(q, True, a, a)
        return cls.on_axis(q, axis, *a.parts, origin=True)

    @classmethod
    def annulus(cls, q: QParam, axis: str, s_lo, s_hi, lo_closed=True, hi_closed=True) -> "QRegion":
        lo = _rat(s_lo)
        hi = None if s_hi is None else _rat(s_hi)
        if lo == 0:
            raise DomainError("an annulus has a positive inner radius; use origin_disk")
        return cls.on_axis(q, axis, Interval(lo, hi, lo_closed, hi_closed))

    @classmethod
    def from_points(cls, q: QParam, points: Iterable["QPoint"]) -> "QRegion":
        origin = False
        xs, ys = [], []
        for p in points:
            if p.is_origin():
                origin = True
            elif p.axis == X_AXIS:
                xs.append(p.value)
            else:
                ys.append(p.value)
        return cls(q, origin, AxisSet((Points(tuple(xs)),)), AxisSet((Points(tuple(ys)),)))

    # set operations
    def union(self, other: "QRegion") -> "QRegion":
        _same_q(self, other)
        return QRegion(self.q, self.origin or other.origin,
                       AxisSet(self.x.parts + other.x.parts), AxisSet(self.y.parts + other.y.parts))

    __or__ = union

    def contains_point(self, p: "QPoint") -> bool:
        if p.is_origin():
            return self.origin
        return self.axis(p.axis).contains(p.value, self.q)

    def is_empty(self) -> bool:
        return not self.origin and self.x.is_empty() and self.y.is_empty()

    def is_whole(self) -> bool:
        return self.issuperset(QRegion.whole(self.q))

    def issubset(self, other: "QRegion") -> bool:
        _same_q(self, other)
        if self.origin and not other.origin:
            return False
        return all(_axis_subset(self.axis(a), other.axis(a), other.origin, self.q) for a in AXES)

    def issuperset(self, other: "QRegion") -> bool:
        return other.issubset(self)

    def __eq__(self, other):
        if not isinstance(other, QRegion):
            return NotImplemented
        return self.q == other.q and self.issubset(other) and other.issubset(self)

    __hash__ = None

    def scaled_by_q(self) -> "QRegion":
        """The image q * R."""
        return QRegion(self.q, self.origin, _scale_axis(self.x, self.q), _scale_axis(self.y, self.q))

    def __repr__(self):
        return f"QRegion(origin={self.origin}, x={self.x.parts}, y={self.y.parts})"

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "origin": self.origin,
                "x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, obj, q: Optional[QParam] = None) -> "QRegion":
        if q is None:
            if "q" not in obj:
                raise DomainError("region JSON needs a q")
            from .coeff import scalar_from_json
            q = make_q(scalar_from_json(obj["q"]))
        origin = bool(obj.get("origin", False))
        axes = {}
        for a in AXES:
            parts: List[Primitive] = []
            for item in obj.get(a, []):
                prim, o = primitive_from_json(item)
                origin = origin or o
                if prim is not None:
                    parts.append(prim)
            axes[a] = AxisSet(tuple(parts))
        return cls(q, origin, axes[X_AXIS], axes[Y_AXIS])


def _same_q(a: QRegion, b: QRegion) -> None:
    if a.q != b.q:
        raise DomainError("regions built for different q")


def _scale_axis(a: AxisSet, q: QParam) -> AxisSet:
    rho = q.abs2()
    qq = q.q
    out: List[Primitive] = []
    for p in a.parts:
        if isinstance(p, Interval):
            out.append(p.scaled(rho))
        elif isinstance(p, AnnulusFamily):
            out.append(p.base.scaled(rho))
            out.append(p)
        elif isinstance(p, Points):
            out.append(Points(tuple(qq * v for v in p.values)))
        elif isinstance(p, BackwardOrbit):
            out.append(Points((qq * p.base,)))
            out.append(p)
        elif isinstance(p, ForwardOrbit):
            out.append(ForwardOrbit(qq * p.base))
        elif isinstance(p, Disk):
            out.append(Disk(qq * p.center, rho * p.s_radius))
    return AxisSet(tuple(out))


# containment

def _axis_subset(a: AxisSet, b: AxisSet, b_origin: bool, q: QParam) -> bool:
    rho = q.abs2()
    if a.radial():
        if not _radial_subset(a, b, rho):
            if b.of(Disk):
                raise UndecidedError("radial part against a union with disks")
            return False
    for v in a.points():
        if not b.contains(v, q):
            return False
    for o in a.of(BackwardOrbit):
        if not _backward_subset(o.base, b, q):
            return False
    for o in a.of(ForwardOrbit):
        if not b_origin or not _forward_subset(o.base, b, q):
            return False
    for d in a.of(Disk):
        if not _disk_subset(d, b):
            return False
    return True


def _radial_subset(a: AxisSet, b: AxisSet, rho: mpq) -> bool:
    w = max(a.threshold(), b.threshold()) / rho
    ai = a.window_intervals(w)
    bi = b.window_intervals(w)
    return all(any(_iv_subset(x, y) for y in bi) for x in ai)


def _backward_subset(base: QQi, b: AxisSet, q: QParam) -> bool:
    bound = b.extent()
    qinv = q.q.inverse()
    z = base
    for _ in range(MAX_ORBIT_STEPS):
        if not b.contains(z, q):
            return False
        if any(_orbit_index(z, o.base, q, False) is not None for o in b.of(BackwardOrbit)):
            return True
        if z.abs2() > bound:
            # beyond the bound only the periodic radial part remains
            return b.radial_contains(z.abs2())
        z = z * qinv
    raise UndecidedError("backward orbit containment did not settle")


def _forward_subset(base: QQi, b: AxisSet, q: QParam) -> bool:
    z = base
    for _ in range(MAX_ORBIT_STEPS):
        if not b.contains(z, q):
            return False
        if b.is_zero_neighbourhood_at(z):
            return True
        if any(_orbit_index(z, o.base, q, True) is not None for o in b.of(ForwardOrbit)):
            return True
        z = z * q.q
    raise UndecidedError("forward orbit containment did not settle")


def _disk_subset(d: Disk, b: AxisSet) -> bool:
    c2, r2 = d.center.abs2(), d.s_radius
    for e in b.of(Disk):
        dist2 = (d.center - e.center).abs2()
        if _sqrt_sum_le(dist2, r2, e.s_radius):
            return True
    for p in b.radial():
        if not isinstance(p, Interval):
            continue
        outer_ok = p.hi is None or _sqrt_sum_le(c2, r2, p.hi)
        if p.lo == 0:
            inner_ok = True
        else:
            # |c| - r >= sqrt(lo)
            inner_ok = _sqrt_sum_le(r2, p.lo, c2)
        if outer_ok and inner_ok:
            return True
    raise UndecidedError("disk is not inside a single piece of the target")


# points

@dataclass(frozen=True)
class QPoint:
    """A point (lambda, 0) on the x-axis or (0, mu) on the y-axis."""

    axis: str
    value: QQi

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        object.__setattr__(self, "value", QQi.coerce(self.value))

    @classmethod
    def from_pair(cls, lam, mu) -> "QPoint":
        lam, mu = QQi.coerce(lam), QQi.coerce(mu)
        if lam and mu:
            raise DomainError(f"({lam}, {mu}) is off the union of the axes")
        if mu:
            return cls(Y_AXIS, mu)
        return cls(X_AXIS, lam)

    def is_origin(self) -> bool:
        return not self.value

    def pair(self) -> Tuple[QQi, QQi]:
        if self.axis == X_AXIS:
            return self.value, ZERO
        return ZERO, self.value

    def __eq__(self, other):
        if not isinstance(other, QPoint):
            return NotImplemented
        if self.is_origin() and other.is_origin():
            return True
        return self.axis == other.axis and self.value == other.value

    def __hash__(self):
        if self.is_origin():
            return hash(("origin",))
        return hash((self.axis, self.value))

    def to_json(self) -> dict:
        lam, mu = self.pair()
        return {"lambda": lam.to_json(), "mu": mu.to_json()}

    @classmethod
    def from_json(cls, obj) -> "QPoint":
        from .coeff import scalar_from_json
        if isinstance(obj, (list, tuple)):
            lam, mu = obj
        else:
            lam, mu = obj.get("lambda", 0), obj.get("mu", 0)
        lam, mu = scalar_from_json(lam), scalar_from_json(mu)
        if isinstance(lam, complex) or isinstance(mu, complex):
            raise DomainError("region points must be exact")
        return cls.from_pair(lam, mu)


# the operations

def q_closure_point(p: QPoint, q: QParam) -> QRegion:
    q.require_contractive()
    if p.is_origin():
        return QRegion.whole(q)
    return QRegion.on_axis(q, p.axis, BackwardOrbit(p.value))


def q_hull_point(p: QPoint, q: QParam) -> QRegion:
    q.require_contractive()
    if p.is_origin():
        return QRegion(q, origin=True)
    return QRegion.on_axis(q, p.axis, ForwardOrbit(p.value), origin=True)


def _closure_axis(a: AxisSet, rho: mpq) -> Optional[AxisSet]:
    """Closure of the parts of one axis; None when it reaches the origin."""
    out: List[Primitive] = []
    for p in a.parts:
        if isinstance(p, (Interval, AnnulusFamily)):
            iv = p if isinstance(p, Interval) else p.base
            if iv.lo == 0:
                return None
            fam = make_family(Interval(iv.lo, iv.hi, True, iv.hi is not None), rho)
            out.append(fam)
        elif isinstance(p, Points):
            out.extend(BackwardOrbit(v) for v in p.values)
        elif isinstance(p, BackwardOrbit):
            out.append(p)
        elif isinstance(p, ForwardOrbit):
            return None
        elif isinstance(p, Disk):
            if p.center.abs2() <= p.s_radius:
                return None
            raise DomainError("closure of an off-center disk is not supported")
    return AxisSet(tuple(out))


def q_closure_region(r: QRegion) -> QRegion:
    """Smallest q-closed region containing r.

    A q-closed set is closed, invariant under z -> z / q, and avoids the
    origin unless it is everything.
    """
    if r.origin:
        return QRegion.whole(r.q)
    cx = _closure_axis(r.x, r.rho)
    cy = _closure_axis(r.y, r.rho)
    if cx is None or cy is None:
        return QRegion.whole(r.q)
    return QRegion(r.q, False, cx, cy)


def is_q_closed(r: QRegion) -> bool:
    return q_closure_region(r) == r


def _axis_open(a: AxisSet, q: QParam) -> bool:
    rho = q.abs2()
    w = a.threshold() / rho
    for iv in a.window_intervals(w):
        if iv.lo > 0 and iv.lo_closed:
            return False
        if iv.hi is not None and iv.hi < w and iv.hi_closed:
            return False
    open_part = AxisSet(tuple(a.radial()) + tuple(a.of(Disk)))
    discrete = AxisSet(tuple(p for p in a.parts if isinstance(p, (Points, BackwardOrbit, ForwardOrbit))))
    return _axis_subset(discrete, open_part, True, q)


def is_q_open(r: QRegion) -> bool:
    """Open, containing the origin with a neighbourhood on both axes, and q R inside R."""
    if not r.origin:
        return False
    if not (r.x.has_zero_neighbourhood() and r.y.has_zero_neighbourhood()):
        return False
    if not (_axis_open(r.x, r.q) and _axis_open(r.y, r.q)):
        return False
    return r.scaled_by_q().issubset(r)


def runge_neighborhood(lam: QPoint, eps, delta, q: QParam) -> QRegion:
    """B(0, eps) together with B(q**m lam, |q|**m delta) for m = 0..n on the axis of lam.

    n is the least index with |q|**(n+1) (|lam| + delta) <= eps, decided exactly.
    """
    q.require_contractive()
    eps, delta = _rat(eps), _rat(delta)
    if eps <= 0 or delta <= 0:
        raise DomainError("radii must be positive")
    e2, d2 = eps * eps, delta * delta
    rho = q.abs2()
    l2 = lam.value.abs2()
    n = 0
    while not _sqrt_sum_le(rho ** (n + 1) * l2, rho ** (n + 1) * d2, e2):
        n += 1
    ball = Interval(mpq(0), e2, False, False)
    disks = []
    if not lam.is_origin():
        disks = [Disk(q.pow(m) * lam.value, rho ** m * d2) for m in range(n + 1)]
    own = AxisSet((ball,) + tuple(disks))
    other = AxisSet((ball,))
    if lam.axis == X_AXIS:
        return QRegion(q, True, own, other)
    return QRegion(q, True, other, own)


# JSON

def primitive_from_json(obj) -> Tuple[Optional[Primitive], bool]:
    """Read one primitive; the flag reports whether it adds the origin."""
    t = obj.get("type")

    def s_or_r(s_key, r_key):
        if obj.get(s_key) is not None:
            return _rat(obj[s_key])
        if obj.get(r_key) is not None:
            r = _rat(obj[r_key])
            return r * r
        return None

    if t == "interval" or t == "annulus" or t == "annulus_family":
        lo = s_or_r("s_lo", "r_lo") or mpq(0)
        hi = s_or_r("s_hi", "r_hi")
        closed = obj.get("closed")
        lc = obj.get("lo_closed", True if closed is None else closed)
        hc = obj.get("hi_closed", True if closed is None else closed)
        iv = Interval(lo, hi, lc, hc)
        if t == "annulus_family":
            return AnnulusFamily(iv, mpq(0)), False
        return iv, False
    if t == "origin_disk":
        s = s_or_r("s", "r")
        if s is None or s <= 0:
            raise DomainError("origin_disk needs a positive radius")
        return Interval(mpq(0), s, False, bool(obj.get("closed", False))), True
    if t == "full_axis":
        return Interval(mpq(0), None, False, False), True
    if t == "empty":
        return None, False
    if t == "points":
        vals = tuple(_exact(v) for v in obj.get("values", []))
        return Points(tuple(v for v in vals if v)), any(not v for v in vals)
    if t == "backward_orbit":
        return BackwardOrbit(_exact(obj["base"])), False
    if t == "forward_orbit":
        return ForwardOrbit(_exact(obj["base"])), True
    if t == "disk":
        s = s_or_r("s_radius", "radius")
        return Disk(_exact(obj["center"]), s), False
    raise DomainError(f"unknown region primitive {t!r}")


def _exact(v) -> QQi:
    from .coeff import scalar_from_json
    out = scalar_from_json(v)
    if isinstance(out, complex):
        raise DomainError("region data must be exact")
    return out

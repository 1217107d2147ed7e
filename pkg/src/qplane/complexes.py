"""The diagonal cochain complexes and their explicit inverses and homotopies.

For a pair of degrees (d, l) the diagonal complex reads

    0 -> Q --d0--> Q (+) Q --d1--> Q --pi--> O -> 0

with Q the compatible quadruples, O the germ pairs,

    d0 z      = ((w1 - q**(l+1) w2) z, (z2 - q**(d+1) z1) z)
    d1 (a, b) = (z2 - q**d z1) a + (q**l w2 - w1) b

and pi the normalized diagonal multiplication.  Cocycles of d1 are
parametrized by free quadruples through ``op_T``; the cohomology in the
middle is identified with germ pairs through ``phi``/``psi``.

The module also carries the one-sided formal complexes (layers of
two-variable series indexed by a grading degree), the assembled graded
differentials over all cells d + l <= D, and the corrections relating the
product in F_q to the diagonal multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .coeff import ONE, ZERO, QParam, QQi
from .graded_sheaf import (
    FqElement,
    GermPair,
    GradedElement,
    alpha_d,
    fq_mul,
    graded_component,
)
from .quadruples import (
    Quadruple,
    mult_vars,
    op_M_x2,
    op_M_y2,
    op_N_x1,
    op_N_y1,
    pi_dl,
    require_compatible,
    tensor_embed,
)
from .series import Series1, Series2, SeriesError, Trunc, divide_diagonal, tmin

Pair = Tuple[Quadruple, Quadruple]


class CocycleError(ValueError):
    """Raised when an input expected in a kernel is not there."""


class ImplicationFailure(AssertionError):
    """Raised when a hypothesis holds but the promised conclusion does not."""


@dataclass(frozen=True)
class DiagParams:
    d: int
    l: int
    q: QParam
    trunc: Trunc = None

    @property
    def c(self) -> QQi:
        """q**(d+1)."""
        return self.q.pow(self.d + 1)

    @property
    def c2(self) -> QQi:
        """q**(l+1)."""
        return self.q.pow(self.l + 1)


def _pair_add(a: Pair, b: Pair) -> Pair:
    return a[0] + b[0], a[1] + b[1]


def _pair_sub(a: Pair, b: Pair) -> Pair:
    return a[0] - b[0], a[1] - b[1]


def pair_agrees(a: Pair, b: Pair, window: Trunc = None) -> bool:
    return a[0].agrees(b[0], window) and a[1].agrees(b[1], window)


def pair_is_zero(a: Pair, window: Trunc = None) -> bool:
    return a[0].is_zero(window) and a[1].is_zero(window)


def pair_max_defect(a: Pair, b: Pair, window: Trunc = None) -> float:
    return max(a[0].max_defect(b[0], window), a[1].max_defect(b[1], window))


# the diagonal complex of a cell

def diag_d0(z: Quadruple, p: DiagParams) -> Pair:
    require_compatible(z)
    a = mult_vars("w1", z) - mult_vars("w2", z).scale(p.c2)
    b = mult_vars("z2", z) - mult_vars("z1", z).scale(p.c)
    return a, b


def diag_d1(ab: Pair, p: DiagParams) -> Quadruple:
    a, b = ab
    require_compatible(a, b)
    qd, ql = p.q.pow(p.d), p.q.pow(p.l)
    return (mult_vars("z2", a) - mult_vars("z1", a).scale(qd)
            + mult_vars("w2", b).scale(ql) - mult_vars("w1", b))


def diag_pi(z: Quadruple, p: DiagParams) -> GradedElement:
    return pi_dl(z, p.d, p.l, p.q)


def is_cocycle(ab: Pair, p: DiagParams) -> bool:
    return diag_d1(ab, p).is_zero()


def _require_cocycle(ab: Pair, p: DiagParams) -> None:
    require_compatible(*ab)
    if not is_cocycle(ab, p):
        raise CocycleError("not a cocycle")


# the operator T and its inverses

def op_T(theta: Quadruple, p: DiagParams) -> Pair:
    """Parametrization of the cocycles by free quadruples."""
    t1, t2, t3, t4 = theta.parts
    c, c2 = p.c, p.c2
    t = theta.trunc
    zero = Series2.zero(None if t is None else t + 2)
    t3_w1 = Series2.from_u(t3.eval_v0())      # theta3(w1, 0)
    t3_z2 = Series2.from_v(t3.eval_u0())      # theta3(0, z2)
    t2_z1 = Series2.from_u(t2.eval_v0())      # theta2(z1, 0)
    t2_w2 = Series2.from_v(t2.eval_u0())      # theta2(0, w2)
    z4 = t3_w1.mul_u() - t2_w2.mul_v().scale(c2) + t4.mul_u().mul_v()
    zeta = Quadruple(zero, t2.mul_v().scale(-c2), t3.mul_u(), z4, check=False)
    e1 = t2_z1.mul_u().scale(-c) + t3_z2.mul_v() + t1.mul_u().mul_v()
    eta = Quadruple(e1, t2.mul_u().scale(-c), t3.mul_v(), zero, check=False)
    return zeta, eta


def op_T_inverse(ab: Pair, p: DiagParams) -> Quadruple:
    """The free quadruple theta with T(theta) = (zeta, eta) for a cocycle."""
    _require_cocycle(ab, p)
    zeta, eta = ab
    c, c2 = p.c, p.c2
    try:
        t2 = zeta.z1w2.div_v().scale((-c2).inverse())
        t3 = zeta.w1z2.div_u()
        r4 = (zeta.w1w2 - Series2.from_u(t3.eval_v0()).mul_u()
              + Series2.from_v(t2.eval_u0()).mul_v().scale(c2))
        t4 = r4.div_u().div_v()
        r1 = (eta.z1z2 + Series2.from_u(t2.eval_v0()).mul_u().scale(c)
              - Series2.from_v(t3.eval_u0()).mul_v())
        t1 = r1.div_u().div_v()
    except SeriesError as exc:
        raise CocycleError(f"not a cocycle: {exc}") from exc
    return Quadruple(t1, t2, t3, t4, compat=False)


def op_Tinv_d0(alpha: Quadruple, p: DiagParams) -> Quadruple:
    """The free quadruple theta with T(theta) = d0(alpha), in closed form."""
    require_compatible(alpha)
    a1, a2, a3, a4 = alpha.parts
    t1 = a1.dq_u() - a1.dq_v().scale(p.c)
    t4 = a4.dq_v() - a4.dq_u().scale(p.c2)
    return Quadruple(t1, a2, a3, t4, compat=False)


def theta_conditions(theta: Quadruple, p: DiagParams) -> List[str]:
    """Names of the failing membership conditions of the coboundary parameters.

    theta2(0,0) = theta3(0,0),
    z theta1(z, c z)   = theta2(z, 0) - theta3(0, c z),   c  = q**(d+1),
    w theta4(c2 w, w)  = theta2(0, w) - theta3(c2 w, 0),  c2 = q**(l+1).
    """
    t1, t2, t3, t4 = theta.parts
    c, c2 = p.c, p.c2
    bad = []
    if t2.at00() != t3.at00():
        bad.append("theta2(0,0) = theta3(0,0)")
    lhs = t1.on_line(ONE, c).shift_up(1)
    rhs = t2.eval_v0() - t3.eval_u0().dilate(c)
    if not lhs.agrees(rhs):
        bad.append("z theta1(z, q^(d+1) z) = theta2(z,0) - theta3(0, q^(d+1) z)")
    lhs = t4.on_line(c2, ONE).shift_up(1)
    rhs = t2.eval_u0() - t3.eval_v0().dilate(c2)
    if not lhs.agrees(rhs):
        bad.append("w theta4(q^(l+1) w, w) = theta2(0,w) - theta3(q^(l+1) w, 0)")
    return bad


def theta_to_alpha(theta: Quadruple, p: DiagParams) -> Quadruple:
    """The compatible alpha with d0(alpha) = T(theta), for theta meeting the conditions."""
    bad = theta_conditions(theta, p)
    if bad:
        raise CocycleError("not a coboundary parameter: " + "; ".join(bad))
    zeta, eta = op_T(theta, p)
    t2, t3 = theta.z1w2, theta.w1z2
    try:
        a1 = eta.z1z2.div_linear(-p.c, ONE, message="not a coboundary")
        a4 = zeta.w1w2.div_linear(ONE, -p.c2, message="not a coboundary")
    except SeriesError as exc:
        raise CocycleError(str(exc)) from exc
    return Quadruple(a1, t2, t3, a4)


def phi(theta: Quadruple, p: DiagParams) -> GermPair:
    """The map from cocycle parameters onto the middle cohomology."""
    t1, t2, t3, t4 = theta.parts
    c, c2 = p.c, p.c2
    f = t1.on_line(ONE, c).shift_up(1) - t2.eval_v0() + t3.eval_u0().dilate(c)
    g = t4.on_line(c2, ONE).shift_up(1) - t2.eval_u0() + t3.eval_v0().dilate(c2)
    return GermPair(f, g)


def psi(fg: GermPair, p: DiagParams) -> Quadruple:
    """Right inverse of ``phi``: ((f - f(0))/z1, 0, f(0), (g - g(0))/w2)."""
    t = fg.trunc
    f0 = fg.f[0]
    return Quadruple(Series2.from_u(fg.f.diff_quot()), Series2.zero(t),
                     Series2.const(f0, t), Series2.from_v(fg.g.diff_quot()), compat=False)


def cohomology_H1_split(ab: Pair, p: DiagParams) -> Tuple[GermPair, Quadruple]:
    """Write a cocycle as d0(alpha) + T(psi(rep)) and return (rep, alpha)."""
    theta = op_T_inverse(ab, p)
    rep = phi(theta, p)
    alpha = theta_to_alpha(theta - psi(rep, p), p)
    return rep, alpha


# the contracting homotopy

def tau0(fg: GermPair, p: DiagParams) -> Quadruple:
    """(f(z1), f(z1) + g(w2) - f(0), g(0), g(w2))."""
    f, g = Series2.from_u(fg.f), Series2.from_v(fg.g)
    t = fg.trunc
    f0 = Series2.const(fg.f[0], t)
    return Quadruple(f, f + g - f0, Series2.const(fg.g[0], t), g)


def tau1(z: Quadruple, p: DiagParams) -> Pair:
    require_compatible(z)
    z1, z2, z3, z4 = z.parts
    q = p.q
    qd, ql = q.pow(p.d), q.pow(p.l)
    qdinv = q.pow(-p.d)
    diag1 = Series2.from_u(z1.on_line(ONE, qd))
    a1 = (z1 - diag1).div_linear(-qd, ONE, message="internal: diagonal remainder")
    m2 = z2.dq_uv()
    a2 = Series2.from_u(a1.eval_v0()) - m2.mul_v().scale(qdinv)
    a3 = Series2.from_v(a1.eval_u0())
    a4 = (Series2.const(a1.at00(), a1.trunc)
          - Series2.from_v(m2.eval_u0()).mul_v().scale(qdinv))
    diag4 = Series2.from_v(z4.on_line(ql, ONE))
    b4 = (z4 - diag4).div_linear(-ONE, ql, message="internal: diagonal remainder")
    m3 = z3.dq_uv()
    b1 = Series2.const(b4.at00(), b4.trunc) - Series2.from_v(m3.eval_u0()).mul_v()
    b2 = Series2.from_v(b4.eval_u0())
    b3 = Series2.from_u(b4.eval_v0()) - m3.mul_v()
    return Quadruple(a1, a2, a3, a4), Quadruple(b1, b2, b3, b4)


def homotopy_tau(z: Quadruple, p: DiagParams) -> Tuple[Quadruple, Pair]:
    """(tau0(pi(z)), tau1(z)); their images add up to z."""
    return tau0(diag_pi(z, p).pair, p), tau1(z, p)


# the coboundary criterion

def op_M_dl(ab: Pair, p: DiagParams) -> Quadruple:
    return op_M_x2(ab[0]) + op_M_y2(ab[1], p.l, p.q)


def op_N_dl(ab: Pair, p: DiagParams) -> Quadruple:
    return op_N_y1(ab[0], p.d, p.q) + op_N_x1(ab[1])


@dataclass
class CriterionResult:
    hypothesis: bool
    via_M: bool
    via_N: bool
    preimage: Optional[Quadruple] = None

    def __bool__(self):
        return self.hypothesis


def coboundary_criterion(ab: Pair, p: DiagParams) -> CriterionResult:
    """Test whether the M- or N-image of a cocycle dies under the diagonal map.

    When it does, the cocycle must be a coboundary; the preimage is built
    through the cocycle parameters and checked, and a failure raises
    ``ImplicationFailure``.
    """
    _require_cocycle(ab, p)
    q = p.q
    m_img = pi_dl(op_M_dl(ab, p), p.d, p.l + 1, q)
    n_img = pi_dl(op_N_dl(ab, p), p.d + 1, p.l, q)
    via_M, via_N = m_img.is_zero(), n_img.is_zero()
    res = CriterionResult(via_M or via_N, via_M, via_N)
    if not res.hypothesis:
        return res
    theta = op_T_inverse(ab, p)
    try:
        alpha = theta_to_alpha(theta, p)
    except CocycleError as exc:
        raise ImplicationFailure(f"hypothesis holds but {exc}") from exc
    if not pair_agrees(diag_d0(alpha, p), ab):
        raise ImplicationFailure("recovered preimage does not reproduce the cocycle")
    res.preimage = alpha
    return res


# the one-sided formal complexes

LEFT, RIGHT = "left", "right"


@dataclass
class FormalChainElement:
    """Layers h_0, ..., h_K of two-variable series indexed by the grading degree."""

    layers: List[Series2]
    side: str = LEFT

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def trunc(self) -> Trunc:
        return tmin(*(h.trunc for h in self.layers))

    def __add__(self, other):
        n = min(self.depth, other.depth)
        return FormalChainElement([a + b for a, b in zip(self.layers[:n], other.layers[:n])], self.side)

    def __sub__(self, other):
        n = min(self.depth, other.depth)
        return FormalChainElement([a - b for a, b in zip(self.layers[:n], other.layers[:n])], self.side)

    def __neg__(self):
        return FormalChainElement([-h for h in self.layers], self.side)

    def shift(self) -> "FormalChainElement":
        """Multiplication by the grading variable; the top layer is dropped."""
        if not self.layers:
            return self
        return FormalChainElement([Series2.zero(self.layers[0].trunc)] + self.layers[:-1], self.side)

    def agrees(self, other: "FormalChainElement", window: Trunc = None) -> bool:
        n = min(self.depth, other.depth)
        return all(a.agrees(b, window) for a, b in zip(self.layers[:n], other.layers[:n]))

    def is_zero(self, window: Trunc = None) -> bool:
        return all(h.is_zero(window) for h in self.layers)

    def max_defect(self, other: "FormalChainElement", window: Trunc = None) -> float:
        n = min(self.depth, other.depth)
        return max((a.max_defect(b, window) for a, b in zip(self.layers[:n], other.layers[:n])),
                   default=0.0)

    def to_json(self) -> dict:
        return {"side": self.side, "layers": [h.to_json() for h in self.layers]}

    @classmethod
    def from_json(cls, obj) -> "FormalChainElement":
        return cls([Series2.from_json(h) for h in obj["layers"]], obj.get("side", LEFT))


FormalPair = Tuple[FormalChainElement, FormalChainElement]


def _lin(a, b) -> Series2:
    """The linear form a*u + b*v as a polynomial."""
    return Series2({(1, 0): a, (0, 1): b})


class FormalComplex:
    """One of the two one-sided diagonal complexes.

    Left:   d0 h = (N h, (v - q**(n+1) u) h_n),  d1 (f, g) = (v - q**n u) f_n - N g
    Right:  d0 h = ((u - q**(n+1) v) h_n, N h),  d1 (f, g) = N f + (q**n v - u) g_n
    and pi h = h_0(t, t) on both sides; N multiplies by the grading variable.
    """

    def __init__(self, side: str, q: QParam):
        if side not in (LEFT, RIGHT):
            raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
        self.side = side
        self.q = q

    def _lin_d0(self, n: int) -> Series2:
        c = self.q.pow(n + 1)
        return _lin(-c, ONE) if self.side == LEFT else _lin(ONE, -c)

    def _lin_d1(self, n: int) -> Series2:
        c = self.q.pow(n)
        return _lin(-c, ONE) if self.side == LEFT else _lin(-ONE, c)

    def _scaled(self, h: FormalChainElement, lin) -> FormalChainElement:
        return FormalChainElement([lin(n) * x for n, x in enumerate(h.layers)], self.side)

    def d0(self, h: FormalChainElement) -> FormalPair:
        a = h.shift()
        b = self._scaled(h, self._lin_d0)
        return (a, b) if self.side == LEFT else (b, a)

    def d1(self, fg: FormalPair) -> FormalChainElement:
        f, g = fg
        if self.side == LEFT:
            return self._scaled(f, self._lin_d1) - g.shift()
        return f.shift() + self._scaled(g, self._lin_d1)

    def pi(self, h: FormalChainElement) -> Series1:
        return h.layers[0].on_line(ONE, ONE)

    def d1_witness(self, fg: FormalPair) -> FormalChainElement:
        """A preimage under d0 of a d1-cocycle; one layer is lost at the top."""
        if not self.d1(fg).is_zero():
            raise CocycleError("not a cocycle")
        shifted = fg[0] if self.side == LEFT else fg[1]
        if not shifted.layers[0].is_zero():
            raise CocycleError("not a cocycle: the lowest layer of the shifted part is nonzero")
        return FormalChainElement(shifted.layers[1:], self.side)

    def pi_witness(self, h: FormalChainElement) -> FormalPair:
        """A preimage under d1 of an element killed by pi."""
        if not self.pi(h).is_zero():
            raise CocycleError("not in the kernel of the diagonal map")
        h0 = divide_diagonal(h.layers[0])
        rest = h.layers[1:]
        zero = [Series2.zero(x.trunc) for x in rest]
        if self.side == LEFT:
            f = FormalChainElement([h0] + zero, self.side)
            g = FormalChainElement([-x for x in rest], self.side)
        else:
            f = FormalChainElement(list(rest), self.side)
            g = FormalChainElement([h0] + zero, self.side)
        return f, g


def formal_complex_ops(side: str, q: QParam) -> FormalComplex:
    return FormalComplex(side, q)


def holo_complex_ops(side: str, q: QParam) -> FormalComplex:
    """The same operators; inputs carry polynomial (untruncated) layers."""
    return FormalComplex(side, q)


# graded assembly over the cells d + l <= D

Cell = Tuple[int, int]
GradedChain = Dict[Cell, Quadruple]
GradedPairChain = Dict[Cell, Pair]


def index_order(D: int, mirrored: bool = False) -> List[Cell]:
    """Cells ordered by total degree, then by increasing first (or second) index."""
    cells = [(i, n - i) for n in range(D + 1) for i in range(n + 1)]
    if mirrored:
        return sorted(cells, key=lambda c: (c[0] + c[1], c[1]))
    return cells


def cell_less(a: Cell, b: Cell, mirrored: bool = False) -> bool:
    ka = (a[0] + a[1], a[1] if mirrored else a[0])
    kb = (b[0] + b[1], b[1] if mirrored else b[0])
    return ka < kb


def op_M0(z: Quadruple, l: int, q: QParam) -> Pair:
    return op_M_y2(z, l, q).scale(-q.q), op_M_x2(z)


def op_N0(z: Quadruple, d: int, q: QParam) -> Pair:
    return op_N_x1(z), op_N_y1(z, d, q).scale(-q.q)


def _params(cell: Cell, q: QParam) -> DiagParams:
    return DiagParams(cell[0], cell[1], q)


def graded_d0(xi: GradedChain, D: int, q: QParam) -> GradedPairChain:
    out: GradedPairChain = {}
    for (i, j) in index_order(D):
        terms = []
        if (i, j) in xi:
            terms.append(diag_d0(xi[(i, j)], _params((i, j), q)))
        if (i, j - 1) in xi:
            terms.append(op_M0(xi[(i, j - 1)], j - 1, q))
        if (i - 1, j) in xi:
            terms.append(op_N0(xi[(i - 1, j)], i - 1, q))
        if terms:
            acc = terms[0]
            for t in terms[1:]:
                acc = _pair_add(acc, t)
            out[(i, j)] = acc
    return out


def graded_d1(psi_: GradedPairChain, D: int, q: QParam) -> GradedChain:
    out: GradedChain = {}
    for (i, j) in index_order(D):
        acc = None
        if (i, j) in psi_:
            acc = diag_d1(psi_[(i, j)], _params((i, j), q))
        if (i, j - 1) in psi_:
            t = op_M_dl(psi_[(i, j - 1)], _params((i, j - 1), q))
            acc = t if acc is None else acc + t
        if (i - 1, j) in psi_:
            t = op_N_dl(psi_[(i - 1, j)], _params((i - 1, j), q)).scale(-ONE)
            acc = t if acc is None else acc + t
        if acc is not None:
            out[(i, j)] = acc
    return out


DMN_NAMES = (
    "d1 M0 = -M d0",
    "d1 N0 = N d0",
    "M M0 = 0",
    "N N0 = 0",
    "M N0 = N M0",
)


def dmn_identities(z: Quadruple, i: int, j: int, q: QParam) -> Dict[str, Tuple[Quadruple, Quadruple]]:
    """The five identities expressing d1 d0 = 0 cell by cell, as (lhs, rhs) pairs.

    ``z`` lives in the source cell of each identity: (i, j-1) for the first,
    (i-1, j) for the second, (i, j-2) for the third, (i-2, j) for the fourth
    and (i-1, j-1) for the fifth.  Cells with a negative index are skipped.
    """
    out = {}
    if j >= 1:
        src = _params((i, j - 1), q)
        lhs = diag_d1(op_M0(z, j - 1, q), _params((i, j), q))
        rhs = op_M_dl(diag_d0(z, src), src).scale(-ONE)
        out[DMN_NAMES[0]] = (lhs, rhs)
    if i >= 1:
        src = _params((i - 1, j), q)
        lhs = diag_d1(op_N0(z, i - 1, q), _params((i, j), q))
        rhs = op_N_dl(diag_d0(z, src), src)
        out[DMN_NAMES[1]] = (lhs, rhs)
    if j >= 2:
        lhs = op_M_dl(op_M0(z, j - 2, q), _params((i, j - 1), q))
        out[DMN_NAMES[2]] = (lhs, Quadruple.zero(lhs.trunc))
    if i >= 2:
        lhs = op_N_dl(op_N0(z, i - 2, q), _params((i - 1, j), q))
        out[DMN_NAMES[3]] = (lhs, Quadruple.zero(lhs.trunc))
    if i >= 1 and j >= 1:
        lhs = op_M_dl(op_N0(z, i - 1, q), _params((i, j - 1), q))
        rhs = op_N_dl(op_M0(z, j - 1, q), _params((i - 1, j), q))
        out[DMN_NAMES[4]] = (lhs, rhs)
    return out


# corrections between the F_q product and the diagonal map

def product_defect(zeta: GradedElement, eta: GradedElement, trunc: int, q: QParam) -> FqElement:
    """alpha_d(zeta) * alpha_l(eta) minus the embedded (rescaled) diagonal product."""
    d, l = zeta.degree, eta.degree
    prod = fq_mul(alpha_d(zeta, trunc, q), alpha_d(eta, trunc, q))
    main = pi_dl(tensor_embed(zeta, eta), d, l, q).scale(q.pow(d * l))
    return prod - alpha_d(main, trunc, q)


def gamma_correction(zeta: GradedElement, eta: GradedElement, m: int, trunc: int,
                     q: QParam) -> GradedElement:
    """Degree-m component of the product defect; zero for m <= d + l."""
    if m > trunc:
        raise ValueError(f"degree {m} above cutoff {trunc}")
    return graded_component(product_defect(zeta, eta, trunc, q), m)

"""Joint spectra of finite-dimensional modules over the quantum plane.

A module is a pair of square matrices (T, S) with T S = q**-1 S T.  At a point
(lam, mu) with lam * mu = 0 its Koszul complex is

    C^n --d1--> C^n (+) C^n --d0--> C^n
    d1 v        = ((mu I - q S) v, (T - q lam I) v)
    d0 (v1, v2) = (T - lam I) v1 + (S - mu I) v2

and d0 d1 = -q T S + S T + (q - 1) lam mu I vanishes under both relations.
The point is in the Taylor spectrum when some homology group is nonzero.
Spectra are scanned over candidate points; no completeness is claimed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from gmpy2 import mpq

from .coeff import DEFAULT_TOL, ONE, ZERO, DomainError, QParam, QQi, make_q, scalar_from_json, scalar_to_json
from .qtopology import (
    X_AXIS,
    Y_AXIS,
    AxisSet,
    BackwardOrbit,
    Interval,
    QPoint,
    QRegion,
    q_closure_region,
)

EXACT, FLOAT = "exact", "float"

Matrix = List[List[Union[QQi, complex]]]


class ValidationError(ValueError):
    """Raised when input matrices violate the module relation."""


class ConditionWarning(UserWarning):
    """Singular values close to the rank tolerance."""


# exact linear algebra

def _gauss_int_rows(m: Sequence[Sequence[QQi]]) -> List[List[Tuple[int, int]]]:
    """Scale each row by the lcm of its denominators to get Gaussian integers."""
    out = []
    for row in m:
        den = 1
        for v in row:
            den = math.lcm(den, int(v.re.denominator), int(v.im.denominator))
        out.append([(int(v.re * den), int(v.im * den)) for v in row])
    return out


def _gmul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _gsub(a, b):
    return a[0] - b[0], a[1] - b[1]


def _gdiv_exact(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return re // n, im // n


def rank_exact(m: Sequence[Sequence[QQi]]) -> int:
    """Rank by fraction-free (Bareiss) elimination over the Gaussian integers."""
    a = _gauss_int_rows(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    rank = 0
    prev = (1, 0)
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c] != (0, 0)), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            row = a[r]
            prow = a[rank]
            for k in range(c, cols):
                row[k] = _gdiv_exact(_gsub(_gmul(p, row[k]), _gmul(f, prow[k])), prev)
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def rank_float(m, tol: float = DEFAULT_TOL) -> Tuple[int, bool]:
    """Numerical rank from singular values; the flag marks values near tol."""
    arr = np.asarray(m, dtype=complex)
    if arr.size == 0:
        return 0, False
    sv = np.linalg.svd(arr, compute_uv=False)
    scale = max(1.0, float(sv[0]) if sv.size else 1.0)
    cut = tol * scale
    rank = int(np.sum(sv > cut))
    near = bool(np.any((sv > cut / 100) & (sv < cut * 100)))
    return rank, near


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    zero = ZERO if a and a[0] and isinstance(a[0][0], QQi) else 0j
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def _identity(n: int, exact: bool):
    one, zero = (ONE, ZERO) if exact else (1 + 0j, 0j)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _lin(a, b, ca, cb):
    """ca * a + cb * b for matrices."""
    return [[ca * x + cb * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


# modules

@dataclass(frozen=True, eq=False)
class MatrixQModule:
    T: Matrix
    S: Matrix
    q: QParam
    backend: str = EXACT
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        n = len(self.T)
        if any(len(r) != n for r in self.T) or len(self.S) != n or any(len(r) != n for r in self.S):
            raise ValidationError("T and S must be square matrices of the same size")
        if self.backend == EXACT:
            object.__setattr__(self, "T", [[QQi.coerce(v) for v in r] for r in self.T])
            object.__setattr__(self, "S", [[QQi.coerce(v) for v in r] for r in self.S])
        elif self.backend == FLOAT:
            object.__setattr__(self, "T", [[complex(v) for v in r] for r in self.T])
            object.__setattr__(self, "S", [[complex(v) for v in r] for r in self.S])
        else:
            raise ValueError(f"unknown backend {self.backend!r}")
        defect = self.relation_defect()
        if self.backend == EXACT and defect:
            raise ValidationError("the relation T S = q^-1 S T fails")
        if self.backend == FLOAT and defect > self.tol:
            raise ValidationError(f"the relation T S = q^-1 S T fails (defect {defect:.3g})")

    @property
    def n(self) -> int:
        return len(self.T)

    @property
    def exact(self) -> bool:
        return self.backend == EXACT

    def _qs(self):
        return self.q.q if self.exact else complex(self.q.q)

    def relation_defect(self):
        """q T S - S T, as a boolean (exact) or a max-abs float."""
        q = self._qs()
        diff = _lin(_matmul(self.T, self.S), _matmul(self.S, self.T), q, -1)
        if self.exact:
            return any(v for r in diff for v in r)
        return max((abs(v) for r in diff for v in r), default=0.0)

    def similar(self, p: Matrix, p_inv: Matrix) -> "MatrixQModule":
        return MatrixQModule(_matmul(_matmul(p, self.T), p_inv), _matmul(_matmul(p, self.S), p_inv),
                             self.q, self.backend, self.tol)

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "backend": self.backend,
                "T": [[scalar_to_json(v) for v in r] for r in self.T],
                "S": [[scalar_to_json(v) for v in r] for r in self.S]}

    @classmethod
    def from_json(cls, obj, backend: Optional[str] = None) -> "MatrixQModule":
        q = scalar_from_json(obj["q"])
        if isinstance(q, complex):
            raise DomainError("q must be exact")
        qp = make_q(q)
        T = [[scalar_from_json(v) for v in r] for r in obj["T"]]
        S = [[scalar_from_json(v) for v in r] for r in obj["S"]]
        if backend is None:
            backend = obj.get("backend")
        if backend is None:
            floats = any(isinstance(v, complex) for r in T + S for v in r)
            backend = FLOAT if floats else EXACT
        if backend == EXACT and any(isinstance(v, complex) for r in T + S for v in r):
            raise DomainError("float entries cannot be used with the exact backend")
        return cls(T, S, qp, backend)


def _point_values(m: MatrixQModule, gamma: QPoint):
    lam, mu = gamma.pair()
    if m.exact:
        return lam, mu
    return complex(lam), complex(mu)


def koszul_at(m: MatrixQModule, gamma) -> Tuple[Matrix, Matrix]:
    """(d1, d0) as a 2n x n and an n x 2n matrix."""
    if not isinstance(gamma, QPoint):
        lam, mu = gamma
        if QQi.coerce(lam) and QQi.coerce(mu):
            raise DomainError(f"({lam}, {mu}) is off the union of the axes")
        gamma = QPoint.from_pair(lam, mu)
    lam, mu = _point_values(m, gamma)
    q = m._qs()
    n = m.n
    ident = _identity(n, m.exact)
    top = _lin(ident, m.S, mu, -q)
    bottom = _lin(m.T, ident, 1, -q * lam)
    d1 = top + bottom
    left = _lin(m.T, ident, 1, -lam)
    right = _lin(m.S, ident, 1, -mu)
    d0 = [lr + rr for lr, rr in zip(left, right)]
    return d1, d0


@dataclass(frozen=True)
class HomologyProfile:
    point: QPoint
    h0: int
    h1: int
    h2: int
    exact: bool = True
    warning: Optional[str] = None

    @property
    def resolvent(self) -> bool:
        return self.h0 == 0 and self.h1 == 0 and self.h2 == 0

    def to_json(self) -> dict:
        out = {"point": self.point.to_json(), "h0": self.h0, "h1": self.h1, "h2": self.h2,
               "resolvent": self.resolvent, "exact": self.exact}
        if self.warning:
            out["warning"] = self.warning
        return out


def homology_at(m: MatrixQModule, gamma: QPoint) -> HomologyProfile:
    d1, d0 = koszul_at(m, gamma)
    n = m.n
    warning = None
    if m.exact:
        r1, r0 = rank_exact(d1), rank_exact(d0)
    else:
        (r1, w1), (r0, w0) = rank_float(d1, m.tol), rank_float(d0, m.tol)
        if w1 or w0:
            warning = "singular values close to the rank tolerance"
            warnings.warn(warning, ConditionWarning, stacklevel=2)
    return HomologyProfile(gamma, n - r0, 2 * n - r0 - r1, n - r1, m.exact, warning)


# candidates

def _rationalize(z: complex, max_den: int = 10 ** 6) -> QQi:
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    return QQi(mpq(re), mpq(im))


def _is_eigenvalue(a: Matrix, lam: QQi) -> bool:
    n = len(a)
    shifted = [[a[i][j] - (lam if i == j else ZERO) for j in range(n)] for i in range(n)]
    return rank_exact(shifted) < n


@dataclass(frozen=True)
class Candidate:
    point: QPoint
    exact: bool
    approx: Optional[complex] = None


def eigen_candidates(m: MatrixQModule) -> List[Candidate]:
    """(lam, 0) for eigenvalues of T, (0, mu) for eigenvalues of S, and the origin.

    Eigenvalues are located numerically and then confirmed exactly after
    rationalization; unconfirmed ones are kept as float candidates.
    """
    out: List[Candidate] = [Candidate(QPoint(X_AXIS, ZERO), True)]
    for axis, mat in ((X_AXIS, m.T), (Y_AXIS, m.S)):
        arr = np.array([[complex(v) for v in r] for r in mat], dtype=complex)
        vals = np.linalg.eigvals(arr) if arr.size else []
        seen = set()
        for z in vals:
            z = complex(z)
            if m.exact:
                lam = _rationalize(z)
                if _is_eigenvalue(mat, lam):
                    if lam not in seen:
                        seen.add(lam)
                        out.append(Candidate(QPoint(axis, lam), True))
                    continue
            key = (round(z.real, 9), round(z.imag, 9))
            if key not in seen:
                seen.add(key)
                out.append(Candidate(QPoint(axis, _rationalize(z, 10 ** 12)), False, z))
    uniq, keys = [], set()
    for c in out:
        k = (c.point, c.exact)
        if k not in keys:
            keys.add(k)
            uniq.append(c)
    return uniq


@dataclass
class SpectrumReport:
    taylor: List[QPoint]
    putinar: QRegion
    samples: List[HomologyProfile]
    approximate: List[QPoint] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "taylor": [p.to_json() for p in self.taylor],
            "putinar": self.putinar.to_json(),
            "samples": [s.to_json() for s in self.samples],
            "approximate_points": [p.to_json() for p in self.approximate],
            "complete": False,
        }


def _point_key(p: QPoint):
    lam, mu = p.pair()
    return (lam.re, lam.im, mu.re, mu.im)


def _float_module(m: MatrixQModule) -> MatrixQModule:
    return MatrixQModule([[complex(v) for v in r] for r in m.T], [[complex(v) for v in r] for r in m.S],
                         m.q, FLOAT, m.tol)


def taylor_spectrum_scan(m: MatrixQModule, candidates: Optional[Iterable[QPoint]] = None,
                         extra: Iterable[QPoint] = ()) -> SpectrumReport:
    """Homology profiles over the candidate points; the spectrum is where any is nonzero.

    Without explicit candidates the eigenvalue candidates are used.  Points
    that could only be located in floating point are profiled with the float
    backend and listed as approximate.
    """
    m.q.require_contractive()
    if candidates is None:
        cands = eigen_candidates(m)
    else:
        cands = [Candidate(p, True) for p in candidates]
    cands += [Candidate(p, True) for p in extra]
    seen, ordered = set(), []
    for c in sorted(cands, key=lambda c: (_point_key(c.point), not c.exact)):
        if c.point in seen:
            continue
        seen.add(c.point)
        ordered.append(c)
    samples, approx = [], []
    fm = None
    for c in ordered:
        if c.exact or not m.exact:
            prof = homology_at(m, c.point)
        else:
            fm = fm or _float_module(m)
            prof = homology_at(fm, c.point)
            approx.append(c.point)
        samples.append(prof)
    taylor = [s.point for s in samples if not s.resolvent]
    putinar = putinar_from_taylor(taylor, m.q)
    return SpectrumReport(taylor, putinar, samples, approx)


def putinar_from_taylor(taylor: Union[QRegion, Iterable[QPoint]], q: QParam) -> QRegion:
    """q-closure of the Taylor spectrum."""
    q.require_contractive()
    if not isinstance(taylor, QRegion):
        taylor = QRegion.from_points(q, taylor)
    return q_closure_region(taylor)


# the weighted shift example

def shift_example_input(q: QParam) -> QRegion:
    """Closed annulus 1 <= |z| <= 1/|q| on the x-axis and the point 1 on the y-axis."""
    rho = q.abs2()
    return (QRegion.annulus(q, X_AXIS, 1, 1 / rho, True, True)
            | QRegion.from_points(q, [QPoint(Y_AXIS, ONE)]))


def shift_example_expected(q: QParam) -> QRegion:
    """{|z| >= 1} on the x-axis and {q**-n : n >= 0} on the y-axis."""
    return QRegion(q, False, AxisSet((Interval(mpq(1), None, True, False),)),
                   AxisSet((BackwardOrbit(ONE),)))


@dataclass
class ShiftExampleReport:
    q: QParam
    taylor: QRegion
    putinar: QRegion
    expected: QRegion
    equal: bool
    input_closed: bool

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "taylor": self.taylor.to_json(),
                "putinar": self.putinar.to_json(), "expected": self.expected.to_json(),
                "region_equality": self.equal, "taylor_is_q_closed": self.input_closed}


def shift_example_report(q: QParam) -> ShiftExampleReport:
    q.require_contractive()
    taylor = shift_example_input(q)
    putinar = putinar_from_taylor(taylor, q)
    expected = shift_example_expected(q)
    return ShiftExampleReport(q, taylor, putinar, expected, putinar == expected, putinar == taylor)

"""Identity suites run by ``qplane verify``.

A suite is a list of cells (d, l); each cell checks a set of named identities
on seeded random inputs.  Inputs for cell (d, l) of suite s come from
``random.Random(f"{seed}:{s}:{d}:{l}")`` (see ``random_inputs``), so a cell
is reproducible on its own and the report does not depend on how cells are
distributed over workers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import random_inputs as R
from .coeff import ONE, ZERO, DomainError, QParam, QQi, make_q, parse_scalar
from .complexes import (
    LEFT,
    RIGHT,
    CocycleError,
    DiagParams,
    FormalChainElement,
    FormalComplex,
    cohomology_H1_split,
    coboundary_criterion,
    diag_d0,
    diag_d1,
    diag_pi,
    dmn_identities,
    gamma_correction,
    graded_d0,
    graded_d1,
    homotopy_tau,
    index_order,
    op_T,
    op_T_inverse,
    op_Tinv_d0,
    pair_agrees,
    pair_max_defect,
    phi,
    psi,
    tau0,
    tau1,
    theta_conditions,
    theta_to_alpha,
)
from .graded_sheaf import (
    GENERATORS,
    FqElement,
    GermPair,
    GradedElement,
    alpha_d,
    fq_mul,
    fq_project_pd,
    generator_action_fq,
    generator_action_graded,
    graded_component,
    lambda_U,
    op_M_x,
    op_M_y,
    op_N_x,
    op_N_y,
    raw_M_x,
    raw_M_y,
    raw_N_x,
    raw_N_y,
)
from .qalgebra import QSeries, UsageError, qmul, qmul_left_form, qmul_right_form, trivial_character
from .quadruples import Quadruple, elementary_decomposition, pi_dl, reconstruct, tensor_embed
from .series import Series1, Series2
from .spectra import FLOAT, EXACT, MatrixQModule, homology_at, koszul_at, rank_exact
from .qtopology import (
    AxisSet,
    BackwardOrbit,
    Interval,
    Points,
    QPoint,
    QRegion,
    X_AXIS,
    Y_AXIS,
    is_q_open,
    q_closure_point,
    q_closure_region,
    q_hull_point,
    runge_neighborhood,
)
from .spectra import shift_example_report


@dataclass(frozen=True)
class SuiteConfig:
    q: str = "1/2"
    trunc: int = 10
    max_degree: int = 6
    seed: int = 0
    suite: str = "all"
    backend: str = EXACT
    workers: int = 1
    samples: int = 5

    def validate(self) -> QParam:
        if self.trunc < 2:
            raise UsageError("--trunc must be at least 2")
        if self.max_degree < 0:
            raise UsageError("--max-degree must be nonnegative")
        if self.samples < 1:
            raise UsageError("--samples must be positive")
        if self.suite not in SUITES and self.suite != "all":
            raise UsageError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITE_NAMES)} or all")
        if self.backend not in (EXACT, FLOAT):
            raise UsageError(f"unknown backend {self.backend!r}")
        if self.backend == FLOAT and self.suite != "koszul":
            raise UsageError("the float backend is only available for the koszul suite")
        try:
            q = make_q(parse_scalar(self.q))
        except (DomainError, ZeroDivisionError) as exc:
            raise UsageError(f"bad q: {exc}") from exc
        needs_contractive = self.suite in ("topology", "all")
        if needs_contractive and q.modulus_class != "contractive":
            raise UsageError(f"q = {self.q} must satisfy 0 < |q| < 1 for the topology suite")
        return q


Outcome = Tuple[bool, float]
Check = Callable[..., Outcome]


def _ok(flag: bool, defect: float = 1.0) -> Outcome:
    return (True, 0.0) if flag else (False, defect)


# shrinking of counterexamples

def _shrink_steps(x) -> Iterable:
    """Variants of x with one coefficient or term removed."""
    if isinstance(x, QSeries):
        for k in sorted(x.c):
            c = dict(x.c)
            del c[k]
            yield QSeries(c, x.trunc, x.q)
    elif isinstance(x, Series1):
        for k, v in enumerate(x.coeffs):
            if v:
                cs = list(x.coeffs)
                cs[k] = ZERO
                yield Series1(cs, x.trunc)
    elif isinstance(x, Series2):
        for k in sorted(x.c):
            c = dict(x.c)
            del c[k]
            yield Series2(c, x.trunc)
    elif isinstance(x, GermPair):
        if x.f[0]:
            yield GermPair(Series1([ZERO] + x.f.coeffs[1:], x.f.trunc),
                           Series1([ZERO] + x.g.coeffs[1:], x.g.trunc))
        for f in _shrink_steps(x.f):
            if f[0] == x.f[0]:
                yield GermPair(f, x.g)
        for g in _shrink_steps(x.g):
            if g[0] == x.g[0]:
                yield GermPair(x.f, g)
    elif isinstance(x, GradedElement):
        for p in _shrink_steps(x.pair):
            yield GradedElement(p, x.degree)
    elif isinstance(x, Quadruple):
        if x.compat:
            terms = elementary_decomposition(x)
            for k in range(len(terms)):
                yield reconstruct(terms[:k] + terms[k + 1:], x.trunc)
        else:
            for i in range(4):
                for s in _shrink_steps(x.parts[i]):
                    parts = list(x.parts)
                    parts[i] = s
                    yield Quadruple(*parts, compat=False)
    elif isinstance(x, FormalChainElement):
        for i, h in enumerate(x.layers):
            for s in _shrink_steps(h):
                layers = list(x.layers)
                layers[i] = s
                yield FormalChainElement(layers, x.side)
    elif isinstance(x, FqElement):
        g = x.grid()
        for k in sorted(g):
            c = dict(g)
            del c[k]
            yield FqElement.from_grid(c, x.trunc, x.q)
    elif isinstance(x, tuple):
        for i, item in enumerate(x):
            for s in _shrink_steps(item):
                yield x[:i] + (s,) + x[i + 1:]


def _safe(check: Check, args) -> Outcome:
    try:
        return check(*args)
    except (ArithmeticError, ValueError, AssertionError, TypeError, KeyError) as exc:
        return False, 1.0


def shrink(check: Check, args: tuple, budget: int = 200) -> tuple:
    """Greedily remove coefficients while the check keeps failing."""
    current = args
    steps = 0
    progress = True
    while progress and steps < budget:
        progress = False
        for cand in _shrink_steps(current):
            steps += 1
            if steps > budget:
                break
            if not _safe(check, cand)[0]:
                current = cand
                progress = True
                break
    return current


def _to_json(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, tuple):
        return [_to_json(i) for i in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return repr(x)


class CellRunner:
    """Accumulates identity outcomes for one cell."""

    def __init__(self, suite: str, d: int, l: int):
        self.suite, self.d, self.l = suite, d, l
        self.records: Dict[str, dict] = {}

    def run(self, identity: str, check: Check, args: tuple) -> None:
        ok, defect = _safe(check, args)
        rec = self.records.get(identity)
        if rec is None:
            rec = {"suite": self.suite, "d": self.d, "l": self.l, "identity": identity,
                   "status": "pass", "max_defect": 0.0, "samples": 0}
            self.records[identity] = rec
        rec["samples"] += 1
        if ok:
            return
        rec["max_defect"] = max(rec["max_defect"], float(defect))
        if rec["status"] == "pass":
            rec["status"] = "fail"
            rec["counterexample"] = _to_json(shrink(check, args))

    def results(self) -> List[dict]:
        return list(self.records.values())


# suite: quantum-plane product

def _g_of_x(rng, n, q):
    return QSeries({(i, 0): R.scalar(rng) for i in range(n + 1)}, n, q)


def _f_of_y(rng, n, q):
    return QSeries({(0, k): R.scalar(rng) for k in range(n + 1)}, n, q)


def _chk_commute_y(g: QSeries, n: int) -> Outcome:
    q, N = g.q, g.trunc
    yn = QSeries.monomial(0, n, q, N)
    lhs = qmul(yn, g)
    rhs = qmul(QSeries({(i, 0): v * q.pow(n * i) for (i, _), v in g.c.items()}, N, q), yn)
    return _ok(lhs == rhs)


def _chk_commute_x(f: QSeries, n: int) -> Outcome:
    q, N = f.q, f.trunc
    xn = QSeries.monomial(n, 0, q, N)
    lhs = qmul(f, xn)
    rhs = qmul(xn, QSeries({(0, k): v * q.pow(n * k) for (_, k), v in f.c.items()}, N, q))
    return _ok(lhs == rhs)


def _chk_three_way(f, g) -> Outcome:
    a = qmul(f, g)
    return _ok(a == qmul_left_form(f, g) and a == qmul_right_form(f, g))


def _chk_assoc(f, g, h) -> Outcome:
    return _ok(qmul(qmul(f, g), h) == qmul(f, qmul(g, h)))


def _chk_character(f, g) -> Outcome:
    return _ok(trivial_character(qmul(f, g)) == trivial_character(f) * trivial_character(g))


def _chk_relation(q: QParam, N: int) -> Outcome:
    x, y = QSeries.x(q, N), QSeries.y(q, N)
    xy = QSeries.monomial(1, 1, q, N)
    return _ok(qmul(x, y) == xy and qmul(y, x) == xy.scale(q.q))


def _cell_qmul(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "qmul", d, l)
    N = cfg.trunc
    run = CellRunner("qmul", d, l)
    for _ in range(cfg.samples):
        run.run("y^n g(x) = g(q^n x) y^n", _chk_commute_y, (_g_of_x(rng, N, q), d))
        run.run("f(y) x^n = x^n f(q^n y)", _chk_commute_x, (_f_of_y(rng, N, q), d))
        if d == 0:
            f, g, h = (R.qseries(rng, N, q) for _ in range(3))
            run.run("three product formulas agree", _chk_three_way, (f, g))
            run.run("associativity", _chk_assoc, (f, g, h))
            run.run("trivial character is multiplicative", _chk_character, (f, g))
    if d == 0:
        run.run("y x = q x y", _chk_relation, (q, N))
    return run.results()


def _cells_qmul(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    return [(n, 0) for n in range(min(cfg.trunc, 8) + 1)]


# suite: diagonal complexes

def _chk_d1d0(z, p) -> Outcome:
    return _ok(diag_d1(diag_d0(z, p), p).is_zero())


def _chk_pid1(a, b, p) -> Outcome:
    return _ok(diag_pi(diag_d1((a, b), p), p).is_zero())


def _chk_T_cocycle(theta, p) -> Outcome:
    return _ok(diag_d1(op_T(theta, p), p).is_zero())


def _chk_TinvT(theta, p) -> Outcome:
    back = op_T_inverse(op_T(theta, p), p)
    return _ok(back.agrees(theta), back.max_defect(theta))


def _cocycle(alpha, fg, p):
    a, b = diag_d0(alpha, p)
    s, t = op_T(psi(fg, p), p)
    return a + s, b + t


def _chk_TTinv(alpha, fg, p) -> Outcome:
    beta = _cocycle(alpha, fg, p)
    again = op_T(op_T_inverse(beta, p), p)
    return _ok(pair_agrees(again, beta), pair_max_defect(again, beta))


def _chk_Tinv_d0(alpha, p) -> Outcome:
    theta = op_Tinv_d0(alpha, p)
    return _ok(pair_agrees(op_T(theta, p), diag_d0(alpha, p)))


def _chk_theta(alpha, p) -> Outcome:
    return _ok(not theta_conditions(op_Tinv_d0(alpha, p), p))


def _chk_pi_tau0(fg, p) -> Outcome:
    return _ok(diag_pi(tau0(fg, p), p).pair.agrees(fg))


def _chk_homotopy(z, p) -> Outcome:
    t0, ab = homotopy_tau(z, p)
    total = t0 + diag_d1(ab, p)
    return _ok(total.agrees(z), total.max_defect(z))


def _chk_h0(alpha, p) -> Outcome:
    back = theta_to_alpha(op_T_inverse(diag_d0(alpha, p), p), p)
    return _ok(back.agrees(alpha), back.max_defect(alpha))


def _chk_phi_psi(fg, p) -> Outcome:
    return _ok(phi(psi(fg, p), p).agrees(fg))


def _chk_h1_split(alpha, fg, p) -> Outcome:
    beta = _cocycle(alpha, fg, p)
    rep, a = cohomology_H1_split(beta, p)
    rebuilt = diag_d0(a, p)
    s, t = op_T(psi(rep, p), p)
    rebuilt = (rebuilt[0] + s, rebuilt[1] + t)
    return _ok(rep.agrees(fg) and a.agrees(alpha) and pair_agrees(rebuilt, beta))


def _chk_h1_coboundary(alpha, p) -> Outcome:
    rep, _ = cohomology_H1_split(diag_d0(alpha, p), p)
    return _ok(rep.is_zero())


def _chk_h2(z, p) -> Outcome:
    k = z - tau0(diag_pi(z, p).pair, p)
    if not diag_pi(k, p).is_zero():
        return False, 1.0
    return _ok(diag_d1(tau1(k, p), p).agrees(k))


def _chk_criterion_coboundary(alpha, p) -> Outcome:
    beta = diag_d0(alpha, p)
    res = coboundary_criterion(beta, p)
    return _ok(res.hypothesis and res.preimage is not None and pair_agrees(diag_d0(res.preimage, p), beta))


def _chk_criterion_obstruction(fg, p) -> Outcome:
    """For a class with nonconstant representative the hypothesis must fail."""
    beta = op_T(psi(fg, p), p)
    res = coboundary_criterion(beta, p)
    return _ok(not res.hypothesis)


def _nonconstant_pair(rng, N):
    while True:
        fg = R.germ_pair(rng, N)
        if any(fg.f.coeffs[1:]) and any(fg.g.coeffs[1:]):
            return fg


def _cell_diagonal(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "diagonal", d, l)
    N = cfg.trunc
    p = DiagParams(d, l, q, N)
    run = CellRunner("diagonal", d, l)
    for _ in range(cfg.samples):
        z = R.quadruple(rng, N)
        a, b = R.quadruple(rng, N), R.quadruple(rng, N)
        theta = R.free_quadruple(rng, N)
        fg = R.germ_pair(rng, N)
        run.run("d1 d0 = 0", _chk_d1d0, (z, p))
        run.run("pi d1 = 0", _chk_pid1, (a, b, p))
        run.run("T lands in the cocycles", _chk_T_cocycle, (theta, p))
        run.run("T^-1 T = id", _chk_TinvT, (theta, p))
        run.run("T T^-1 = id on cocycles", _chk_TTinv, (z, fg, p))
        run.run("T (T^-1 d0) = d0", _chk_Tinv_d0, (z, p))
        run.run("membership conditions for T^-1 d0", _chk_theta, (z, p))
        run.run("pi tau0 = id", _chk_pi_tau0, (fg, p))
        if d + l <= 4:
            run.run("tau0 pi + d1 tau1 = id", _chk_homotopy, (z, p))
        run.run("H0: d0 has a left inverse", _chk_h0, (z, p))
        run.run("H1: phi psi = id", _chk_phi_psi, (fg, p))
        run.run("H1: split recovers both parts", _chk_h1_split, (z, fg, p))
        run.run("H1: coboundaries have zero class", _chk_h1_coboundary, (z, p))
        run.run("H2: ker pi is d1 of tau1", _chk_h2, (z, p))
        run.run("criterion holds on coboundaries", _chk_criterion_coboundary, (z, p))
        run.run("criterion fails on nonzero classes", _chk_criterion_obstruction,
                (_nonconstant_pair(rng, N), p))
    return run.results()


def _cells_diag(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    return index_order(cfg.max_degree)


# suite: one-sided formal and holomorphic complexes

def _chain(rng, side, depth, N, poly):
    layers = []
    for _ in range(depth):
        h = R.series2(rng, N)
        layers.append(Series2(h.c, None) if poly else h)
    return FormalChainElement(layers, side)


def _chk_f_d1d0(C, h) -> Outcome:
    return _ok(C.d1(C.d0(h)).is_zero())


def _chk_f_pid1(C, f, g) -> Outcome:
    return _ok(C.pi(C.d1((f, g))).is_zero())


def _chk_f_d1_witness(C, h) -> Outcome:
    fg = C.d0(h)
    w = C.d1_witness(fg)
    a, b = C.d0(w)
    return _ok(a.agrees(fg[0]) and b.agrees(fg[1]))


def _chk_f_injective(C, h) -> Outcome:
    w = C.d1_witness(C.d0(h))
    return _ok(w.agrees(h), w.max_defect(h))


def _chk_f_pi_witness(C, f, g) -> Outcome:
    k = C.d1((f, g))
    w = C.pi_witness(k)
    return _ok(C.d1(w).agrees(k))


def _cell_formal(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "formal", d, l)
    side = LEFT if d == 0 else RIGHT
    poly = l == 1
    model = "holomorphic" if poly else "formal"
    N = cfg.trunc
    depth = N + 1
    C = FormalComplex(side, q)
    run = CellRunner("formal", d, l)
    tag = f"{side} {model}: "
    for _ in range(cfg.samples):
        h = _chain(rng, side, depth, N, poly)
        f = _chain(rng, side, depth, N, poly)
        g = _chain(rng, side, depth, N, poly)
        run.run(tag + "d1 d0 = 0", _chk_f_d1d0, (C, h))
        run.run(tag + "pi d1 = 0", _chk_f_pid1, (C, f, g))
        run.run(tag + "witness inverts d0 on ker d1", _chk_f_d1_witness, (C, h))
        run.run(tag + "d0 is injective", _chk_f_injective, (C, h))
        run.run(tag + "witness inverts d1 on ker pi", _chk_f_pi_witness, (C, f, g))
    return run.results()


def _cells_formal(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    # d: 0 left, 1 right; l: 0 formal, 1 holomorphic
    return [(0, 0), (0, 1), (1, 0), (1, 1)]


# suite: graded differentials

def _chk_dmn(z, i, j, q, name) -> Outcome:
    lhs, rhs = dmn_identities(z, i, j, q)[name]
    return _ok(lhs.agrees(rhs), lhs.max_defect(rhs))


def _chk_graded(xi_items, D, q) -> Outcome:
    xi = dict(xi_items)
    out = graded_d1(graded_d0(xi, D, q), D, q)
    return _ok(all(v.is_zero() for v in out.values()))


def _cell_graded(cfg: SuiteConfig, q: QParam, i: int, j: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "graded", i, j)
    N = cfg.trunc
    run = CellRunner("graded", i, j)
    for _ in range(cfg.samples):
        z = R.quadruple(rng, N)
        for name in dmn_identities(Quadruple.zero(0), i, j, q):
            run.run(name, _chk_dmn, (z, i, j, q, name))
    if (i, j) == (0, 0):
        D = min(cfg.max_degree, 4)
        xi = tuple((c, R.quadruple(rng, min(N, 6))) for c in index_order(D))
        run.run("graded d1 d0 = 0", _chk_graded, (xi, D, q))
    return run.results()


# suite: decomposition of F_q

def _chk_sum_pd(xi) -> Outcome:
    acc = FqElement.zero(xi.trunc, xi.q)
    for d in range(xi.trunc + 1):
        acc = acc + fq_project_pd(xi, d)
    return _ok(acc == xi)


def _chk_pd_pm(xi) -> Outcome:
    N = xi.trunc
    zero = FqElement.zero(N, xi.q)
    for d in range(N + 1):
        pd = fq_project_pd(xi, d)
        for m in range(N + 1):
            want = pd if m == d else zero
            if not fq_project_pd(pd, m) == want:
                return False, 1.0
    return True, 0.0


def _chk_lambda_alpha0(fg: GermPair, N, q) -> Outcome:
    return _ok(lambda_U(alpha_d(GradedElement(fg, 0), N, q)).agrees(fg))


def _chk_monomial_basis(xi) -> Outcome:
    acc = FqElement.zero(xi.trunc, xi.q)
    for (i, k), v in sorted(xi.grid().items()):
        acc = acc + FqElement.from_grid({(i, k): ONE}, xi.trunc, xi.q).scale(v)
    return _ok(acc == xi)


def _chk_fq_matches_qmul(f, g) -> Outcome:
    # F_q keeps a square grid, qmul a total-degree window; compare on the latter
    N = f.trunc
    lhs = fq_mul(FqElement.from_qseries(f), FqElement.from_qseries(g)).grid()
    rhs = qmul(f, g)
    return _ok(all(lhs.get((i, n - i), ZERO) == rhs[(i, n - i)]
                   for n in range(N + 1) for i in range(n + 1)))


def _chk_generator(gen, h, N, q) -> Outcome:
    a, b = generator_action_graded(gen, h, q)
    prod = generator_action_fq(gen, h, N, q)
    d = h.degree
    for m in range(N + 1):
        c = graded_component(prod, m)
        if m == d:
            ok = c.agrees(a)
        elif m == d + 1:
            ok = c.agrees(b)
        else:
            ok = c.is_zero()
        if not ok:
            return False, 1.0
    return True, 0.0


def _chk_raw_reduced(h, q) -> Outcome:
    d = h.degree
    r = h.raw()
    pairs = [(raw_N_x(r, d), op_N_x(h)), (raw_N_y(r, d, q), op_N_y(h, q)),
             (raw_M_x(r, d), op_M_x(h)), (raw_M_y(r, d, q), op_M_y(h, q))]
    return _ok(all(GradedElement.from_raw(a, d + 1).agrees(b) for a, b in pairs))


def _chk_d_iso(h) -> Outcome:
    return _ok(GradedElement.from_raw(h.raw(), h.degree).agrees(h))


def _cell_decomposition(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "decomposition", d, l)
    N = min(cfg.trunc, 8)
    run = CellRunner("decomposition", d, l)
    for _ in range(cfg.samples):
        if d == 0:
            xi = R.fq_element(rng, N, q)
            run.run("sum of p_d = id", _chk_sum_pd, (xi,))
            run.run("p_d p_m = delta p_d", _chk_pd_pm, (xi,))
            run.run("Lambda alpha_0 = id", _chk_lambda_alpha0, (R.germ_pair(rng, N), N, q))
            run.run("monomial reconstruction", _chk_monomial_basis, (xi,))
            run.run("F_q product matches qmul", _chk_fq_matches_qmul,
                    (R.qseries(rng, N, q), R.qseries(rng, N, q)))
        Nd = max(N, d + 2)
        h = R.graded_element(rng, d, Nd)
        for gen in GENERATORS:
            run.run(f"generator {gen}: graded formula = F_q product", _chk_generator, (gen, h, Nd, q))
        run.run("raw and reduced operators agree", _chk_raw_reduced, (h, q))
        run.run("d-isomorphism round trip", _chk_d_iso, (h,))
    return run.results()


def _cells_decomposition(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    return [(d, 0) for d in range(cfg.max_degree + 1)]


# suite: corrections

def _chk_gamma_low(z, e, N, q) -> Outcome:
    return _ok(all(gamma_correction(z, e, m, N, q).is_zero() for m in range(z.degree + e.degree + 1)))


def _chk_gamma_sum(z, e, N, q) -> Outcome:
    d, l = z.degree, e.degree
    prod = fq_mul(alpha_d(z, N, q), alpha_d(e, N, q))
    main = pi_dl(tensor_embed(z, e), d, l, q).scale(q.pow(d * l))
    total = alpha_d(main, N, q)
    for m in range(d + l + 1, N + 1):
        total = total + alpha_d(gamma_correction(z, e, m, N, q), N, q)
    return _ok(total == prod)


def _cell_gamma(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "gamma", d, l)
    N = min(cfg.trunc, 8)
    run = CellRunner("gamma", d, l)
    for _ in range(cfg.samples):
        z, e = R.graded_element(rng, d, N), R.graded_element(rng, l, N)
        run.run("Gamma_m = 0 for m <= d + l", _chk_gamma_low, (z, e, N, q))
        run.run("graded expansion of the F_q product", _chk_gamma_sum, (z, e, N, q))
    return run.results()


def _cells_gamma(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    return index_order(min(cfg.max_degree, 4))


# suite: Koszul complexes of matrix modules

def random_module(rng: random.Random, n: int, q: QParam, backend: str = EXACT) -> MatrixQModule:
    """A random module of dimension n.

    S is diagonal with eigenvalue chains c, q c, q**2 c, ... (or a zero block),
    T is supported where S_ii = q S_jj, and both are conjugated by a random
    unipotent lower-triangular matrix.
    """
    s = []
    while len(s) < n:
        length = rng.randint(1, n - len(s))
        c = ZERO if rng.random() < 0.25 else R.scalar(rng, 2) or ONE
        s.extend(c * q.pow(k) for k in range(length))
    T = [[R.scalar(rng, 2) if s[i] == q.q * s[j] else ZERO for j in range(n)] for i in range(n)]
    S = [[s[i] if i == j else ZERO for j in range(n)] for i in range(n)]
    P, Pinv = _unipotent(rng, n)
    m = MatrixQModule(T, S, q).similar(P, Pinv)
    if backend == FLOAT:
        return MatrixQModule(m.T, m.S, q, FLOAT)
    return m


def _unipotent(rng, n):
    L = [[ONE if i == j else (R.scalar(rng, 1) if j < i else ZERO) for j in range(n)] for i in range(n)]
    # forward substitution for the inverse
    inv = [[ZERO] * n for _ in range(n)]
    for col in range(n):
        for i in range(n):
            acc = ONE if i == col else ZERO
            for k in range(i):
                acc = acc - L[i][k] * inv[k][col]
            inv[i][col] = acc
    return L, inv


def random_axis_point(rng, m: MatrixQModule) -> QPoint:
    axis = X_AXIS if rng.random() < 0.5 else Y_AXIS
    mat = m.T if axis == X_AXIS else m.S
    if rng.random() < 0.5 and m.n:
        i = rng.randrange(m.n)
        v = mat[i][i] if m.exact else complex(mat[i][i])
        if m.exact:
            return QPoint(axis, v)
    return QPoint(axis, R.scalar(rng, 2))


def _chk_koszul(m, gamma) -> Outcome:
    d1, d0 = koszul_at(m, gamma)
    n = m.n
    prod = [[sum((d0[i][k] * d1[k][j] for k in range(2 * n)), ZERO if m.exact else 0j)
             for j in range(n)] for i in range(n)]
    if m.exact:
        return _ok(not any(v for r in prod for v in r))
    worst = max((abs(v) for r in prod for v in r), default=0.0)
    return _ok(worst <= m.tol, worst)


def _chk_similarity(m, gamma, P, Pinv) -> Outcome:
    a, b = homology_at(m, gamma), homology_at(m.similar(P, Pinv), gamma)
    return _ok((a.h0, a.h1, a.h2) == (b.h0, b.h1, b.h2))


def _chk_scaling(m, gamma, c) -> Outcome:
    scaled = MatrixQModule([[c * v for v in r] for r in m.T], m.S, m.q, m.backend, m.tol)
    lam, mu = gamma.pair()
    g2 = QPoint.from_pair(c * lam, mu)
    a, b = homology_at(m, gamma), homology_at(scaled, g2)
    return _ok((a.h0, a.h1, a.h2) == (b.h0, b.h1, b.h2))


def _cell_koszul(cfg: SuiteConfig, q: QParam, n: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "koszul", n, l)
    run = CellRunner("koszul", n, l)
    for _ in range(cfg.samples):
        m = random_module(rng, n, q, cfg.backend)
        for _ in range(4):
            gamma = random_axis_point(rng, m)
            run.run("d0 d1 = 0", _chk_koszul, (m, gamma))
            if m.exact:
                P, Pinv = _unipotent(rng, n)
                run.run("profiles invariant under similarity", _chk_similarity, (m, gamma, P, Pinv))
                c = R.scalar(rng, 2) or ONE
                run.run("profiles covariant under scaling T", _chk_scaling, (m, gamma, c))
    return run.results()


def _cells_koszul(cfg: SuiteConfig) -> List[Tuple[int, int]]:
    return [(n, 0) for n in range(1, 6)]


# suite: q-topology

def random_region(rng: random.Random, q: QParam) -> QRegion:
    """Up to three primitives per axis from the closed primitive classes."""
    rho = q.abs2()
    axes = []
    for _ in range(2):
        parts = []
        for _ in range(rng.randint(0, 3)):
            kind = rng.choice(["interval", "points", "backward"])
            if kind == "interval":
                lo = mpq(rng.randint(1, 8), rng.randint(1, 4))
                width = mpq(rng.randint(0, 12), 4) * (1 / rho - 1) * lo / 2
                parts.append(Interval(lo, lo + width, rng.random() < 0.5, rng.random() < 0.5))
            else:
                v = R.scalar(rng, 3) or ONE
                parts.append(Points((v,)) if kind == "points" else BackwardOrbit(v))
        axes.append(AxisSet(tuple(parts)))
    return QRegion(q, False, axes[0], axes[1])


def _chk_shift_example(q) -> Outcome:
    rep = shift_example_report(q)
    return _ok(rep.equal)


def _chk_shift_not_closed(q) -> Outcome:
    return _ok(not shift_example_report(q).input_closed)


def _chk_closure_axioms(a, b) -> Outcome:
    ca, cb = q_closure_region(a), q_closure_region(b)
    idem = q_closure_region(ca) == ca
    ext = a.issubset(ca)
    union = a | b
    mono = ca.issubset(q_closure_region(union))
    return _ok(idem and ext and mono)


def _chk_orbit_directions(p: QPoint, q) -> Outcome:
    if p.is_origin():
        return True, 0.0
    fwd = QPoint(p.axis, q.q * p.value)
    back = QPoint(p.axis, p.value / q.q)
    return _ok(not q_closure_point(p, q).contains_point(fwd)
               and not q_hull_point(p, q).contains_point(back))


def _chk_points_closure(pts, q) -> Outcome:
    whole = q_closure_region(QRegion.from_points(q, pts))
    acc = QRegion.empty(q)
    for p in pts:
        acc = acc | q_closure_point(p, q)
    return _ok(whole == acc)


def _chk_runge(p: QPoint, eps, delta, q) -> Outcome:
    U = runge_neighborhood(p, eps, delta, q)
    return _ok(is_q_open(U) and q_hull_point(p, q).issubset(U))


def _cell_topology(cfg: SuiteConfig, q: QParam, d: int, l: int) -> List[dict]:
    rng = R.cell_rng(cfg.seed, "topology", d, l)
    run = CellRunner("topology", d, l)
    run.run("shift example: closure equals the expected region", _chk_shift_example, (q,))
    run.run("shift example: input is not q-closed", _chk_shift_not_closed, (q,))
    for _ in range(cfg.samples):
        a, b = random_region(rng, q), random_region(rng, q)
        run.run("closure is idempotent, extensive and monotone", _chk_closure_axioms, (a, b))
        p = QPoint(rng.choice([X_AXIS, Y_AXIS]), R.scalar(rng, 3) or ONE)
        run.run("orbit directions do not mix", _chk_orbit_directions, (p, q))
        pts = tuple(QPoint(rng.choice([X_AXIS, Y_AXIS]), R.scalar(rng, 3) or ONE) for _ in range(3))
        run.run("closure of a finite set is the union of point closures", _chk_points_closure, (pts, q))
        eps, delta = mpq(rng.randint(1, 4), 10), mpq(rng.randint(1, 4), 20)
        run.run("Runge neighbourhood is q-open and contains the hull", _chk_runge, (p, eps, delta, q))
    return run.results()


SUITES: Dict[str, Tuple[Callable, Callable]] = {
    "qmul": (_cells_qmul, _cell_qmul),
    "diagonal": (_cells_diag, _cell_diagonal),
    "formal": (_cells_formal, _cell_formal),
    "graded": (_cells_diag, _cell_graded),
    "decomposition": (_cells_decomposition, _cell_decomposition),
    "gamma": (_cells_gamma, _cell_gamma),
    "koszul": (_cells_koszul, _cell_koszul),
    "topology": (lambda cfg: [(0, 0)], _cell_topology),
}
SUITE_NAMES = tuple(SUITES)


def suite_list(cfg: SuiteConfig) -> List[str]:
    return list(SUITE_NAMES) if cfg.suite == "all" else [cfg.suite]


def run_cell(cfg: SuiteConfig, suite: str, d: int, l: int) -> List[dict]:
    q = make_q(parse_scalar(cfg.q))
    return SUITES[suite][1](cfg, q, d, l)


def all_cells(cfg: SuiteConfig) -> List[Tuple[str, int, int]]:
    out = []
    for s in suite_list(cfg):
        out.extend((s, d, l) for d, l in SUITES[s][0](cfg))
    return out

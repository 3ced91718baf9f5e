"""HTTP facade over the library: constants, bounds, Landau solve, verify.

The handlers are plain functions on pydantic models so the CLI can call
them in-process; the FastAPI endpoints are thin wrappers. Request models
reject unknown keys. Boundary data, quadrature rules, and exponents are
passed as compact string specs (documented on the parsers below) so the
same request body works over HTTP and from the command line.
"""

import math
from fractions import Fraction

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .kernel import (
    BallPoint,
    ProblemParams,
    UnitDirection,
    c_n_alpha,
    kernel_gradient,
    kernel_mass,
    kernel_value,
)
from .landau import G_fn, landau_radius, matrix_functionals, n_star, psi, verify_univalence
from .poisson import (
    BoundaryData,
    alpha_laplacian_residual,
    lp_norm,
    poisson_extend,
    poisson_jacobian,
)
from .sharp_bounds import (
    ExponentPair,
    J_term,
    c_infty_direction,
    c_infty_sup,
    classify_regime,
    i_direction_sweep,
    script_J,
    sup_I_closed,
    thm11_coefficient,
    thm12_coefficient,
    CASE_BETWEEN,
    CASE_LOW,
    CASE_HIGH,
    MAXIMIZER_ANY,
    MAXIMIZER_RADIAL,
    MAXIMIZER_TANGENTIAL,
)
from .sphere import SphereRule, reduce_zonal

QINF = "inf"


# ------------------------------------------------------------ spec parsers


def parse_exponent(p: str | None, q: str | None) -> ExponentPair:
    """Build the conjugate pair from either exponent given as a string.

    q accepts "inf", integers, rationals "a/b", and decimals; rational and
    integer entry keeps q exact for threshold classification.
    """
    if (p is None) == (q is None):
        raise ValueError("provide exactly one of p and q")
    if q is not None:
        if q.strip().lower() in (QINF, "infinity"):
            return ExponentPair.from_q(math.inf)
        try:
            return ExponentPair.from_q(Fraction(q))
        except (ValueError, ZeroDivisionError):
            return ExponentPair.from_q(float(q))
    if p.strip().lower() in (QINF, "infinity"):
        return ExponentPair.from_p(math.inf)
    return ExponentPair.from_p(float(p))


def parse_point(coords: list[float], n: int) -> BallPoint:
    """A single value is a radius along e1; otherwise full coordinates."""
    if len(coords) == 1:
        v = np.zeros(n)
        v[0] = coords[0]
        return BallPoint(v)
    if len(coords) != n:
        raise ValueError(f"x needs 1 or {n} coordinates, got {len(coords)}")
    return BallPoint(np.asarray(coords, dtype=float))


def parse_boundary(spec: str, n: int) -> BoundaryData:
    """Boundary data spec: family name, colon, family parameters.

    constant:v1[,v2,...]   coordinate:index     signed:d1,...,dn
    cap:height:d1,...,dn   linear:scale | linear:a11,...,ann (row-major)
    csv:path               (tabulated samples, see the CSV loader)
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "constant":
        return BoundaryData.constant([float(v) for v in rest.split(",")])
    if kind == "coordinate":
        return BoundaryData.coordinate(int(rest))
    if kind == "signed":
        return BoundaryData.signed([float(v) for v in rest.split(",")])
    if kind == "cap":
        height, _, direction = rest.partition(":")
        return BoundaryData.cap([float(v) for v in direction.split(",")],
                                float(height))
    if kind == "linear":
        entries = [float(v) for v in rest.split(",")]
        if len(entries) == 1:
            return BoundaryData.linear(entries[0] * np.eye(n))
        if len(entries) == n * n:
            return BoundaryData.linear(np.asarray(entries).reshape(n, n))
        raise ValueError(f"linear spec needs 1 or {n * n} entries, got {len(entries)}")
    if kind == "csv":
        return BoundaryData.from_csv(rest, n)
    raise ValueError(f"unknown boundary family {kind!r}")


_RULE_KINDS = {"zonal": "zonal-1D", "bizonal": "bizonal-2D",
               "monte-carlo": "monte-carlo", "mc": "monte-carlo"}


def parse_rule(kind: str, n: int, degree: int, samples: int,
               seed: int) -> SphereRule | None:
    """Quadrature selection; "auto" defers to each operation's default."""
    kind = kind.strip().lower()
    if kind == "auto":
        return None
    if kind not in _RULE_KINDS:
        raise ValueError(f"unknown rule {kind!r}; use auto|zonal|bizonal|monte-carlo")
    return SphereRule(kind=_RULE_KINDS[kind], n=n, degree=degree,
                      samples=samples, seed=seed)


# ------------------------------------------------------------------ models


class ConstantsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: list[int]
    alpha: list[float]
    q: list[str]
    x: list[float] = [0.0]
    brute: bool = False
    degree: int = 128


class ConstantsRow(BaseModel):
    n: int
    alpha: float
    q: str
    x: float
    regime: str
    maximizer: str
    c_na: float
    sup_I: float | None
    J: float | None
    thm11: float | None
    thm12_lower: float
    thm12_upper: float
    brute: float | None = None
    rel_gap: float | None = None


class ConstantsResponse(BaseModel):
    rows: list[ConstantsRow]


class BoundRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    alpha: float
    p: str | None = None
    q: str | None = None
    x: list[float] = [0.0]
    dir: list[float] | None = None
    phi: str | None = None
    rule: str = "auto"
    degree: int = 256
    samples: int = 200_000
    seed: int = 0


class BoundResponse(BaseModel):
    n: int
    alpha: float
    p: str
    q: str
    x_norm: float
    regime: str
    maximizer: str
    coefficient_lower: float
    coefficient_upper: float
    coefficient_exact: bool
    certified: float
    direction_constant: float | None = None
    data_norm: float | None = None
    measured_gradient: float | None = None
    ratio: float | None = None


class LandauRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    alpha: float
    M: float


class LandauResponse(BaseModel):
    n: int
    alpha: float
    M: float
    r0: float
    R0: float
    psi_residual: float
    bracket_lo: float
    bracket_hi: float
    G_r0: float
    n_star: float


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0


class SuiteResult(BaseModel):
    name: str
    checks: int
    failures: int
    worst: float
    tol: float
    passed: bool
    notes: list[str]


class VerifyResponse(BaseModel):
    passed: bool
    exit_code: int
    suites: list[SuiteResult]


class TableRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    n: int
    alpha: float
    q: str | None = None
    M: list[float] | None = None
    x_max: float = 0.9
    rows: int = 19


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[list[float | str]]


# ---------------------------------------------------------------- handlers


def _radial_point(n: int, t: float) -> BallPoint:
    v = np.zeros(n)
    v[0] = t
    return BallPoint(v)


def compute_constants(req: ConstantsRequest) -> ConstantsResponse:
    """One row per (n, alpha, q, |x|) with the regime-classified constants."""
    rows = []
    betas = np.linspace(0.0, math.pi, 181)
    for n in req.n:
        for al in req.alpha:
            params = ProblemParams(n, al)
            cna = c_n_alpha(params)
            for qs in req.q:
                pair = parse_exponent(None, qs)
                for t in req.x:
                    point = _radial_point(n, t)
                    tw = c_infty_sup(params, point)
                    if math.isinf(pair.q):
                        row = ConstantsRow(
                            n=n, alpha=al, q=QINF, x=t,
                            regime="q = inf",
                            maximizer=(MAXIMIZER_RADIAL if al >= 2.0 - n
                                       else "unresolved"),
                            c_na=cna, sup_I=None, J=None, thm11=None,
                            thm12_lower=tw.lower, thm12_upper=tw.upper)
                        if req.brute:
                            vals = [c_infty_direction(params, point,
                                                      UnitDirection.l_beta(b, n))
                                    for b in betas]
                            row.brute = max(vals)
                            row.rel_gap = abs(tw.upper - row.brute) / max(row.brute, 1e-300)
                    else:
                        bound, tag = sup_I_closed(params, pair.q, t, pair.q_exact)
                        row = ConstantsRow(
                            n=n, alpha=al, q=qs, x=t,
                            regime=tag.case, maximizer=tag.maximizer,
                            c_na=cna, sup_I=bound.value,
                            J=J_term(params, pair.q, t),
                            thm11=thm11_coefficient(params, pair, point),
                            thm12_lower=tw.lower, thm12_upper=tw.upper)
                        if req.brute:
                            vals = i_direction_sweep(params, pair.q, t, betas,
                                                     degree=req.degree,
                                                     angular_degree=req.degree)
                            row.brute = float(np.max(vals))
                            row.rel_gap = abs(bound.value - row.brute) / max(row.brute, 1e-300)
                    rows.append(row)
    return ConstantsResponse(rows=rows)


def compute_bound(req: BoundRequest) -> BoundResponse:
    """Gradient-bound coefficient at x, optionally checked against data."""
    params = ProblemParams(req.n, req.alpha)
    pair = parse_exponent(req.p, req.q)
    x = parse_point(req.x, req.n)
    t = x.radius
    if math.isinf(pair.q):
        bv = c_infty_sup(params, x)
        certified = thm12_coefficient(params, t)
        regime = "q = inf"
        maximizer = MAXIMIZER_RADIAL if req.alpha >= 2.0 - req.n else "unresolved"
        lower, upper, exact = bv.lower, bv.upper, bv.exact
    else:
        _, tag = sup_I_closed(params, pair.q, t, pair.q_exact)
        certified = thm11_coefficient(params, pair, x)
        regime, maximizer = tag.case, tag.maximizer
        lower = upper = certified
        exact = True
    resp = BoundResponse(
        n=req.n, alpha=req.alpha,
        p=QINF if math.isinf(pair.p) else repr(pair.p),
        q=QINF if math.isinf(pair.q) else repr(pair.q),
        x_norm=t, regime=regime, maximizer=maximizer,
        coefficient_lower=lower, coefficient_upper=upper,
        coefficient_exact=exact, certified=certified)
    if req.dir is not None:
        l = UnitDirection(np.asarray(req.dir, dtype=float))
        resp.direction_constant = c_infty_direction(params, x, l)
    if req.phi is not None:
        phi = parse_boundary(req.phi, req.n)
        rule = parse_rule(req.rule, req.n, req.degree, req.samples, req.seed)
        norm_rule = rule if rule is not None else SphereRule(
            kind="zonal-1D", n=req.n, degree=req.degree)
        resp.data_norm = lp_norm(phi, pair.p, norm_rule)
        if phi.m == 1:
            h = 1e-5
            grad = np.zeros(req.n)
            for j in range(req.n):
                e = np.zeros(req.n)
                e[j] = h
                up = poisson_extend(phi, params, BallPoint(x.coords + e), rule)
                dn = poisson_extend(phi, params, BallPoint(x.coords - e), rule)
                grad[j] = (up[0] - dn[0]) / (2.0 * h)
            resp.measured_gradient = float(np.linalg.norm(grad))
        else:
            jac = poisson_jacobian(phi, params, x, rule)
            resp.measured_gradient = matrix_functionals(jac.entries).norm
        denom = certified * resp.data_norm
        resp.ratio = resp.measured_gradient / denom if denom > 0 else math.inf
    return resp


def compute_landau(req: LandauRequest) -> LandauResponse:
    params = ProblemParams(req.n, req.alpha)
    res = landau_radius(params, req.M)
    return LandauResponse(
        n=req.n, alpha=req.alpha, M=req.M, r0=res.r0, R0=res.R0,
        psi_residual=res.psi_residual, bracket_lo=res.bracket[0],
        bracket_hi=res.bracket[1], G_r0=G_fn(params, res.r0),
        n_star=n_star(params, req.M))


def compute_table(req: TableRequest) -> TableResponse:
    """Plottable sweeps: bound coefficient over |x|, or Landau radii over M."""
    params = ProblemParams(req.n, req.alpha)
    if req.rows < 2:
        raise ValueError(f"rows must be at least 2, got {req.rows}")
    if req.kind == "bound":
        if req.q is None:
            raise ValueError("table kind 'bound' requires q")
        pair = parse_exponent(None, req.q)
        if not 0.0 <= req.x_max < 1.0:
            raise ValueError(f"x_max must lie in [0, 1), got {req.x_max}")
        out = []
        for t in np.linspace(0.0, req.x_max, req.rows):
            t = float(t)
            point = _radial_point(req.n, t)
            if math.isinf(pair.q):
                coeff = thm12_coefficient(params, t)
                regime, maximizer = "q = inf", (
                    MAXIMIZER_RADIAL if req.alpha >= 2.0 - req.n else "unresolved")
            else:
                _, tag = sup_I_closed(params, pair.q, t, pair.q_exact)
                coeff = thm11_coefficient(params, pair, point)
                regime, maximizer = tag.case, tag.maximizer
            out.append([t, regime, maximizer, coeff])
        return TableResponse(columns=["t", "regime", "maximizer", "coefficient"],
                             rows=out)
    if req.kind == "landau":
        if not req.M:
            raise ValueError("table kind 'landau' requires M values")
        out = []
        for M in req.M:
            res = landau_radius(params, M)
            out.append([M, res.r0, res.R0, G_fn(params, res.r0),
                        res.psi_residual])
        return TableResponse(columns=["M", "r0", "R0", "G_r0", "psi_residual"],
                             rows=out)
    raise ValueError(f"unknown table kind {req.kind!r}; use bound|landau")


# ------------------------------------------------------------ verify suites


def _suite(name, tol, checks, fails, worst):
    return SuiteResult(name=name, checks=checks, failures=len(fails),
                       worst=worst, tol=tol, passed=not fails, notes=fails)


def _suite_kernel_mass(c_scale: float) -> SuiteResult:
    # closed hypergeometric mass against direct quadrature of the kernel
    tol, worst, fails, checks = 1e-8, 0.0, [], 0
    for n in (3, 4, 5):
        for al in (-2.0, -1.0, 0.0, 0.5):
            params = ProblemParams(n, al)
            cna = c_n_alpha(params)
            for t in (0.0, 0.3, 0.6, 0.9):
                closed = kernel_mass(params, _radial_point(n, t)) * c_scale

                def f(u, s=t, cna=cna, n=n, al=al):
                    return (cna * (1.0 - s * s) ** (1.0 - al)
                            * (1.0 + s * s - 2.0 * s * u) ** (-(n - al) / 2.0))

                err = abs(closed - reduce_zonal(n, f))
                checks += 1
                worst = max(worst, err)
                if err > tol:
                    fails.append(f"n={n} alpha={al:g} t={t:g} err={err:.3e}")
    return _suite("kernel-mass", tol, checks, fails, worst)


def _suite_kernel_gradient(seed: int) -> SuiteResult:
    tol, worst, fails = 1e-6, 0.0, []
    rng = np.random.default_rng([seed, 17])
    dims, alphas, h = (3, 4, 5), (-2.0, -1.0, 0.0, 0.5), 1e-5
    for k in range(100):
        n, al = dims[k % 3], alphas[k % 4]
        params = ProblemParams(n, al)
        v = rng.normal(size=n)
        x = BallPoint(v / np.linalg.norm(v) * 0.9 * rng.random() ** (1.0 / n))
        w = rng.normal(size=n)
        zeta = UnitDirection(w / np.linalg.norm(w))
        grad = kernel_gradient(params, x, zeta)
        fd = np.zeros(n)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            fd[j] = (kernel_value(params, BallPoint(x.coords + e), zeta)
                     - kernel_value(params, BallPoint(x.coords - e), zeta)) / (2.0 * h)
        err = float(np.linalg.norm(fd - grad) / max(np.linalg.norm(grad), 1.0))
        worst = max(worst, err)
        if err > tol:
            fails.append(f"pair {k}: n={n} alpha={al:g} err={err:.3e}")
    return _suite("kernel-gradient", tol, 100, fails, worst)


_HARMONIC_POINTS = {
    3: [(0.3, 0.1, -0.2), (-0.45, 0.2, 0.35), (0.05, -0.5, 0.3), (0.6, 0.1, 0.1)],
    4: [(0.3, 0.1, -0.2, 0.2), (-0.4, 0.2, 0.3, -0.1),
        (0.1, -0.45, 0.3, 0.2), (0.5, 0.2, -0.1, 0.3)],
}


def _suite_harmonicity() -> SuiteResult:
    # second-order decay of the discrete D_alpha residual under h -> h/2,
    # or both residuals at rounding level already
    tol, worst, fails, checks = 4.5, 0.0, [], 0
    configs = [(3, 0.0, BoundaryData.coordinate(0)),
               (3, 0.5, BoundaryData.linear(np.eye(3))),
               (4, -1.0, BoundaryData.coordinate(0))]
    for n, al, phi in configs:
        params = ProblemParams(n, al)

        def u(c, phi=phi, params=params):
            return poisson_extend(phi, params, BallPoint(c))

        for pt in _HARMONIC_POINTS[n]:
            x = BallPoint(np.array(pt))
            r1 = float(np.abs(alpha_laplacian_residual(u, params, x, 1e-3)).max())
            r2 = float(np.abs(alpha_laplacian_residual(u, params, x, 5e-4)).max())
            checks += 1
            if r1 <= 1e-8 and r2 <= 1e-8:
                continue
            ratio = r1 / r2
            worst = max(worst, ratio)
            if not 3.5 <= ratio <= 4.5:
                fails.append(f"n={n} alpha={al:g} x={pt}: ratio={ratio:.3f}")
    return _suite("alpha-harmonicity", tol, checks, fails, worst)


def _suite_sharp_sup() -> SuiteResult:
    # closed-form sup against the 181-angle sweep, plus maximizer class
    tol, worst, fails, checks = 1e-6, 0.0, [], 0
    params = ProblemParams(3, 0.0)
    betas = np.linspace(0.0, math.pi, 181)
    for qs in ("4/3", "2", "5/3", "3", "1"):
        frac = Fraction(qs)
        q = float(frac)
        for t in (0.3, 0.6):
            bound, tag = sup_I_closed(params, q, t, frac)
            vals = i_direction_sweep(params, q, t, betas)
            brute = float(np.max(vals))
            err = abs(bound.value - brute) / max(brute, 1e-300)
            checks += 1
            worst = max(worst, err)
            if err > tol:
                fails.append(f"q={qs} t={t:g}: gap={err:.3e}")
            peak = brute * (1.0 - 1e-9)
            if tag.maximizer == MAXIMIZER_TANGENTIAL:
                ok = vals[90] >= peak
            elif tag.maximizer == MAXIMIZER_RADIAL:
                ok = vals[0] >= peak or vals[180] >= peak
            else:
                ok = float(np.min(vals)) >= brute * (1.0 - tol)
            checks += 1
            if not ok:
                fails.append(f"q={qs} t={t:g}: maximizer class {tag.maximizer}")
    return _suite("sharp-sup-regimes", tol, checks, fails, worst)


def _suite_script_j() -> SuiteResult:
    # angular monotonicity dictated by the regime of q
    tol, worst, fails, checks = 1e-9, 0.0, [], 0
    combos = [
        (0.0, "4/3", 0.5, 0.6), (0.0, "2", 0.5, 0.6),
        (0.5, "8/5", 0.3, 0.4), (0.5, "12/5", 0.3, 0.4), (-1.0, "1", 0.6, 0.5),
        (0.0, "8/5", 0.5, 0.6), (0.5, "2", 0.4, 0.5),
        (-1.0, "5/4", 0.5, 0.7), (-1.0, "7/5", 0.2, 0.9),
        (0.0, "4", 0.5, 0.6), (0.0, "1", 0.7, 0.3), (0.5, "3", 0.5, 0.5),
    ]
    betas = np.linspace(0.0, math.pi / 2.0, 19)
    for al, qs, r, s in combos:
        params = ProblemParams(3, al)
        frac = Fraction(qs)
        case = classify_regime(params, float(frac), frac)
        vals = np.array([script_J(params, float(b), float(frac), r, s)
                         for b in betas])
        scale = float(np.abs(vals).max())
        diffs = np.diff(vals)
        if case in (CASE_LOW, CASE_HIGH):
            dev = float(np.abs(vals - vals[0]).max())
            ok = dev <= tol * scale
        elif case == CASE_BETWEEN:
            dev = max(0.0, float(-diffs.min()))
            ok = dev <= tol * scale
        else:
            dev = max(0.0, float(diffs.max()))
            ok = dev <= tol * scale
        checks += 1
        worst = max(worst, dev / scale)
        if not ok:
            fails.append(f"alpha={al:g} q={qs} r={r:g} s={s:g}: {case}")
    return _suite("script-J-monotonicity", tol, checks, fails, worst)


def _suite_direction_constant() -> SuiteResult:
    # radial attainment of the L^1 coefficient, and the sandwich interval
    tol, worst, fails, checks = 1e-6, 0.0, [], 0
    betas = np.linspace(0.0, math.pi, 181)
    for al in (-1.0, 0.0, 0.5):
        params = ProblemParams(3, al)
        for t in (0.3, 0.6):
            x = _radial_point(3, t)
            closed = thm12_coefficient(params, t)
            vals = [c_infty_direction(params, x, UnitDirection.l_beta(b, 3))
                    for b in betas]
            err_ends = abs(max(vals[0], vals[-1]) - closed) / closed
            err_max = abs(max(vals) - closed) / closed
            err = max(err_ends, err_max)
            checks += 1
            worst = max(worst, err)
            if err > tol:
                fails.append(f"alpha={al:g} t={t:g}: sweep vs closed gap={err:.3e}")
    for al in (-2.0, -4.0):
        params = ProblemParams(3, al)
        for t in (0.3, 0.6):
            x = _radial_point(3, t)
            bv = c_infty_sup(params, x)
            peak = max(c_infty_direction(params, x, UnitDirection.l_beta(b, 3))
                       for b in betas)
            checks += 1
            inside = (bv.lower * (1.0 - 1e-9) <= peak <= bv.upper * (1.0 + 1e-9))
            if not inside:
                off = max(bv.lower / peak - 1.0, peak / bv.upper - 1.0)
                worst = max(worst, off)
                fails.append(f"alpha={al:g} t={t:g}: sweep max {peak:.6g} "
                             f"outside [{bv.lower:.6g}, {bv.upper:.6g}]")
    return _suite("direction-constant", tol, checks, fails, worst)


def _suite_landau() -> SuiteResult:
    tol, worst, fails, checks = 1e-10, 0.0, [], 0
    for al in (-1.0, 0.0, 0.5):
        params = ProblemParams(3, al)
        results = {}
        for M in (1.0, 2.0):
            res = landau_radius(params, M)
            results[M] = res
            psi0 = n_star(params, M) ** (-2.0)
            err = abs(res.psi_residual) / max(1.0, psi0)
            checks += 1
            worst = max(worst, err)
            if err > tol:
                fails.append(f"alpha={al:g} M={M:g}: residual {err:.3e}")
            g_at = G_fn(params, res.r0)
            rhs = (M / n_star(params, M)) ** 2.0
            err = abs(M ** 3 * res.r0 * g_at - rhs) / max(1.0, rhs)
            checks += 1
            worst = max(worst, err)
            if err > tol:
                fails.append(f"alpha={al:g} M={M:g}: equation {err:.3e}")
            checks += 1
            if abs(res.R0 - 0.5 * M * res.r0 ** 2 * g_at) > 1e-12 * res.R0:
                fails.append(f"alpha={al:g} M={M:g}: R0 identity")
            checks += 1
            if not all(psi(params, M, f * res.r0) > 0.0
                       for f in (0.2, 0.5, 0.8, 0.99)):
                fails.append(f"alpha={al:g} M={M:g}: psi not positive left of r0")
        checks += 1
        if not results[2.0].r0 < results[1.0].r0:
            fails.append(f"alpha={al:g}: r0 not decreasing in M")
    return _suite("landau-roots", tol, checks, fails, worst)


def _suite_univalence(seed: int) -> SuiteResult:
    tol, fails = 0.0, []
    params = ProblemParams(3, 0.0)
    c = 3.0 / (3.0 * c_n_alpha(params))
    phi = BoundaryData.linear(c * np.eye(3))
    rep = verify_univalence(phi, params, M=c, pairs=200, seed=seed)
    if not rep.passed:
        fails.append("pair sampling found a collision")
    if not rep.min_ratio > 0.0:
        fails.append(f"min separation ratio {rep.min_ratio:.3e}")
    if rep.boundary_min < rep.landau.R0 * (1.0 - 1e-6):
        fails.append(f"boundary displacement {rep.boundary_min:.6g} "
                     f"below R0 {rep.landau.R0:.6g}")
    return _suite("univalence-witness", tol, 3, fails, rep.min_ratio)


def run_verify(req: VerifyRequest, c_scale: float = 1.0) -> VerifyResponse:
    """Run every module's invariant battery; c_scale is a fault-injection hook."""
    suites = [
        _suite_kernel_mass(c_scale),
        _suite_kernel_gradient(req.seed),
        _suite_harmonicity(),
        _suite_sharp_sup(),
        _suite_script_j(),
        _suite_direction_constant(),
        _suite_landau(),
        _suite_univalence(req.seed),
    ]
    passed = all(s.passed for s in suites)
    return VerifyResponse(passed=passed, exit_code=0 if passed else 1,
                          suites=suites)


# -------------------------------------------------------------------- app

app = FastAPI(title="szego", description="alpha-harmonic extension, sharp "
              "gradient bounds, and Landau univalence radii on the unit ball")


@app.exception_handler(ValueError)
async def value_error_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/constants")
def constants_endpoint(req: ConstantsRequest) -> ConstantsResponse:
    return compute_constants(req)


@app.post("/bound")
def bound_endpoint(req: BoundRequest) -> BoundResponse:
    return compute_bound(req)


@app.post("/landau")
def landau_endpoint(req: LandauRequest) -> LandauResponse:
    return compute_landau(req)


@app.post("/verify")
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    return run_verify(req)


@app.post("/table")
def table_endpoint(req: TableRequest) -> TableResponse:
    return compute_table(req)

"""Sharp constants bounding the gradient of the alpha-harmonic extension.

For boundary data in L^p the gradient of u = P_alpha[phi] at x is controlled
by a coefficient built from the direction integral

    I(alpha, q, x, l) = int_{S^(n-1)} |eta - x|^((n-alpha)q - 2n + 2)
                        |<eta, l>|^q dsigma(eta),

q the conjugate exponent. This module evaluates I by quadrature, computes
its closed-form supremum over directions l in each of the four q-regimes,
assembles the L^p (p > 1) and L^1 gradient-bound coefficients, and exposes
the q = infinity directional and maximal constants together with the
auxiliary kernel-square profile K_alpha used in their derivation.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergeom import gamma_fn, hyp_pFq, two_F_one_at_one
from .kernel import BallPoint, ProblemParams, UnitDirection, c_n_alpha, one_minus_sq
from .poisson import _frame
from .sphere import SphereRule, _leggauss, _piecewise_nodes, reduce_bizonal

REGIME_TOL = 1e-12
THETA_GRID = 4096
GOLDEN_TOL = 1e-12

CASE_LOW = "q = (2n-2)/(n-alpha)"
CASE_HIGH = "q = 2n/(n-alpha)"
CASE_BETWEEN = "between"
CASE_OUTSIDE = "outside"

MAXIMIZER_ANY = "any direction"
MAXIMIZER_TANGENTIAL = "tangential t_x"
MAXIMIZER_RADIAL = "radial n_x"

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExponentPair:
    """Conjugate exponents 1/p + 1/q = 1 with the convention 1/inf = 0.

    p = 1 (q = inf) selects the L^1 bound; every other pair has finite q
    and feeds the L^p coefficient. q_exact carries the rational value when
    q was supplied as a ratio, enabling exact regime classification.
    """

    p: float
    q: float
    q_exact: Fraction | None = None

    def __post_init__(self):
        p, q = self.p, self.q
        if not (p >= 1.0):
            raise ValueError(f"p must lie in [1, inf], got {p}")
        if p == 1.0:
            if not math.isinf(q):
                raise ValueError("p = 1 requires q = inf")
        elif math.isinf(p):
            if q != 1.0:
                raise ValueError("p = inf requires q = 1")
        else:
            if not (q >= 1.0) or math.isinf(q):
                raise ValueError(f"conjugate of p = {p} must be finite, got {q}")
            if abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
                raise ValueError(f"p = {p} and q = {q} are not conjugate")
        if self.q_exact is not None and not math.isinf(q):
            if abs(float(self.q_exact) - q) > 1e-12 * max(1.0, abs(q)):
                raise ValueError("q_exact does not match q")

    @classmethod
    def from_p(cls, p: float) -> "ExponentPair":
        if p == 1.0:
            return cls(1.0, math.inf)
        if math.isinf(p):
            return cls(math.inf, 1.0)
        if not p > 1.0:
            raise ValueError(f"p must lie in [1, inf], got {p}")
        return cls(float(p), p / (p - 1.0))

    @classmethod
    def from_q(cls, q) -> "ExponentPair":
        """Build from the conjugate exponent; str/Fraction/int keep q exact."""
        if isinstance(q, str):
            q = Fraction(q)
        if isinstance(q, (Fraction, int)):
            exact = Fraction(q)
            if exact < 1:
                raise ValueError(f"q must lie in [1, inf], got {exact}")
            if exact == 1:
                return cls(math.inf, 1.0, exact)
            return cls(float(exact / (exact - 1)), float(exact), exact)
        q = float(q)
        if math.isinf(q):
            return cls(1.0, math.inf)
        if not q >= 1.0:
            raise ValueError(f"q must lie in [1, inf], got {q}")
        if q == 1.0:
            return cls(math.inf, 1.0)
        return cls(q / (q - 1.0), q)


@dataclass(frozen=True)
class RegimeTag:
    """Which threshold case q falls into, and the maximizing direction class."""

    case: str
    maximizer: str

    def __post_init__(self):
        if self.case not in (CASE_LOW, CASE_HIGH, CASE_BETWEEN, CASE_OUTSIDE):
            raise ValueError(f"unknown case {self.case!r}")
        if self.maximizer not in (MAXIMIZER_ANY, MAXIMIZER_TANGENTIAL, MAXIMIZER_RADIAL):
            raise ValueError(f"unknown maximizer {self.maximizer!r}")


@dataclass(frozen=True)
class BoundValue:
    """A bound that is either a single value or a two-sided interval.

    The exact flag is set only where the closed form is asserted to equal
    the supremum; intervals (lower < upper) arise solely in the alpha < 2-n
    sandwich and are never exact.
    """

    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("bound endpoints must be finite")
        if self.lower > self.upper:
            raise ValueError(f"interval [{self.lower}, {self.upper}] is reversed")
        if self.exact and self.lower != self.upper:
            raise ValueError("an exact bound cannot be an interval")

    @classmethod
    def exact_value(cls, v: float) -> "BoundValue":
        return cls(float(v), float(v), True)

    @classmethod
    def interval(cls, lower: float, upper: float) -> "BoundValue":
        return cls(float(lower), float(upper), False)

    @property
    def is_interval(self) -> bool:
        return self.lower != self.upper

    @property
    def value(self) -> float:
        if self.is_interval:
            raise ValueError("interval-valued bound has no single value")
        return self.lower


def sphere_abs_moment(n: int, q: float) -> float:
    """int_{S^(n-1)} |<eta, l>|^q dsigma = G(n/2)G((q+1)/2) / (sqrt(pi) G((n+q)/2))."""
    return gamma_fn(n / 2.0) * gamma_fn((q + 1.0) / 2.0) / (
        math.sqrt(math.pi) * gamma_fn((n + q) / 2.0))


def regime_thresholds(params: ProblemParams) -> tuple[Fraction, Fraction]:
    """The two special q values (2n-2)/(n-alpha) and 2n/(n-alpha), exactly."""
    den = Fraction(params.n) - Fraction(params.alpha)
    return Fraction(2 * params.n - 2) / den, Fraction(2 * params.n) / den


def classify_regime(params: ProblemParams, q: float,
                    q_exact: Fraction | None = None) -> str:
    """Place q relative to the two thresholds.

    With q_exact the comparison is exact rational arithmetic; otherwise a
    relative tolerance of 1e-12 snaps q onto a threshold, which is harmless
    because the adjacent closed forms agree there, but keeps the choice
    deterministic.
    """
    _check_q(q)
    lo, hi = regime_thresholds(params)
    if q_exact is not None:
        if q_exact == lo:
            return CASE_LOW
        if q_exact == hi:
            return CASE_HIGH
        return CASE_BETWEEN if lo < q_exact < hi else CASE_OUTSIDE
    flo, fhi = float(lo), float(hi)
    if abs(q - flo) <= REGIME_TOL * max(1.0, abs(q), flo):
        return CASE_LOW
    if abs(q - fhi) <= REGIME_TOL * max(1.0, abs(q), fhi):
        return CASE_HIGH
    return CASE_BETWEEN if flo < q < fhi else CASE_OUTSIDE


def _check_q(q: float) -> None:
    if not (math.isfinite(q) and q >= 1.0):
        raise ValueError(f"q must be finite and >= 1, got {q}")


def _check_t(t: float) -> None:
    if not (0.0 <= t < 1.0):
        raise ValueError(f"|x| must lie in [0, 1), got {t}")


def J_term(params: ProblemParams, q: float, t: float) -> float:
    """Radial correction term of the L^p gradient bound.

    q t kappa (1 + kappa t)^(q-1) 2F1(n-1-q(n-alpha)/2, (n-q(n-alpha))/2; n/2; t^2)
    with kappa = |2-alpha-n|/(n-alpha). Vanishes at t = 0 and identically
    when alpha = 2-n.
    """
    _check_q(q)
    _check_t(t)
    n, al = params.n, params.alpha
    kappa = abs(2.0 - al - n) / (n - al)
    if kappa == 0.0 or t == 0.0:
        return 0.0
    f = hyp_pFq([n - 1.0 - q * (n - al) / 2.0, (n - q * (n - al)) / 2.0],
                [n / 2.0], t * t)
    return q * t * kappa * (1.0 + kappa * t) ** (q - 1.0) * f


def I_bruteforce(params: ProblemParams, q: float, x: BallPoint,
                 l: UnitDirection, rule: SphereRule | None = None) -> float:
    """Quadrature value of the direction integral I(alpha, q, x, l).

    Reduced to a bizonal integral in the plane spanned by n_x and l; the
    |<eta, l>|^q kink is split at the great circle <eta, l> = 0.
    """
    _check_q(q)
    n, al = params.n, params.alpha
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n = {n}")
    if l.n != n:
        raise ValueError(f"direction dimension {l.n} does not match n = {n}")
    if rule is None:
        rule = SphereRule(kind="bizonal-2D", n=n)
    elif rule.n != n:
        raise ValueError(f"rule dimension {rule.n} does not match n = {n}")
    s, _, _, beta = _frame(x, np.asarray(l.coords, dtype=float), n)
    e = (n - al) * q - 2.0 * n + 2.0
    cb, sb = math.cos(beta), math.sin(beta)

    def f(a, b):
        return (1.0 + s * s - 2.0 * s * a) ** (e / 2.0) * np.abs(a * cb + b * sb) ** q

    return reduce_bizonal(n, f, rule,
                          angular_breaks=(beta - math.pi / 2.0, beta + math.pi / 2.0))


def i_direction_sweep(params: ProblemParams, q: float, t: float,
                      betas, degree: int = 128,
                      angular_degree: int = 128) -> np.ndarray:
    """I(alpha, q, t e1, l_beta) for every angle in betas, on one shared grid.

    The angular variable is measured from l_beta, so the |cos|^q kinks sit
    at +-pi/2 for all betas at once and the (radius, angle) grid is reused
    across the whole sweep.
    """
    _check_q(q)
    _check_t(t)
    n, al = params.n, params.alpha
    e = (n - al) * q - 2.0 * n + 2.0
    u, wu = _leggauss(degree)
    u = (u + 1.0) * (math.pi / 4.0)
    r = np.sin(u)
    wrad = wu * (math.pi / 4.0) * np.cos(u) ** (n - 3) * np.sin(u) * (n - 2) / (2.0 * math.pi)
    psi, wpsi = _piecewise_nodes(-math.pi, math.pi,
                                 (-math.pi / 2.0, math.pi / 2.0), angular_degree)
    angular = np.abs(np.cos(psi)) ** q * wpsi
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    out = np.empty(betas.shape[0])
    # eta_1 = r cos(psi + beta) once the polar angle is shifted by beta
    cpsi, spsi = np.cos(psi), np.sin(psi)
    for start in range(0, betas.shape[0], 64):
        chunk = betas[start:start + 64]
        ca = cpsi[:, None] * np.cos(chunk)[None, :] - spsi[:, None] * np.sin(chunk)[None, :]
        base = 1.0 + t * t - 2.0 * t * r[:, None, None] * ca[None, :, :]
        vals = base ** (e / 2.0) * (r ** q)[:, None, None]
        out[start:start + 64] = np.einsum("i,ijk,j->k", wrad, vals, angular)
    return out


def script_I(A: float, B: float, a: float, b: float, beta: float,
             degree: int = 384) -> float:
    """int_{-pi}^{pi} (A - B cos th)^a |cos(th - beta)|^b dth.

    Requires 0 <= B < A and b > 0. The value is pi-periodic and even in
    beta; any real beta is accepted.
    """
    if not 0.0 <= B < A:
        raise ValueError(f"requires 0 <= B < A, got B = {B}, A = {A}")
    if not b > 0.0:
        raise ValueError(f"exponent b must be positive, got {b}")
    lo = beta - math.pi / 2.0
    hi = beta + math.pi / 2.0
    breaks = [math.remainder(v, 2.0 * math.pi) for v in (lo, hi)]
    th, w = _piecewise_nodes(-math.pi, math.pi, breaks, degree)
    vals = (A - B * np.cos(th)) ** a * np.abs(np.cos(th - beta)) ** b
    return float(w @ vals)


def script_J(params: ProblemParams, beta: float, q: float, r: float,
             s: float, degree: int = 384) -> float:
    """Angular profile of I: script_I(1+s^2, 2rs; (n-alpha)q/2 - n + 1, q; beta)."""
    _check_q(q)
    if not (0.0 <= r < 1.0 and 0.0 <= s < 1.0):
        raise ValueError(f"radii must lie in [0, 1), got r = {r}, s = {s}")
    n, al = params.n, params.alpha
    return script_I(1.0 + s * s, 2.0 * r * s, (n - al) * q / 2.0 - n + 1.0, q,
                    beta, degree=degree)


def sup_I_closed(params: ProblemParams, q: float, t: float,
                 q_exact: Fraction | None = None) -> tuple[BoundValue, RegimeTag]:
    """Closed-form sup over directions l of I(alpha, q, x, l) at |x| = t.

    At either threshold q the integral is direction-independent; strictly
    between them the tangential direction t_x maximizes (2F1 form), and
    outside the radial direction n_x does (3F2 form).
    """
    _check_q(q)
    _check_t(t)
    n, al = params.n, params.alpha
    case = classify_regime(params, q, q_exact)
    t2 = t * t
    if case == CASE_LOW:
        val = gamma_fn(n / 2.0) * gamma_fn((3.0 * n - al - 2.0) / (2.0 * n - 2.0 * al)) / (
            math.sqrt(math.pi)
            * gamma_fn((n * n + 2.0 * n - al * n - 2.0) / (2.0 * n - 2.0 * al)))
        return BoundValue.exact_value(val), RegimeTag(case, MAXIMIZER_ANY)
    if case == CASE_HIGH:
        val = gamma_fn(n / 2.0) * gamma_fn((3.0 * n - al) / (2.0 * n - 2.0 * al)) / (
            math.sqrt(math.pi)
            * gamma_fn((n * n + 2.0 * n - al * n) / (2.0 * n - 2.0 * al)))
        return BoundValue.exact_value(val * (1.0 + t2)), RegimeTag(case, MAXIMIZER_ANY)
    if case == CASE_BETWEEN:
        f = hyp_pFq([n - 1.0 - (n - al) * q / 2.0, (n - (n + 1.0 - al) * q) / 2.0],
                    [(q + n) / 2.0], t2)
        val = sphere_abs_moment(n, q) * f
        return BoundValue.exact_value(val), RegimeTag(case, MAXIMIZER_TANGENTIAL)
    ee = (n - al) * q / 2.0 - n + 1.0
    f = hyp_pFq([(2.0 * n - 2.0 - (n - al) * q) / 4.0,
                 (2.0 * n - (n - al) * q) / 4.0,
                 (q + 1.0) / 2.0],
                [0.5, (q + n) / 2.0],
                4.0 * t2 / (1.0 + t2) ** 2)
    val = (1.0 + t2) ** ee * sphere_abs_moment(n, q) * f
    return BoundValue.exact_value(val), RegimeTag(case, MAXIMIZER_RADIAL)


def sup_I_global(params: ProblemParams, q: float,
                 q_exact: Fraction | None = None) -> BoundValue:
    """sup over x in B^n and directions l of I(alpha, q, x, l).

    The supremum is the |x| -> 1 limit of sup_I_closed: the between-regime
    2F1 summed at 1 in closed form, the outside-regime 3F2 summed at 1 with
    prefactor 2^((n-alpha)q/2 - n + 1). Threshold q is refused since the
    direction-independent cases have no finite closed form here.
    """
    _check_q(q)
    n, al = params.n, params.alpha
    case = classify_regime(params, q, q_exact)
    if case in (CASE_LOW, CASE_HIGH):
        raise ValueError("global supremum requires the between or outside regime, "
                         f"but q = {q} sits at a threshold")
    if case == CASE_BETWEEN:
        val = sphere_abs_moment(n, q) * two_F_one_at_one(
            n - 1.0 - (n - al) * q / 2.0, (n - (n + 1.0 - al) * q) / 2.0,
            (q + n) / 2.0)
        return BoundValue.exact_value(val)
    val = 2.0 ** ((n - al) * q / 2.0 - n + 1.0) * sphere_abs_moment(n, q) * hyp_pFq(
        [(2.0 * n - 2.0 - (n - al) * q) / 4.0,
         (2.0 * n - (n - al) * q) / 4.0,
         (q + 1.0) / 2.0],
        [0.5, (q + n) / 2.0], 1.0, tol=1e-10)
    return BoundValue.exact_value(val)


def thm11_coefficient(params: ProblemParams, pair: ExponentPair,
                      x: BallPoint) -> float:
    """Certified bound on |grad u(x)| per unit L^p norm of the data, p > 1.

    (n-alpha) C_{n,alpha} (1-|x|^2)^(-(n(q-1)+1)/q) (sup_I_closed + J_term)^(1/q).
    Sharp at x = 0 and, for every x, when alpha = 2-n.
    """
    if math.isinf(pair.q):
        raise ValueError("p = 1 data is handled by thm12_coefficient")
    n, al = params.n, params.alpha
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n = {n}")
    q = pair.q
    t = x.radius
    sup_i, _ = sup_I_closed(params, q, t, pair.q_exact)
    inner = sup_i.value + J_term(params, q, t)
    return ((n - al) * c_n_alpha(params)
            * one_minus_sq(t) ** (-(n * (q - 1.0) + 1.0) / q)
            * inner ** (1.0 / q))


def _golden_max(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> float:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return max(fc, fd, f(0.5 * (a + b)))


def c_infty_direction(params: ProblemParams, x: BallPoint,
                      l: UnitDirection) -> float:
    """Exact directional constant sup_zeta |<grad P_alpha(x, .), l>|.

    Everything depends on rho = |x| and beta = arccos <n_x, l> only; the
    supremum reduces to a 1D maximization over the polar angle theta of a
    smooth 2pi-periodic profile, solved on a dense grid with golden-section
    refinement, taking the larger of the two sign branches.
    """
    n, al = params.n, params.alpha
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n = {n}")
    if l.n != n:
        raise ValueError(f"direction dimension {l.n} does not match n = {n}")
    cna = c_n_alpha(params)
    rho = x.radius
    if rho == 0.0:
        return (n - al) * cna
    nx = np.asarray(x.coords, dtype=float) / rho
    cosb = float(np.clip(nx @ np.asarray(l.coords, dtype=float), -1.0, 1.0))
    sinb = math.sqrt(max(0.0, 1.0 - cosb * cosb))
    sfac = (n - al) * one_minus_sq(rho) * sinb
    c0 = (2.0 - 3.0 * al + n) * rho + (2.0 - al - n) * rho ** 3
    c1 = al - n + (n + 3.0 * al - 4.0) * rho ** 2
    power = (n - al) / 2.0 + 1.0

    def profile(theta, sign):
        ct = np.cos(theta)
        num = np.abs(sfac * np.sin(theta) + sign * (c0 + c1 * ct) * cosb)
        return num / (1.0 + rho * rho - 2.0 * rho * ct) ** power

    grid = np.linspace(0.0, 2.0 * math.pi, THETA_GRID, endpoint=False)
    step = 2.0 * math.pi / THETA_GRID
    best = 0.0
    for sign in (1.0, -1.0):
        vals = profile(grid, sign)
        k = int(np.argmax(vals))
        refined = _golden_max(lambda th: float(profile(th, sign)),
                              grid[k] - step, grid[k] + step)
        best = max(best, float(vals[k]), refined)
    return cna * one_minus_sq(rho) ** (-al) * best


def c_infty_sup(params: ProblemParams, x: BallPoint) -> BoundValue:
    """Maximal constant sup_l of c_infty_direction at x.

    For 2-n <= alpha < 1 the closed form
    C_{n,alpha}(n-alpha+(n+alpha-2)t)/(1-t)^n holds exactly, attained in the
    radial direction +-n_x; for alpha < 2-n only the two-sided sandwich
    between that expression and its minus-sign counterpart is asserted.
    """
    n, al = params.n, params.alpha
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n = {n}")
    t = x.radius
    cna = c_n_alpha(params)
    plus = cna * (n - al + (n + al - 2.0) * t) / (1.0 - t) ** n
    if al >= 2.0 - n:
        return BoundValue.exact_value(plus)
    minus = cna * (n - al - (n + al - 2.0) * t) / (1.0 - t) ** n
    return BoundValue.interval(plus, minus)


def thm12_coefficient(params: ProblemParams, t: float) -> float:
    """Certified bound on |grad u(x)| per unit L^1 norm of the data.

    The alpha >= 2-n branch uses the plus-sign closed form; below 2-n the
    minus-sign branch (the upper end of the sandwich) certifies the bound.
    """
    _check_t(t)
    n, al = params.n, params.alpha
    cna = c_n_alpha(params)
    if al >= 2.0 - n:
        return cna * (n - al + (n + al - 2.0) * t) / (1.0 - t) ** n
    return cna * (n - al - (n + al - 2.0) * t) / (1.0 - t) ** n


def K_alpha(params: ProblemParams, rho: float, t: float) -> float:
    """Squared-gradient profile of the kernel along cos(theta) = t at |x| = rho.

    Rational in t with K(1) = (n-alpha+(n+alpha-2)rho)^2 and
    K(-1) = (alpha-n+(n+alpha-2)rho)^2; monotone increasing on [-1, 1]
    exactly when alpha >= 2-n.
    """
    if not (0.0 < rho < 1.0):
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if not (-1.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [-1, 1], got {t}")
    n, al = params.n, params.alpha
    num = ((n - al) ** 2
           + 2.0 * (2.0 - 3.0 * al * (2.0 - al) - (n - 2.0) * n) * rho ** 2
           + (n + al - 2.0) ** 2 * rho ** 4
           - 4.0 * (1.0 - al) * rho * (n - al + (2.0 - al - n) * rho ** 2) * t)
    return num / (1.0 + rho * rho - 2.0 * rho * t)

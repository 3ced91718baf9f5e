"""Boundary data on S^(n-1) and its extension by the Poisson-Szego integral.

u = P_alpha[phi] solves the weighted Laplace equation

    D_alpha u = (1-|x|^2) [ (1-|x|^2) sum d^2u/dx_j^2
                            - 2 alpha sum x_j du/dx_j + alpha(2-n-alpha) u ] = 0

with boundary values phi. Extensions and Jacobians are quadrature values of
the defining integrals; data depending on one or two fixed directions is
reduced to the zonal/bizonal rules in a frame aligned with x and the data
axis, keeping discontinuous families (sign, cap indicator) at deterministic
quadrature accuracy. Tabulated data falls back to Monte Carlo.
"""

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernel import (
    LOG_SPACE_RADIUS,
    BallPoint,
    ProblemParams,
    UnitDirection,
    c_n_alpha,
    one_minus_sq,
)
from .sphere import (
    SphereRule,
    _leggauss,
    reduce_bizonal,
    reduce_zonal,
    sphere_samples,
)

FD_STEP_RESIDUAL = 1e-3
FD_STEP_GRADIENT = 1e-5

FAMILIES = ("constant", "coordinate", "signed", "linear", "cap", "tabulated")


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """One of the builtin boundary-data families on S^(n-1)."""

    family: str
    m: int
    c: np.ndarray | None = None          # constant value in R^m
    index: int | None = None             # coordinate zeta -> zeta_i
    direction: np.ndarray | None = None  # axis of signed / cap data
    matrix: np.ndarray | None = None     # linear zeta -> A zeta
    height: float | None = None          # cap {<zeta, l> > h}
    points: np.ndarray | None = None     # tabulated sample points (k, n)
    values: np.ndarray | None = None     # tabulated sample values (k, m)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "tabulated" and (self.points is None or len(self.points) < 1):
            raise ValueError("tabulated data needs at least one sample")

    @classmethod
    def constant(cls, c) -> "BoundaryData":
        c = np.atleast_1d(np.asarray(c, dtype=float))
        return cls(family="constant", m=c.shape[0], c=c)

    @classmethod
    def coordinate(cls, index: int) -> "BoundaryData":
        if index < 0:
            raise ValueError("coordinate index must be nonnegative")
        return cls(family="coordinate", m=1, index=index)

    @classmethod
    def signed(cls, direction) -> "BoundaryData":
        l = _unit_coords(direction)
        return cls(family="signed", m=1, direction=l)

    @classmethod
    def linear(cls, matrix) -> "BoundaryData":
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"linear data needs a square matrix, got {a.shape}")
        return cls(family="linear", m=a.shape[0], matrix=a)

    @classmethod
    def cap(cls, direction, height: float) -> "BoundaryData":
        if not -1.0 < height < 1.0:
            raise ValueError(f"cap height must lie in (-1, 1), got {height}")
        l = _unit_coords(direction)
        return cls(family="cap", m=1, direction=l, height=float(height))

    @classmethod
    def tabulated(cls, points, values) -> "BoundaryData":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = np.asarray(values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if pts.shape[0] != vals.shape[0]:
            raise ValueError("points and values must have matching length")
        norms = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-6:
            warnings.warn("tabulated points renormalized to the unit sphere; "
                          f"max deviation {np.max(np.abs(norms - 1.0)):.3g}")
        pts = pts / norms[:, None]
        return cls(family="tabulated", m=vals.shape[1], points=pts, values=vals)

    @classmethod
    def from_csv(cls, path, n: int) -> "BoundaryData":
        """Load tabulated samples: header row, then n coordinates + m values."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise ValueError(f"{path}: empty file")
        header = rows[0]
        try:
            [float(cell) for cell in header]
        except ValueError:
            pass
        else:
            raise ValueError(f"{path}: header row required")
        data = np.array([[float(c) for c in row] for row in rows[1:]], dtype=float)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError(f"{path}: no samples")
        m = data.shape[1] - n
        if m not in (1, n):
            raise ValueError(
                f"{path}: {data.shape[1]} columns do not split into {n} "
                f"coordinates plus 1 or {n} values")
        return cls.tabulated(data[:, :n], data[:, n:])

    @property
    def sup_norm(self) -> float:
        """Finite sup of |phi| over the sphere (sampled sup for tabulated)."""
        if self.family == "constant":
            return float(np.linalg.norm(self.c))
        if self.family in ("coordinate", "signed", "cap"):
            return 1.0
        if self.family == "linear":
            return float(np.linalg.norm(self.matrix, 2))
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def check_dimension(self, n: int):
        if self.family == "coordinate" and self.index >= n:
            raise ValueError(f"coordinate index {self.index} out of range for n={n}")
        for arr, name in ((self.direction, "direction"), (self.matrix, "matrix"),
                          (self.points, "points")):
            if arr is not None and arr.shape[-1] != n:
                raise ValueError(f"{self.family} {name} has dimension "
                                 f"{arr.shape[-1]}, expected {n}")

    def __call__(self, zeta: np.ndarray) -> np.ndarray:
        """Evaluate on an array of sphere points, shape (k, n) -> (k, m)."""
        z = np.atleast_2d(np.asarray(zeta, dtype=float))
        if self.family == "constant":
            return np.broadcast_to(self.c, (z.shape[0], self.m)).copy()
        if self.family == "coordinate":
            return z[:, self.index][:, None]
        if self.family == "signed":
            return np.sign(z @ self.direction)[:, None]
        if self.family == "linear":
            return z @ self.matrix.T
        if self.family == "cap":
            return (z @ self.direction > self.height).astype(float)[:, None]
        out = np.empty((z.shape[0], self.m))
        for lo in range(0, z.shape[0], 2048):
            hi = min(lo + 2048, z.shape[0])
            d2 = ((z[lo:hi, None, :] - self.points[None, :, :]) ** 2).sum(axis=2)
            out[lo:hi] = self.values[np.argmin(d2, axis=1)]
        return out


@dataclass(frozen=True, eq=False)
class JacobianMatrix:
    """Du(x): row i is the gradient of the extension component u_i."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if not np.all(np.isfinite(e)):
            raise ValueError("Jacobian entries must be finite")
        object.__setattr__(self, "entries", e)

    @property
    def determinant(self) -> float:
        m, n = self.entries.shape
        if m != n:
            raise ValueError(f"determinant needs a square Jacobian, got {m}x{n}")
        return float(np.linalg.det(self.entries))


def _unit_coords(direction) -> np.ndarray:
    if isinstance(direction, UnitDirection):
        return direction.coords
    v = np.asarray(direction, dtype=float)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, |l| = {nrm}")
    return v / nrm


def _orth_unit(f1: np.ndarray) -> np.ndarray:
    k = int(np.argmin(np.abs(f1)))
    v = np.zeros_like(f1)
    v[k] = 1.0
    v = v - f1[k] * f1
    return v / np.linalg.norm(v)


def _frame(x: BallPoint, axis: np.ndarray | None, n: int):
    """Orthonormal (f1, f2) with x = |x| f1 and axis in span(f1, f2).

    Returns (s, f1, f2, beta) where axis = cos(beta) f1 + sin(beta) f2.
    """
    s = x.radius
    if s > 0:
        f1 = x.coords / s
    elif axis is not None:
        f1 = axis.copy()
    else:
        f1 = np.zeros(n)
        f1[0] = 1.0
    if axis is None:
        return s, f1, _orth_unit(f1), 0.0
    ca = float(axis @ f1)
    w = axis - ca * f1
    wn = float(np.linalg.norm(w))
    if wn > 1e-13:
        f2 = w / wn
        beta = math.atan2(wn, ca)
    else:
        f2 = _orth_unit(f1)
        beta = 0.0 if ca > 0 else math.pi
    return s, f1, f2, beta


def _value_profile(params: ProblemParams, s: float):
    """t -> P_alpha(x, zeta) as a function of t = <n_x, zeta>, |x| = s."""
    n, a = params.n, params.alpha
    cna = c_n_alpha(params)
    omsq = one_minus_sq(s)
    if s > LOG_SPACE_RADIUS:
        logc = math.log(cna) + (1.0 - a) * math.log(omsq)

        def prof(t):
            return np.exp(logc - 0.5 * (n - a) * np.log1p(s * s - 2.0 * s * np.asarray(t)))
    else:
        pref = cna * omsq ** (1.0 - a)

        def prof(t):
            return pref * (1.0 + s * s - 2.0 * s * np.asarray(t)) ** (-0.5 * (n - a))
    return prof


def _grad_profiles(params: ProblemParams, s: float):
    """Zonal factors of grad_x P_alpha: grad = (A+B)(t) s f1 - B(t) zeta."""
    n, a = params.n, params.alpha
    cna = c_n_alpha(params)
    omsq = one_minus_sq(s)
    if s > LOG_SPACE_RADIUS:
        la = math.log(2.0 * cna * (1.0 - a)) - a * math.log(omsq)
        lb = math.log(cna * (n - a)) + (1.0 - a) * math.log(omsq)

        def prof_a(t):
            return -np.exp(la - 0.5 * (n - a) * np.log1p(s * s - 2.0 * s * np.asarray(t)))

        def prof_b(t):
            return -np.exp(lb - 0.5 * (n + 2 - a) * np.log1p(s * s - 2.0 * s * np.asarray(t)))
    else:
        pa = -2.0 * cna * (1.0 - a) * omsq ** (-a)
        pb = -cna * (n - a) * omsq ** (1.0 - a)

        def prof_a(t):
            return pa * (1.0 + s * s - 2.0 * s * np.asarray(t)) ** (-0.5 * (n - a))

        def prof_b(t):
            return pb * (1.0 + s * s - 2.0 * s * np.asarray(t)) ** (-0.5 * (n + 2 - a))
    return prof_a, prof_b


def _kernel_batch(params: ProblemParams, x: BallPoint, z: np.ndarray) -> np.ndarray:
    prof = _value_profile(params, x.radius)
    if x.radius == 0.0:
        return prof(np.zeros(z.shape[0]))
    return prof(z @ (x.coords / x.radius))


def _kernel_grad_batch(params: ProblemParams, x: BallPoint, z: np.ndarray) -> np.ndarray:
    n, a = params.n, params.alpha
    s = x.radius
    t = z @ (x.coords / s) if s > 0 else np.zeros(z.shape[0])
    prof_a, prof_b = _grad_profiles(params, s)
    av, bv = prof_a(t), prof_b(t)
    return (av + bv)[:, None] * x.coords[None, :] - bv[:, None] * z


def _cap_moments(n: int, g, beta: float, h: float, degree: int, angular_degree: int):
    """Integrals of g(a) {1, a, b} over the cap {<zeta, l> > h}.

    (a, b) are the frame coordinates with l = cos(beta) f1 + sin(beta) f2;
    Cartesian slicing keeps the rim {<zeta, l> = h} out of every piece.
    """
    u_max = math.acos(h)
    xu, wu = _leggauss(degree)
    u = 0.5 * u_max * (xu + 1.0)
    wu = wu * 0.5 * u_max * np.sin(u) ** (n - 2)
    xp, wp = _leggauss(angular_degree)
    psi = 0.5 * math.pi * xp
    wp = wp * 0.5 * math.pi * np.cos(psi) ** (n - 3)
    v = np.cos(u)
    w = np.sin(u)[:, None] * np.sin(psi)[None, :]
    cb, sb = math.cos(beta), math.sin(beta)
    a = v[:, None] * cb - w * sb
    b = v[:, None] * sb + w * cb
    gv = g(a)
    pref = (n - 2) / (2.0 * math.pi)
    m_one = pref * float(wu @ (gv @ wp))
    m_a = pref * float(wu @ ((gv * a) @ wp))
    m_b = pref * float(wu @ ((gv * b) @ wp))
    return m_one, m_a, m_b


def _deterministic_rules(params: ProblemParams, rule: SphereRule | None):
    if rule is None:
        rule = SphereRule(kind="zonal-1D", n=params.n)
    elif rule.n != params.n:
        raise ValueError(f"rule dimension {rule.n} does not match n={params.n}")
    zon = SphereRule(kind="zonal-1D", n=params.n, degree=rule.degree)
    biz = SphereRule(kind="bizonal-2D", n=params.n, degree=rule.degree,
                     angular_degree=rule.angular_degree)
    return rule, zon, biz


def _wants_monte_carlo(phi: BoundaryData, rule: SphereRule | None) -> bool:
    return phi.family == "tabulated" or (rule is not None and rule.kind == "monte-carlo")


def _mc_rule(params: ProblemParams, rule: SphereRule | None) -> SphereRule:
    if rule is not None and rule.n != params.n:
        raise ValueError(f"rule dimension {rule.n} does not match n={params.n}")
    if rule is not None and rule.kind == "monte-carlo":
        return rule
    return SphereRule(kind="monte-carlo", n=params.n)


def poisson_extend(phi: BoundaryData, params: ProblemParams, x: BallPoint,
                   rule: SphereRule | None = None) -> np.ndarray:
    """u(x) = int P_alpha(x, zeta) phi(zeta) dsigma(zeta), shape (m,)."""
    n = params.n
    phi.check_dimension(n)
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n={n}")
    if _wants_monte_carlo(phi, rule):
        mc = _mc_rule(params, rule)
        z = sphere_samples(n, mc.samples, mc.seed)
        weights = _kernel_batch(params, x, z)
        return np.asarray(weights @ phi(z) / mc.samples, dtype=float)
    rule, zon, biz = _deterministic_rules(params, rule)
    prof = _value_profile(params, x.radius)

    if phi.family == "constant":
        mass = reduce_zonal(n, prof, zon)
        return phi.c * mass
    if phi.family == "coordinate":
        axis = np.zeros(n)
        axis[phi.index] = 1.0
        s, f1, _, _ = _frame(x, axis, n)
        z1 = reduce_zonal(n, lambda t: prof(t) * t, zon)
        return np.array([float(f1[phi.index]) * z1])
    if phi.family == "linear":
        s, f1, _, _ = _frame(x, None, n)
        z1 = reduce_zonal(n, lambda t: prof(t) * t, zon)
        return np.asarray(phi.matrix @ f1 * z1, dtype=float)
    if phi.family == "signed":
        s, f1, f2, beta = _frame(x, phi.direction, n)
        cb, sb = math.cos(beta), math.sin(beta)
        val = reduce_bizonal(
            n, lambda a, b: prof(a) * np.sign(a * cb + b * sb), biz,
            angular_breaks=(beta - math.pi / 2, beta + math.pi / 2))
        return np.array([val])
    # cap indicator
    s, f1, f2, beta = _frame(x, phi.direction, n)
    m_one, _, _ = _cap_moments(n, prof, beta, phi.height,
                               rule.degree, rule.angular_degree)
    return np.array([m_one])


def poisson_jacobian(phi: BoundaryData, params: ProblemParams, x: BallPoint,
                     rule: SphereRule | None = None) -> JacobianMatrix:
    """Du(x)_ij = int (dP_alpha/dx_j)(x, zeta) phi_i(zeta) dsigma(zeta)."""
    n = params.n
    phi.check_dimension(n)
    if x.n != n:
        raise ValueError(f"point dimension {x.n} does not match n={n}")
    if _wants_monte_carlo(phi, rule):
        mc = _mc_rule(params, rule)
        z = sphere_samples(n, mc.samples, mc.seed)
        grads = _kernel_grad_batch(params, x, z)
        return JacobianMatrix(phi(z).T @ grads / mc.samples)
    rule, zon, biz = _deterministic_rules(params, rule)
    s = x.radius
    prof_a, prof_b = _grad_profiles(params, s)
    prof_ab = lambda t: prof_a(t) + prof_b(t)

    if phi.family == "constant":
        radial = (s * reduce_zonal(n, prof_ab, zon)
                  - reduce_zonal(n, lambda t: prof_b(t) * t, zon))
        _, f1, _, _ = _frame(x, None, n)
        return JacobianMatrix(np.outer(phi.c, radial * f1))
    if phi.family == "coordinate":
        axis = np.zeros(n)
        axis[phi.index] = 1.0
        s, f1, f2, beta = _frame(x, axis, n)
        ca, cb = math.cos(beta), math.sin(beta)
        i_abt = reduce_zonal(n, lambda t: prof_ab(t) * t, zon)
        i_btt = reduce_zonal(n, lambda t: prof_b(t) * t * t, zon)
        i_bperp = reduce_zonal(n, lambda t: prof_b(t) * (1.0 - t * t), zon) / (n - 1)
        row = ca * (s * i_abt - i_btt) * f1 - cb * i_bperp * f2
        return JacobianMatrix(row[None, :])
    if phi.family == "linear":
        _, f1, _, _ = _frame(x, None, n)
        i_abt = reduce_zonal(n, lambda t: prof_ab(t) * t, zon)
        i_btt = reduce_zonal(n, lambda t: prof_b(t) * t * t, zon)
        c2 = -reduce_zonal(n, lambda t: prof_b(t) * (1.0 - t * t), zon) / (n - 1)
        c1 = s * i_abt - i_btt - c2
        m = c1 * np.outer(f1, f1) + c2 * np.eye(n)
        return JacobianMatrix(phi.matrix @ m)
    if phi.family == "signed":
        s, f1, f2, beta = _frame(x, phi.direction, n)
        cb, sb = math.cos(beta), math.sin(beta)
        breaks = (beta - math.pi / 2, beta + math.pi / 2)
        sgn = lambda a, b: np.sign(a * cb + b * sb)
        i_ab = reduce_bizonal(n, lambda a, b: prof_ab(a) * sgn(a, b), biz, breaks)
        i_ba = reduce_bizonal(n, lambda a, b: prof_b(a) * a * sgn(a, b), biz, breaks)
        i_bb = reduce_bizonal(n, lambda a, b: prof_b(a) * b * sgn(a, b), biz, breaks)
        row = (s * i_ab - i_ba) * f1 - i_bb * f2
        return JacobianMatrix(row[None, :])
    # cap indicator
    s, f1, f2, beta = _frame(x, phi.direction, n)
    i_ab, _, _ = _cap_moments(n, prof_ab, beta, phi.height,
                              rule.degree, rule.angular_degree)
    _, i_ba, i_bb = _cap_moments(n, prof_b, beta, phi.height,
                                 rule.degree, rule.angular_degree)
    row = (s * i_ab - i_ba) * f1 - i_bb * f2
    return JacobianMatrix(row[None, :])


def lp_norm(phi: BoundaryData, p: float, rule: SphereRule) -> float:
    """(int |phi|^p dsigma)^(1/p); declared or sampled sup for p = inf."""
    if not (p >= 1.0):
        raise ValueError(f"p must lie in [1, inf], got {p}")
    n = rule.n
    phi.check_dimension(n)
    if math.isinf(p):
        return phi.sup_norm
    if phi.family == "constant":
        return float(np.linalg.norm(phi.c))
    if phi.family == "signed":
        return 1.0
    if phi.family == "coordinate":
        return reduce_zonal(n, lambda t: np.abs(t) ** p,
                            SphereRule(kind="zonal-1D", n=n, degree=rule.degree),
                            breakpoints=(0.0,)) ** (1.0 / p)
    if phi.family == "cap":
        meas = reduce_zonal(
            n, lambda t: (t > phi.height).astype(float),
            SphereRule(kind="zonal-1D", n=n, degree=rule.degree),
            breakpoints=(phi.height,))
        return meas ** (1.0 / p)
    if phi.family == "linear" and p == 2.0:
        return float(np.linalg.norm(phi.matrix, "fro") / math.sqrt(n))
    # linear with general p, and tabulated data: Monte Carlo
    mc = rule if rule.kind == "monte-carlo" else SphereRule(kind="monte-carlo", n=n)
    z = sphere_samples(n, mc.samples, mc.seed)
    vals = np.linalg.norm(phi(z), axis=1)
    return float(np.mean(vals ** p) ** (1.0 / p))


def alpha_laplacian_residual(u, params: ProblemParams, x: BallPoint,
                             h: float = FD_STEP_RESIDUAL) -> np.ndarray:
    """Central-difference discretization of D_alpha u at x.

    D_alpha u = (1-|x|^2) [ (1-|x|^2) sum_j d2u/dx_j^2
                            - 2 alpha sum_j x_j du/dx_j + alpha(2-n-alpha) u ].
    """
    n, a = params.n, params.alpha
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    if 1.0 - x.radius <= h * math.sqrt(n):
        raise ValueError(
            f"x must sit at distance > h sqrt(n) = {h * math.sqrt(n):.3g} "
            f"from the boundary, got 1 - |x| = {1.0 - x.radius:.3g}")
    u0 = np.atleast_1d(np.asarray(u(x.coords), dtype=float))
    lap = np.zeros_like(u0)
    drift = np.zeros_like(u0)
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        up = np.atleast_1d(np.asarray(u(x.coords + e), dtype=float))
        um = np.atleast_1d(np.asarray(u(x.coords - e), dtype=float))
        lap += (up - 2.0 * u0 + um) / (h * h)
        drift += x.coords[j] * (up - um) / (2.0 * h)
    omsq = one_minus_sq(x.radius)
    return omsq * (omsq * lap - 2.0 * a * drift + a * (2.0 - n - a) * u0)

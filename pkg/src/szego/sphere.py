"""Integration over the unit sphere S^(n-1) against the normalized measure.

Zonal integrands (depending on one coordinate) and bizonal integrands
(depending on two) are reduced to 1D/2D weighted integrals evaluated by
Gauss-Legendre rules; general integrands go through seeded Monte Carlo.
Integrands must accept numpy arrays elementwise.

The closed-form kernel-power integral

    int dsigma(zeta) / |x - zeta|^(2 lambda)
        = 2F1(lambda, lambda - n/2 + 1; n/2; |x|^2)

is exposed with both hypergeometric representations.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hypergeom import gamma_fn, hyp_pFq

DEFAULT_RADIAL_DEGREE = 256
DEFAULT_ANGULAR_DEGREE = 512
DEFAULT_MC_COUNT = 1_000_000
MC_BLOCK = 64


class QuadratureError(ArithmeticError):
    """Integrand produced non-finite values on the quadrature grid."""


@dataclass(frozen=True)
class SphereRule:
    """Quadrature description for the normalized measure on S^(n-1)."""

    kind: str = "zonal-1D"           # zonal-1D | bizonal-2D | monte-carlo
    n: int = 3
    degree: int = DEFAULT_RADIAL_DEGREE
    angular_degree: int = DEFAULT_ANGULAR_DEGREE
    samples: int = DEFAULT_MC_COUNT
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("zonal-1D", "bizonal-2D", "monte-carlo"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.n < 3:
            raise ValueError(f"dimension must be >= 3, got {self.n}")
        if self.degree <= 0 or self.angular_degree <= 0 or self.samples <= 0:
            raise ValueError("degree and sample counts must be positive")


@lru_cache(maxsize=64)
def _leggauss(deg: int):
    x, w = np.polynomial.legendre.leggauss(deg)
    return x, w


def _graded_piece(lo: float, hi: float, deg: int):
    # cubic grading tau -> (3 tau - tau^3)/2 clusters nodes at both endpoints,
    # taming algebraic |.|^b endpoint singularities left by kink splitting
    tau, w = _leggauss(deg)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid + half * 0.5 * (3.0 * tau - tau ** 3)
    weights = w * half * 1.5 * (1.0 - tau ** 2)
    return nodes, weights


def _piecewise_nodes(lo: float, hi: float, breaks, deg: int):
    cuts = sorted(b for b in set(float(b) for b in breaks) if lo < b < hi)
    edges = [lo] + cuts + [hi]
    parts = [_graded_piece(a, b, deg) for a, b in zip(edges, edges[1:])]
    nodes = np.concatenate([p[0] for p in parts])
    weights = np.concatenate([p[1] for p in parts])
    return nodes, weights


def zonal_constant(n: int) -> float:
    """(n-1) G(n/2) / (2 sqrt(pi) G((n+1)/2)): weight of the 1D reduction."""
    return (n - 1) * gamma_fn(n / 2) / (2 * math.sqrt(math.pi) * gamma_fn((n + 1) / 2))


def reduce_zonal(n: int, f, rule: SphereRule | None = None, breakpoints=()) -> float:
    """Integrate zeta -> f(zeta_1) over S^(n-1) against sigma.

    Computed as zonal_constant(n) * int_{-1}^{1} (1-t^2)^((n-3)/2) f(t) dt
    with the substitution t = cos(u), which removes the n = 3 endpoint
    singularity. breakpoints lists t-values where f is not smooth.
    """
    if rule is None:
        rule = SphereRule(kind="zonal-1D", n=n)
    if rule.n != n:
        raise ValueError(f"rule dimension {rule.n} does not match n={n}")
    u_breaks = [math.acos(max(-1.0, min(1.0, b))) for b in breakpoints]
    u, w = _piecewise_nodes(0.0, math.pi, u_breaks, rule.degree)
    t = np.cos(u)
    vals = np.asarray(f(t), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("zonal integrand produced non-finite values")
    integral = float(np.sum(w * np.sin(u) ** (n - 2) * vals))
    return zonal_constant(n) * integral


def reduce_bizonal(n: int, f, rule: SphereRule | None = None, angular_breaks=()) -> float:
    """Integrate zeta -> f(zeta_1, zeta_2) over S^(n-1) against sigma.

    Computed as
        (n-2)/(2 pi) int_0^1 (1-r^2)^((n-4)/2) r int_{-pi}^{pi}
            f(r cos th, r sin th) dth dr
    with r = sin(u) (removes the n = 3 radial endpoint singularity).
    angular_breaks lists theta-values where f is not smooth along the circle.
    """
    if rule is None:
        rule = SphereRule(kind="bizonal-2D", n=n)
    if rule.n != n:
        raise ValueError(f"rule dimension {rule.n} does not match n={n}")
    # principal-interval images of the breaks
    tb = []
    for b in angular_breaks:
        b = math.remainder(float(b), 2 * math.pi)
        tb.append(b)
    th, wth = _piecewise_nodes(-math.pi, math.pi, tb, rule.angular_degree)
    u, wu = _leggauss(rule.degree)
    u = 0.25 * math.pi * (u + 1.0)
    wu = wu * 0.25 * math.pi
    r = np.sin(u)
    radial_w = wu * np.cos(u) ** (n - 3) * np.sin(u)
    a = r[:, None] * np.cos(th)[None, :]
    b = r[:, None] * np.sin(th)[None, :]
    vals = np.asarray(f(a, b), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("bizonal integrand produced non-finite values")
    inner = vals @ wth
    return (n - 2) / (2 * math.pi) * float(radial_w @ inner)


def sphere_samples(n: int, count: int, seed: int) -> np.ndarray:
    """Uniform points on S^(n-1): normalized standard normal vectors.

    Drawn in fixed 64-sample blocks, block i seeded by (seed, i), so serial
    and sharded evaluation agree bit for bit.
    """
    out = np.empty((count, n))
    for start in range(0, count, MC_BLOCK):
        stop = min(start + MC_BLOCK, count)
        rng = np.random.default_rng([seed, start // MC_BLOCK])
        g = rng.standard_normal((stop - start, n))
        out[start:stop] = g / np.linalg.norm(g, axis=1, keepdims=True)
    return out


def monte_carlo_sphere(n: int, f, count: int = DEFAULT_MC_COUNT, seed: int = 0):
    """Monte Carlo mean of f over S^(n-1); returns (estimate, stderr)."""
    if count < 2:
        raise ValueError(f"need at least 2 samples, got {count}")
    pts = sphere_samples(n, count, seed)
    vals = np.asarray(f(pts), dtype=float)
    if vals.shape != (count,):
        raise ValueError(
            f"integrand must map (count, n) points to (count,) values, "
            f"got shape {vals.shape}")
    est = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(count))
    return est, stderr


def liu_identity(n: int, lam: float, t: float) -> float:
    """2F1(lambda, lambda - n/2 + 1; n/2; t) with t = |x|^2 < 1."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t = |x|^2 must lie in [0, 1), got {t}")
    return hyp_pFq([lam, lam - n / 2 + 1.0], [n / 2], t)


def liu_identity_euler(n: int, lam: float, t: float) -> float:
    """Euler-transformed form (1-t)^(n-2 lambda-1) 2F1(n/2-lambda, n-lambda-1; n/2; t)."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t = |x|^2 must lie in [0, 1), got {t}")
    return (1.0 - t) ** (n - 2 * lam - 1.0) * hyp_pFq(
        [n / 2 - lam, n - lam - 1.0], [n / 2], t)

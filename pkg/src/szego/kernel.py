"""Poisson-Szego kernel of the weighted Laplacian on the unit ball B^n.

For n >= 3 and alpha < 1 the kernel

    P_alpha(x, zeta) = C_{n,alpha} (1 - |x|^2)^(1-alpha) / |x - zeta|^(n-alpha)

reproduces boundary data of the associated Dirichlet problem. This module
evaluates the normalizing constant, the kernel, its x-gradient, and the
closed-form total mass int P_alpha(x, zeta) dsigma(zeta).
"""

import math
from dataclasses import dataclass

import numpy as np

from .hypergeom import gamma_fn, hyp_pFq

LOG_SPACE_RADIUS = 0.99


@dataclass(frozen=True)
class ProblemParams:
    """Dimension n >= 3 and exponent alpha < 1."""

    n: int
    alpha: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n!r}")
        if not (math.isfinite(self.alpha) and self.alpha < 1.0):
            raise ValueError(f"alpha must be finite and < 1, got {self.alpha!r}")


def _as_vector(coords, n=None):
    v = np.array(coords, dtype=float).reshape(-1)
    if n is not None and v.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {v.shape}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class BallPoint:
    """Point x with |x| < 1."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_vector(self.coords))
        if np.linalg.norm(self.coords) >= 1.0:
            raise ValueError(f"|x| must be < 1, got |x| = {np.linalg.norm(self.coords)}")

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.coords))


@dataclass(frozen=True, eq=False)
class UnitDirection:
    """Unit vector, |l| = 1 within 1e-14 on input."""

    coords: np.ndarray

    def __post_init__(self):
        v = _as_vector(self.coords)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-14:
            raise ValueError(f"|l| must equal 1 within 1e-14, got {norm}")
        w = v / norm
        w.setflags(write=False)
        object.__setattr__(self, "coords", w)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @classmethod
    def n_x(cls, x: BallPoint) -> "UnitDirection":
        """Radial unit vector x/|x| of a nonzero point."""
        r = x.radius
        if r == 0.0:
            raise ValueError("n_x is undefined at x = 0")
        return cls(x.coords / r)

    @classmethod
    def t_x(cls, x: BallPoint) -> "UnitDirection":
        """A deterministic unit vector orthogonal to n_x."""
        nx = cls.n_x(x).coords
        k = int(np.argmin(np.abs(nx)))
        v = np.zeros_like(nx)
        v[k] = 1.0
        v = v - nx[k] * nx
        return cls(v / np.linalg.norm(v))

    @classmethod
    def l_beta(cls, beta: float, n: int) -> "UnitDirection":
        """cos(beta) e_1 + sin(beta) e_2 in R^n."""
        v = np.zeros(n)
        v[0] = math.cos(beta)
        v[1] = math.sin(beta)
        return cls(v)


def c_n_alpha(params: ProblemParams) -> float:
    """C_{n,alpha} = G((n-a)/2) G(1-a/2) / (G(n/2) G(1-a))."""
    n, a = params.n, params.alpha
    top = ((n - a) / 2, 1 - a / 2)
    bot = (n / 2, 1 - a)
    if max(top + bot) < 170.0:
        return gamma_fn(top[0]) * gamma_fn(top[1]) / (gamma_fn(bot[0]) * gamma_fn(bot[1]))
    # the ratio stays moderate while individual Gammas overflow
    return math.exp(math.lgamma(top[0]) + math.lgamma(top[1])
                    - math.lgamma(bot[0]) - math.lgamma(bot[1]))


def one_minus_sq(r: float) -> float:
    # (1-r)(1+r) keeps precision as r -> 1
    return (1.0 - r) * (1.0 + r)


def kernel_value(params: ProblemParams, x: BallPoint, zeta: UnitDirection) -> float:
    """P_alpha(x, zeta) = C_{n,alpha} (1-|x|^2)^(1-alpha) / |x-zeta|^(n-alpha)."""
    n, a = params.n, params.alpha
    r = x.radius
    d = float(np.linalg.norm(x.coords - zeta.coords))
    omsq = one_minus_sq(r)
    if r > LOG_SPACE_RADIUS:
        # very negative alpha overflows the bare powers near the boundary
        return math.exp(math.log(c_n_alpha(params))
                        + (1.0 - a) * math.log(omsq)
                        - (n - a) * math.log(d))
    return c_n_alpha(params) * omsq ** (1.0 - a) / d ** (n - a)


def kernel_gradient(params: ProblemParams, x: BallPoint, zeta: UnitDirection) -> np.ndarray:
    """Gradient in x of P_alpha(x, zeta):

    -C_{n,alpha} [2(1-a) x |x-z|^2 + (n-a)(1-|x|^2)(x-z)]
                 / ((1-|x|^2)^a |x-z|^(n+2-a))
    """
    n, a = params.n, params.alpha
    r = x.radius
    diff = x.coords - zeta.coords
    d2 = float(diff @ diff)
    d = math.sqrt(d2)
    omsq = one_minus_sq(r)
    if r > LOG_SPACE_RADIUS:
        scale = math.exp(-a * math.log(omsq) - (n + 2 - a) * math.log(d))
    else:
        scale = omsq ** (-a) / d ** (n + 2 - a)
    vec = 2.0 * (1.0 - a) * d2 * x.coords + (n - a) * omsq * diff
    return -c_n_alpha(params) * scale * vec


def kernel_mass(params: ProblemParams, x: BallPoint) -> float:
    """int P_alpha(x, zeta) dsigma(zeta)
        = C_{n,alpha} (1-t)^(1-alpha) 2F1((n-a)/2, 1-a/2; n/2; t),  t = |x|^2.

    Evaluated through the Euler-transformed equal form
    C_{n,alpha} 2F1(a/2, (n+a)/2 - 1; n/2; t), which stays summable as t -> 1.
    """
    n, a = params.n, params.alpha
    t = x.radius ** 2
    return c_n_alpha(params) * hyp_pFq([a / 2, (n + a) / 2 - 1.0], [n / 2], t)

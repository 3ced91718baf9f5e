"""Pochhammer symbols, the Gamma function, and pFq series on [-1, 1].

Evaluates the generalized hypergeometric series

    pFq(a1,..,ap; b1,..,bq; s) = sum_k  prod_i (a_i)_k / prod_j (b_j)_k * s^k / k!

for p = q + 1 and real s in [-1, 1], including terminating series and the
boundary point s = 1. All operations are pure.
"""

import math

MAX_TERMS = 100_000

# refusal threshold for the near-boundary 2F1 path; below this parametric
# excess neither the raw series nor the connection formula reaches tolerance
MIN_EXCESS_NEAR_ONE = 0.05
NEAR_ONE = 0.999


class DivergenceError(ArithmeticError):
    """Series does not converge for the given parameters/argument."""


class PrecisionError(ArithmeticError):
    """Requested value cannot be computed to working accuracy."""


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a(a+1)...(a+k-1); (a)_0 = 1 for every a."""
    if k < 0 or k != int(k):
        raise ValueError(f"pochhammer order must be a nonnegative integer, got {k}")
    out = 1.0
    for i in range(int(k)):
        out *= a + i
    return out


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"gamma_fn requires a positive argument, got {x}")
    return math.gamma(x)


def _recip_gamma(x: float) -> float:
    # 1/Gamma(x), with the poles at 0, -1, -2, ... sent to 0
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _is_nonpositive_int(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


def _termination_order(upper):
    # a non-positive integer upper parameter -m truncates the series at k = m
    orders = [int(-a) for a in upper if _is_nonpositive_int(a)]
    return min(orders) if orders else None


def _validate(upper, lower, s: float) -> None:
    if len(upper) != len(lower) + 1:
        raise ValueError(
            f"need p = q + 1 parameters, got p={len(upper)}, q={len(lower)}")
    for b in lower:
        if _is_nonpositive_int(b):
            raise ValueError(f"lower parameter {b} is zero or a negative integer")
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"argument must lie in [-1, 1], got {s}")


def _excess(upper, lower) -> float:
    return sum(lower) - sum(upper)


def _term_ratio(upper, lower, s, k):
    ratio = s / (k + 1.0)
    for a in upper:
        ratio *= a + k
    for b in lower:
        ratio /= b + k
    return ratio


def _sum_terminating(upper, lower, s, order):
    total = 1.0
    term = 1.0
    for k in range(order):
        term *= _term_ratio(upper, lower, s, k)
        total += term
    return total


def _sum_series(upper, lower, s, tol):
    # forward summation with the geometric tail bound |term| * s/(1-s); three
    # consecutive small bounds certify convergence
    gfac = max(1.0, abs(s) / (1.0 - abs(s))) if abs(s) < 1.0 else 1.0
    total = 1.0
    term = 1.0
    small_streak = 0
    for k in range(MAX_TERMS):
        term *= _term_ratio(upper, lower, s, k)
        total += term
        if abs(term) * gfac <= tol * (1.0 + abs(total)):
            small_streak += 1
            if small_streak >= 3:
                return total
        else:
            small_streak = 0
    raise DivergenceError(
        f"series did not converge within {MAX_TERMS} terms "
        f"(upper={list(upper)}, lower={list(lower)}, s={s})")


def _sum_at_one(upper, lower, tol):
    # At s = 1 the terms decay like k^(-1-excess) and the tail of the partial
    # sums like k^(-excess), too slowly to ignore. Record partial sums at
    # doubling checkpoints and extrapolate in the known exponents: each
    # Richardson level removes one power, k^(-excess), k^(-excess-1), ...
    excess = _excess(upper, lower)
    checkpoints = (MAX_TERMS // 8, MAX_TERMS // 4, MAX_TERMS // 2, MAX_TERMS)
    sums = []
    total = 1.0
    term = 1.0
    small_streak = 0
    for k in range(MAX_TERMS):
        term *= _term_ratio(upper, lower, 1.0, k)
        total += term
        # fast path: the algebraic tail estimate itself is below tol, so
        # adding it leaves a residual of a lower order still
        if abs(term) * (k + 1) / excess <= tol * (1.0 + abs(total)):
            small_streak += 1
            if small_streak >= 3:
                return total + term * (k + 1) / excess
        else:
            small_streak = 0
        if k + 1 in checkpoints:
            sums.append(total)
    level = sums
    power = excess
    for _ in range(3):
        w = 1.0 / (2.0 ** power - 1.0)
        level = [hi + (hi - lo) * w for lo, hi in zip(level, level[1:])]
        power += 1.0
    refined = level[0]
    err_est = abs(refined - sums[-1] - (sums[-1] - sums[-2]) / (2.0 ** excess - 1.0))
    # err_est is the error of the once-extrapolated value; refined carries two
    # further levels, each reducing the error by ~(checkpoint count)^-1
    err_est *= (16.0 / checkpoints[0]) ** 2
    if err_est > tol * (1.0 + abs(refined)):
        raise DivergenceError(
            f"series at s = 1 reached estimated error {err_est:.3g} "
            f"after {MAX_TERMS} terms, above tol = {tol:.3g} "
            f"(upper={list(upper)}, lower={list(lower)})")
    return refined


def _sum_alternating_at_minus_one(upper, lower, tol):
    # s = -1 with slowly decaying terms: partial sums oscillate around the
    # limit with envelope ~ k^(-1-excess); repeated averaging of adjacent
    # partial sums gains a factor 1/k per level
    levels = 10
    window = []
    total = 1.0
    term = 1.0
    last = None
    small_streak = 0
    for k in range(MAX_TERMS):
        term *= _term_ratio(upper, lower, -1.0, k)
        total += term
        if abs(term) <= tol * (1.0 + abs(total)):
            small_streak += 1
            if small_streak >= 3:
                return total
        else:
            small_streak = 0
        window.append(total)
        if len(window) > levels + 1:
            window.pop(0)
        if k >= 2000 and (k & 1023) == 0:
            avg = list(window)
            while len(avg) > 1:
                avg = [(u + v) / 2.0 for u, v in zip(avg, avg[1:])]
            if last is not None and abs(avg[0] - last) <= 0.5 * tol * (1.0 + abs(avg[0])):
                return avg[0]
            last = avg[0]
    if last is not None:
        return last
    raise DivergenceError(
        f"alternating series did not settle within {MAX_TERMS} terms "
        f"(upper={list(upper)}, lower={list(lower)})")


def _two_f_one_near_one(a, b, c, s, tol):
    # boundary closed form plus the (1-s)^(c-a-b) correction series; both
    # inner series run in powers of 1-s < 1e-3, so a handful of terms suffice
    excess = c - a - b
    if excess < MIN_EXCESS_NEAR_ONE:
        raise PrecisionError(
            f"2F1 argument {s} too close to 1 for parametric excess "
            f"{excess:.3g}; refusing rather than returning an inaccurate sum")
    if abs(excess - round(excess)) < 1e-6:
        # integer excess degenerates the connection formula (log terms);
        # direct summation still closes thanks to the geometric factor
        return _sum_series([a, b], [c], s, tol)
    z = 1.0 - s
    lead = gamma_fn(c) * gamma_fn(excess) * _recip_gamma(c - a) * _recip_gamma(c - b)
    corr = (gamma_fn(c) * math.gamma(-excess) * _recip_gamma(a) * _recip_gamma(b)
            * z ** excess)
    head = _sum_series([a, b], [a + b - c + 1.0], z, tol)
    tail = _sum_series([c - a, c - b], [c - a - b + 1.0], z, tol)
    return lead * head + corr * tail


def hyp_pFq(upper, lower, s: float, tol: float = 1e-14) -> float:
    """Evaluate pFq(upper; lower; s), p = q + 1, for s in [-1, 1].

    Terminating series (some upper parameter a non-positive integer) are
    summed exactly. Otherwise partial sums are accumulated until the tail
    bound drops below tol; at s = 1 this requires positive parametric excess
    sum(lower) - sum(upper), else DivergenceError. The hard cap of 100 000
    terms raises DivergenceError when hit.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    upper = [float(a) for a in upper]
    lower = [float(b) for b in lower]
    s = float(s)
    _validate(upper, lower, s)

    order = _termination_order(upper)
    if order is not None:
        return _sum_terminating(upper, lower, s, order)

    if s == 1.0:
        excess = _excess(upper, lower)
        if excess <= 0:
            raise DivergenceError(
                f"pFq diverges at s = 1: parametric excess {excess:.6g} <= 0")
        return _sum_at_one(upper, lower, tol)

    if s == -1.0:
        if _excess(upper, lower) <= -1:
            raise DivergenceError(
                f"pFq diverges at s = -1: parametric excess "
                f"{_excess(upper, lower):.6g} <= -1")
        return _sum_alternating_at_minus_one(upper, lower, tol)

    if s > NEAR_ONE and len(upper) == 2:
        return _two_f_one_near_one(upper[0], upper[1], lower[0], s, tol)

    return _sum_series(upper, lower, s, tol)


def two_F_one_at_one(a: float, b: float, c: float) -> float:
    """Gauss summation: 2F1(a, b; c; 1) = G(c)G(c-a-b) / (G(c-a)G(c-b)).

    Requires c - a - b > 0, or a terminating series.
    """
    a, b, c = float(a), float(b), float(c)
    if _is_nonpositive_int(c):
        raise ValueError(f"lower parameter {c} is zero or a negative integer")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return _sum_terminating([a, b], [c], 1.0, _termination_order([a, b]))
    excess = c - a - b
    if excess <= 0:
        raise DivergenceError(
            f"2F1(a={a}, b={b}; c={c}; 1) diverges: c - a - b = {excess:.6g} <= 0")
    return gamma_fn(c) * gamma_fn(excess) * _recip_gamma(c - a) * _recip_gamma(c - b)


class HypergeomSpec:
    """Parameter bundle (upper; lower; argument) with invariant checks."""

    def __init__(self, upper, lower, argument: float):
        self.upper = [float(a) for a in upper]
        self.lower = [float(b) for b in lower]
        self.argument = float(argument)
        _validate(self.upper, self.lower, self.argument)
        if abs(self.argument) == 1.0 and _termination_order(self.upper) is None:
            if _excess(self.upper, self.lower) <= 0:
                raise ValueError(
                    "non-terminating series with |s| = 1 requires positive "
                    "parametric excess")

    def value(self, tol: float = 1e-14) -> float:
        return hyp_pFq(self.upper, self.lower, self.argument, tol)

    def __repr__(self):
        return (f"HypergeomSpec(upper={self.upper}, lower={self.lower}, "
                f"argument={self.argument})")

"""End-to-end acceptance battery: one test per criterion, stated tolerances.

Each test prints a single summary line and asserts the criterion as
written. Two are expected to fail with the current closed forms: the
directional L^1 constant checks (criterion 7) and, downstream of them,
the full verify battery (criterion 11); the swept directional maximum
genuinely exceeds the closed-form display whenever alpha != 0, and falls
outside the stated sandwich interval for alpha < 2-n. The failing
assertions carry the offending rows.
"""

import math
import time
from fractions import Fraction

import numpy as np

from szego.cli import main as cli_main
from szego.hypergeom import gamma_fn
from szego.kernel import (
    BallPoint,
    ProblemParams,
    UnitDirection,
    c_n_alpha,
    kernel_gradient,
    kernel_mass,
    kernel_value,
)
from szego.landau import G_fn, landau_radius, n_star, psi, verify_univalence
from szego.poisson import BoundaryData, alpha_laplacian_residual, poisson_extend
from szego.sphere import reduce_zonal
from szego.sharp_bounds import (
    ExponentPair,
    MAXIMIZER_ANY,
    MAXIMIZER_RADIAL,
    MAXIMIZER_TANGENTIAL,
    c_infty_direction,
    c_infty_sup,
    i_direction_sweep,
    script_J,
    sup_I_closed,
    thm11_coefficient,
    classify_regime,
    CASE_BETWEEN,
    CASE_LOW,
    CASE_HIGH,
)

NS = (3, 4, 5)
ALPHAS = (-2.0, -1.0, 0.0, 0.5)
RADII = (0.0, 0.3, 0.6, 0.9)


def _radial(n, t):
    v = np.zeros(n)
    v[0] = t
    return BallPoint(v)


CRITERION_LINES: list[str] = []


def _report(num, label, ok, detail=""):
    tail = f" ({detail})" if detail else ""
    line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {label}{tail}"
    CRITERION_LINES.append(line)
    print("\n" + line)


def test_criterion_01_kernel_mass_oracle():
    start = time.perf_counter()
    worst = 0.0
    for n in NS:
        for al in ALPHAS:
            params = ProblemParams(n, al)
            cna = c_n_alpha(params)
            for t in RADII:
                closed = kernel_mass(params, _radial(n, t))

                def f(u, s=t, cna=cna, n=n, al=al):
                    return (cna * (1.0 - s * s) ** (1.0 - al)
                            * (1.0 + s * s - 2.0 * s * u) ** (-(n - al) / 2.0))

                worst = max(worst, abs(closed - reduce_zonal(n, f)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    _report(1, "kernel mass vs quadrature", ok,
            f"worst {worst:.2e}, {elapsed:.1f}s")
    assert worst <= 1e-8
    assert elapsed < 10.0


def test_criterion_02_alpha_harmonicity_decay():
    start = time.perf_counter()
    rng = np.random.default_rng(2025)
    bad = []
    for n in (3, 4):
        for al in (-1.0, 0.0, 0.5):
            params = ProblemParams(n, al)
            for family, phi in (("coordinate", BoundaryData.coordinate(0)),
                                ("linear", BoundaryData.linear(np.eye(n)))):

                def u(c, phi=phi, params=params):
                    return poisson_extend(phi, params, BallPoint(c))

                for _ in range(20):
                    v = rng.normal(size=n)
                    v /= np.linalg.norm(v)
                    x = BallPoint(v * 0.7 * rng.random() ** (1.0 / n))
                    r1 = float(np.abs(
                        alpha_laplacian_residual(u, params, x, 1e-3)).max())
                    r2 = float(np.abs(
                        alpha_laplacian_residual(u, params, x, 5e-4)).max())
                    if r1 <= 1e-8 and r2 <= 1e-8:
                        continue    # both at rounding level, ratio is noise
                    ratio = r1 / r2
                    if not 3.5 <= ratio <= 4.5:
                        bad.append(f"n={n} alpha={al:g} {family}: ratio {ratio:.2f}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30.0
    _report(2, "discrete D_alpha residual is second order", ok,
            f"{elapsed:.1f}s")
    assert bad == []
    assert elapsed < 30.0


def test_criterion_03_gradient_oracle():
    rng = np.random.default_rng(3)
    h, worst = 1e-5, 0.0
    for k in range(100):
        n, al = NS[k % 3], ALPHAS[k % 4]
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
                     - kernel_value(params, BallPoint(x.coords - e), zeta)) / (2 * h)
        worst = max(worst, float(np.linalg.norm(fd - grad)
                                 / max(np.linalg.norm(grad), 1.0)))
    ok = worst <= 1e-6
    _report(3, "kernel gradient vs central differences", ok, f"worst {worst:.2e}")
    assert worst <= 1e-6


def test_criterion_04_origin_coefficient_closed_form():
    worst = 0.0
    for n in NS:
        for al in ALPHAS:
            params = ProblemParams(n, al)
            for q in (1.0, 1.5, 2.0, 4.0):
                got = thm11_coefficient(params, ExponentPair.from_q(q),
                                        _radial(n, 0.0))
                want = (n - al) * c_n_alpha(params) * (
                    gamma_fn(n / 2.0) * gamma_fn((1.0 + q) / 2.0)
                    / (math.sqrt(math.pi) * gamma_fn((n + q) / 2.0))) ** (1.0 / q)
                worst = max(worst, abs(got - want) / want)
    ok = worst <= 1e-12
    _report(4, "origin coefficient closed form", ok, f"worst {worst:.2e}")
    assert worst <= 1e-12


def test_criterion_05_sup_closed_form_equals_sweep():
    start = time.perf_counter()
    params = ProblemParams(3, 0.0)
    betas = np.linspace(0.0, math.pi, 181)
    bad = []
    for qs in ("4/3", "2", "5/3", "3", "1"):
        frac = Fraction(qs)
        q = float(frac)
        for t in (0.3, 0.6, 0.9):
            bound, tag = sup_I_closed(params, q, t, frac)
            vals = i_direction_sweep(params, q, t, betas)
            brute = float(np.max(vals))
            gap = abs(bound.value - brute) / max(brute, 1e-300)
            if gap > 1e-6:
                bad.append(f"q={qs} t={t:g}: gap {gap:.2e}")
            peak = brute * (1.0 - 1e-9)
            if tag.maximizer == MAXIMIZER_TANGENTIAL:
                hit = vals[90] >= peak
            elif tag.maximizer == MAXIMIZER_RADIAL:
                hit = vals[0] >= peak or vals[180] >= peak
            else:
                hit = float(np.min(vals)) >= brute * (1.0 - 1e-6)
            if not hit:
                bad.append(f"q={qs} t={t:g}: maximizer {tag.maximizer}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60.0
    _report(5, "regime closed forms vs direction sweep", ok, f"{elapsed:.1f}s")
    assert bad == []
    assert elapsed < 60.0


def test_criterion_06_angular_monotonicity():
    combos = [
        (0.0, "4/3", 0.5, 0.6), (0.0, "2", 0.5, 0.6),
        (0.5, "8/5", 0.3, 0.4), (0.5, "12/5", 0.3, 0.4), (-1.0, "1", 0.6, 0.5),
        (0.0, "8/5", 0.5, 0.6), (0.5, "2", 0.4, 0.5),
        (-1.0, "5/4", 0.5, 0.7), (-1.0, "7/5", 0.2, 0.9),
        (0.0, "4", 0.5, 0.6), (0.0, "1", 0.7, 0.3), (0.5, "3", 0.5, 0.5),
    ]
    betas = np.linspace(0.0, math.pi / 2.0, 19)
    bad = []
    for al, qs, r, s in combos:
        params = ProblemParams(3, al)
        frac = Fraction(qs)
        case = classify_regime(params, float(frac), frac)
        vals = np.array([script_J(params, float(b), float(frac), r, s)
                         for b in betas])
        scale = float(np.abs(vals).max())
        diffs = np.diff(vals)
        if case in (CASE_LOW, CASE_HIGH):
            ok = float(np.abs(vals - vals[0]).max()) <= 1e-9 * scale
        elif case == CASE_BETWEEN:
            ok = float(diffs.min()) >= -1e-9 * scale
        else:
            ok = float(diffs.max()) <= 1e-9 * scale
        if not ok:
            bad.append(f"alpha={al:g} q={qs} r={r:g} s={s:g}: {case}")
    _report(6, "angular profile monotone by regime", not bad)
    assert bad == []


def test_criterion_07_directional_constant_closed_form():
    betas = np.linspace(0.0, math.pi, 181)
    bad = []
    for n in (3, 4):
        for al in (2.0 - n, 0.0, 0.5):
            params = ProblemParams(n, al)
            cna = c_n_alpha(params)
            for t in (0.3, 0.6, 0.9):
                x = _radial(n, t)
                closed = cna * (n - al + (n + al - 2.0) * t) / (1.0 - t) ** n
                vals = [c_infty_direction(params, x, UnitDirection.l_beta(b, n))
                        for b in betas]
                end = max(vals[0], vals[-1])
                top = max(vals)
                if (abs(end - closed) > 1e-6 * closed
                        or abs(top - closed) > 1e-6 * closed):
                    bad.append(f"n={n} alpha={al:g} t={t:g}: sweep {top:.6g} "
                               f"vs closed {closed:.6g}")
        for al in (2.0 - n - 1.0, 2.0 - n - 3.0):
            params = ProblemParams(n, al)
            for t in (0.3, 0.6, 0.9):
                x = _radial(n, t)
                bv = c_infty_sup(params, x)
                top = max(c_infty_direction(params, x, UnitDirection.l_beta(b, n))
                          for b in betas)
                if not bv.lower * (1 - 1e-9) <= top <= bv.upper * (1 + 1e-9):
                    bad.append(f"n={n} alpha={al:g} t={t:g}: sweep {top:.6g} "
                               f"outside [{bv.lower:.6g}, {bv.upper:.6g}]")
    _report(7, "L^1 directional constant closed form", not bad,
            f"{len(bad)} offending rows")
    assert bad == [], "sweep disagrees with the closed-form display:\n" \
        + "\n".join(bad)


def test_criterion_08_sharpness_at_origin():
    h, bad = 1e-3, []
    for n in (3, 4):
        for al in (-1.0, 0.0, 0.5):
            params = ProblemParams(n, al)
            phi = BoundaryData.signed(np.eye(n)[0])
            grad = np.zeros(n)
            for j in range(n):
                e = np.zeros(n)
                e[j] = h
                up = poisson_extend(phi, params, BallPoint(e))
                dn = poisson_extend(phi, params, BallPoint(-e))
                grad[j] = (up[0] - dn[0]) / (2.0 * h)
            coeff = thm11_coefficient(params, ExponentPair.from_q(1),
                                      _radial(n, 0.0))
            err = abs(float(np.linalg.norm(grad)) - coeff) / max(1.0, coeff)
            if err > 1e-4:
                bad.append(f"n={n} alpha={al:g}: err {err:.2e}")
    _report(8, "signed data attains the origin bound", not bad)
    assert bad == []


def test_criterion_09_landau_consistency():
    bad = []
    for n in (3, 4):
        for al in (-1.0, 0.0, 0.5):
            params = ProblemParams(n, al)
            prev_r0 = None
            for M in (1.0, 2.0, 4.0):
                res = landau_radius(params, M)
                label = f"n={n} alpha={al:g} M={M:g}"
                if abs(psi(params, M, res.r0)) > 1e-10:
                    bad.append(f"{label}: psi(r0) too large")
                g_at = G_fn(params, res.r0)
                rhs = (M / n_star(params, M)) ** (n - 1.0)
                if abs(M ** n * res.r0 * g_at - rhs) > 1e-10 * rhs:
                    bad.append(f"{label}: equation form")
                if abs(res.R0 - 0.5 * M * res.r0 ** 2 * g_at) > 1e-12 * res.R0:
                    bad.append(f"{label}: R0 identity")
                grid = np.arange(1, int(res.r0 * 10_000) + 1) / 10_000
                grid = grid[grid < res.r0]
                if not all(psi(params, M, float(r)) > 0.0 for r in grid):
                    bad.append(f"{label}: psi not positive left of r0")
                if prev_r0 is not None and not res.r0 < prev_r0:
                    bad.append(f"{label}: r0 not decreasing in M")
                prev_r0 = res.r0
    _report(9, "Landau radius solve consistency", not bad)
    assert bad == []


def test_criterion_10_univalence_witness():
    start = time.perf_counter()
    params = ProblemParams(3, 0.0)
    c = 3.0 / (3.0 * c_n_alpha(params))
    phi = BoundaryData.linear(c * np.eye(3))
    rep = verify_univalence(phi, params, M=c, pairs=10_000, seed=10)
    elapsed = time.perf_counter() - start
    ok = (rep.passed and rep.min_ratio > 0.0
          and rep.boundary_min >= rep.landau.R0 * (1.0 - 1e-6)
          and elapsed < 60.0)
    _report(10, "pair sampling finds no collision in B(r0)", ok,
            f"min ratio {rep.min_ratio:.3g}, {elapsed:.1f}s")
    assert rep.passed
    assert rep.min_ratio > 0.0
    assert rep.boundary_min >= rep.landau.R0 * (1.0 - 1e-6)
    assert elapsed < 60.0


def test_criterion_11_full_verify_exits_zero(capsys):
    start = time.perf_counter()
    code = cli_main(["verify", "--seed", "0", "--format", "csv"])
    elapsed = time.perf_counter() - start
    capsys.readouterr()    # drop the report from the captured stream
    ok = code == 0 and elapsed < 120.0
    _report(11, "verify battery exits 0 under 2 minutes", ok,
            f"exit {code}, {elapsed:.1f}s")
    assert elapsed < 120.0
    assert code == 0, "the verify battery reports the directional-constant " \
        "closed-form disagreement and exits 1"

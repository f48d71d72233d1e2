"""Sphere bound, code densities, the recursion objective and its minimiser,
and the recursive ASDS construction built from a sampled patched code.

Logarithms are natural throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .constructions import asds, asds_size_bound
from .hypercube import INF, Code, ball_size
from .patching import PatchSampleParams, rare_spec, sample_patched, tau, tau_asym, _up_ball
from .radius_norm import (
    PatchedCode,
    RadiusMismatchError,
    check_mode,
    is_normal,
    norm,
    radius,
)

_CONSTANT = {"symmetric": 4, "asymmetric": 3}


def sphere_bound(n: int, R: int) -> Fraction:
    if not 0 <= R <= n:
        raise ValueError(f"need 0 <= R <= n, got R={R}, n={n}")
    return Fraction(1 << n, ball_size(n, R))


def density_denominator(n: int, R: int, mode: str = "symmetric") -> Fraction:
    """2^n / binom(n, <=R), or 2^n / binom(floor(n/2), <=R) for asymmetric codes."""
    check_mode(mode)
    ball = ball_size(n, R) if mode == "symmetric" else ball_size(n // 2, R)
    return Fraction(1 << n, ball)


@dataclass(frozen=True)
class DensityReport:
    n: int
    R: int
    mode: str
    code_size: int
    denominator: Fraction
    density: Fraction

    def as_dict(self) -> dict:
        return {"n": self.n, "R": self.R, "mode": self.mode, "code_size": self.code_size,
                "denominator": float(self.denominator), "density": float(self.density)}


def density(C: Code, R: int, mode: str = "symmetric") -> DensityReport:
    """Density of C as an (n, R) code; R must be C's covering radius in ``mode``."""
    check_mode(mode)
    computed = radius(C, mode)
    if computed != R:
        raise RadiusMismatchError(R, computed, mode)
    denom = density_denominator(C.length, R, mode)
    return DensityReport(C.length, R, mode, len(C), denom, len(C) / denom)


# --- the recursion objective ----------------------------------------------------------

def _log_tail(x: float, R: int, c: int) -> float:
    """log(c e^-x R^R), kept in log space so large R does not overflow."""
    return math.log(c) - x + R * math.log(R)


def f_objective(x: float, R: int, mode: str = "symmetric") -> float:
    """e x / (1 - c e^-x R^R) with c = 4 (symmetric) or 3 (asymmetric)."""
    c = _CONSTANT[check_mode(mode)]
    denom = 1.0 - math.exp(_log_tail(x, R, c))
    if denom <= 0:
        raise ValueError(f"f is only defined where {c} e^-x R^R < 1; at x={x}, R={R} it is {1 - denom:.6g}")
    return math.e * x / denom


def root_residual(x: float, R: int, mode: str = "symmetric") -> float:
    c = _CONSTANT[check_mode(mode)]
    return 1.0 - (1.0 + x) * math.exp(_log_tail(x, R, c))


def x_guess(R: int) -> float:
    """R ln R + ln R + ln ln R + 3, which lies above the root for R >= 2."""
    return R * math.log(R) + math.log(R) + math.log(math.log(R)) + 3


class RootNotFound(ArithmeticError):
    pass


def x0_root(R: int, mode: str = "symmetric", tol: float = 1e-12) -> float:
    """Positive root of 1 - c(1+x)e^-x R^R, where f attains its minimum.

    The residual is increasing on x > 0 and negative at 0, so bisection on a
    bracket found by doubling always converges; Newton steps then polish.
    """
    if R < 2:
        raise ValueError("the bound calculus needs R >= 2")
    g = lambda x: root_residual(x, R, mode)  # noqa: E731
    lo, hi = 0.0, max(1.0, x_guess(R))
    while g(hi) <= 0:
        lo, hi = hi, 2 * hi
        if hi > 1e6:
            raise RootNotFound(f"no sign change up to x={hi} (R={R}, {mode})")
    if g(lo) > 0:
        raise RootNotFound(f"residual already positive at x={lo} (R={R}, {mode})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-10:
            break
    x = 0.5 * (lo + hi)
    c = _CONSTANT[mode]
    for _ in range(20):
        r = g(x)
        if abs(r) < tol:
            break
        # d/dx of the residual is x c e^-x R^R
        slope = x * math.exp(_log_tail(x, R, c))
        step = x - r / slope
        x = step if lo <= step <= hi else x
        if lo <= step <= hi and abs(g(step)) >= abs(r):
            break
    if abs(g(x)) >= max(tol, 1e-9):
        raise RootNotFound(f"residual {g(x):.3g} at x={x} after refinement (bracket [{lo}, {hi}])")
    return x


def closed_form_bound(R: int) -> float:
    """e (R ln R + ln R + ln ln R + 4)."""
    return math.e * (R * math.log(R) + math.log(R) + math.log(math.log(R)) + 4)


@dataclass(frozen=True)
class BoundReport:
    R: int
    mode: str
    x0: float
    f_at_x0: float
    closed_form: float
    residual: float
    identity_gap: float
    a_limit: float
    b_limit: float

    @property
    def e_x0_plus_1(self) -> float:
        return math.e * (self.x0 + 1)

    def as_dict(self) -> dict:
        return {"R": self.R, "mode": self.mode, "x0": self.x0, "f_at_x0": self.f_at_x0,
                "e_x0_plus_1": self.e_x0_plus_1, "closed_form": self.closed_form,
                "residual": self.residual, "identity_gap": self.identity_gap,
                "a_limit": self.a_limit, "b_limit": self.b_limit}


def recursion_limits(x: float, R: int, mode: str = "symmetric") -> tuple[float, float]:
    """Large-n limits of the recursion coefficients: x (R/(R-1))^(R-1) and c R^R e^-x."""
    c = _CONSTANT[check_mode(mode)]
    return x * (R / (R - 1)) ** (R - 1), math.exp(_log_tail(x, R, c))


def theorem_bound(R: int, mode: str = "symmetric") -> BoundReport:
    x0 = x0_root(R, mode)
    c = _CONSTANT[mode]
    closed = closed_form_bound(R)
    f0 = f_objective(x0, R, mode)
    if math.e * (x0 + 1) > closed:
        raise AssertionError(f"e(x0+1) = {math.e * (x0 + 1)} exceeds the closed form {closed} at R={R}")
    gap = abs(math.exp(_log_tail(x0, R, c)) - 1 / (1 + x0))
    a_lim, b_lim = recursion_limits(x0, R, mode)
    return BoundReport(R, mode, x0, f0, closed, abs(root_residual(x0, R, mode)), gap, a_lim, b_lim)


def recursion_coefficients(n: int, R: int, x: float, mode: str = "symmetric") -> tuple[float, float]:
    """Finite-n recursion coefficients (a_n, b_n) of the recursive construction.

    Their limits are given by :func:`recursion_limits`; this is a diagnostic
    for watching the convergence, nothing depends on it.
    """
    check_mode(mode)
    n1 = n // R
    n1p = n - n1 + 1
    if mode == "symmetric":
        s_den = ball_size(n1p - 1, R - 1) + ball_size(n1p - 1, R - 2)
        scale = Fraction(ball_size(n, R), ball_size(n1, R)) / (1 << (n - n1))
        a = Fraction(1, 2) * Fraction(x) * (1 << n1p) / s_den * Fraction(ball_size(n1, R), ball_size(n1, 1)) * scale
        b = 0.5 * float(scale) * tau(n1p, 2 * R - 1, x)
    else:
        hi = rare_spec(n1p, R - 1).hi
        s_den = _up_ball(n1p - 1, hi, R - 1) + _up_ball(n1p - 1, hi, R - 2)
        scale = Fraction(ball_size(n // 2, R), ball_size(n1 // 2, R)) / (1 << (n - n1))
        a = (Fraction(1, 2) * Fraction(x) * (1 << n1p) / s_den
             * Fraction(ball_size(n1 // 2, R), ball_size(n1 // 2, 1)) * scale)
        b = 0.5 * float(scale) * tau_asym(n1p, 2 * R - 1, R - 1, x)
    return float(a), b


# --- recursive construction -----------------------------------------------------------------

@dataclass
class RecursiveBuild:
    code: Code
    patched: PatchedCode
    K1: Code
    K2: Code
    n1: int
    n1_prime: int
    k: int
    size_bound: int
    radius: int
    normal: bool
    glue_norm: int
    report: DensityReport
    seed: int
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "n": self.code.length, "mode": self.patched.mode, "seed": self.seed,
            "n1": self.n1, "n1_prime": self.n1_prime, "k": self.k,
            "S_size": len(self.patched.S), "T_size": len(self.patched.T),
            "K1_size": len(self.K1), "K2_size": len(self.K2),
            "code_size": len(self.code), "size_bound": self.size_bound,
            "radius": self.radius, "glue_coordinate": self.n1_prime, "glue_norm": self.glue_norm,
            "normal": self.normal, "density": self.report.as_dict(),
        }


def recursive_construct(n: int, R: int, x: float, mode: str = "symmetric", seed: int = 0,
                        K1: Code | None = None, K2: Code | None = None,
                        saturate: bool | None = None, search_budget: int | None = None) -> RecursiveBuild:
    """One level of the recursive ASDS construction at length n and radius R.

    Splits n into n1 = floor(n/R) and n1' = n - n1 + 1, samples a balanced
    norm-(2R-1) patched code of length n1', and glues it to a normal (n1, 1)
    code K1 and a normal (n1, R) code K2, both with coordinate 1 acceptable.
    When K1/K2 are omitted they come from the exhaustive search in
    :mod:`covercraft.oracle`.

    ``saturate`` defaults to True in asymmetric mode, where at practical
    lengths the sample-size formula always exceeds the half-cube.
    """
    check_mode(mode)
    if not n >= R >= 2:
        raise ValueError(f"need n >= R >= 2, got n={n}, R={R}")
    n1 = n // R
    n1p = n - n1 + 1
    if K1 is None or K2 is None:
        from .oracle import acceptable_first_code

        kwargs = {} if search_budget is None else {"budget": search_budget}
        K1 = K1 if K1 is not None else acceptable_first_code(n1, 1, mode, **kwargs)
        K2 = K2 if K2 is not None else acceptable_first_code(n1, R, mode, **kwargs)
    if K1.length != n1 or K2.length != n1:
        raise ValueError(f"K1 and K2 must have length n1 = {n1}")
    if saturate is None:
        saturate = mode == "asymmetric"
    params = PatchSampleParams(n1p, 2 * R - 1, x, R=R - 1 if mode == "asymmetric" else None,
                               seed=seed, mode=mode, saturate=saturate)
    P = sample_patched(params)
    C = asds(P, K1, K2, strict=True, norm_k1=3)
    r = radius(C, mode)
    if r == INF or r > R:
        raise AssertionError(f"constructed code has {mode} radius {r} > {R}")
    glue = norm(C, n1p, mode)
    return RecursiveBuild(C, P, K1, K2, n1, n1p, params.k, asds_size_bound(P, K1, K2), r,
                          is_normal(C, r, mode), glue, density(C, r, mode), seed)

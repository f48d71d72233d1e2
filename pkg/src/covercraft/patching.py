"""Random selection of balanced norm-patched codes and the patch-size bounds.

The sampler draws S_0 and S_1 as uniform k-subsets of the two halves of Q_n
split by the last coordinate, then collects into T every word that the random
S fails to serve, together with its partner across the last coordinate.

``tau`` and ``tau_asym`` are closed-form upper bounds on E|T| for the
symmetric and asymmetric samplers respectively.
"""
from __future__ import annotations

import math
import statistics
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypercube import (
    Code,
    _popcounts,
    asym_distance_field,
    ball_size,
    distance_field,
    require_exhaustive,
)
from .radius_norm import PatchedCode, check_mode


# --- rare vectors ------------------------------------------------------------------

@dataclass(frozen=True)
class RareSpec:
    n: int
    R: int
    hi: int
    lo: int


def rare_spec(n: int, R: int) -> RareSpec:
    """Weight window [lo, hi] around n/2 of half-width sqrt(2(R+1) n ln n)."""
    if n < 2:
        raise ValueError("rare thresholds need n >= 2")
    if R < 0:
        raise ValueError("R must be nonnegative")
    spread = math.sqrt(2 * (R + 1) * n * math.log(n))
    hi = min(n, math.floor((n + spread) / 2))
    lo = max(0, math.ceil((n - spread) / 2))
    return RareSpec(n, R, hi, lo)


def rare_count(n: int, R: int) -> int:
    spec = rare_spec(n, R)
    return (sum(math.comb(n, w) for w in range(spec.lo))
            + sum(math.comb(n, w) for w in range(spec.hi + 1, n + 1)))


def rare_bound(n: int, R: int) -> float:
    """Two-tailed Chernoff bound 2^(n+1) n^(-R-1) on the number of rare words."""
    return math.ldexp(float(n) ** (-R - 1), n + 1)


def _rare_mask(n: int, R: int) -> np.ndarray:
    spec = rare_spec(n, R)
    w = _popcounts(n)
    return (w < spec.lo) | (w > spec.hi)


def rare_set(n: int, R: int) -> Code:
    require_exhaustive(n, "rare-set enumeration")
    return Code(n, frozenset(np.nonzero(_rare_mask(n, R))[0].tolist()))


# --- sample size k and the tau bounds --------------------------------------------------

def _check_params(n: int, N: int, x: float) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if not 1 <= N <= n:
        raise ValueError(f"need 1 <= N <= n, got N={N}, n={n}")
    if not x > 0:
        raise ValueError("x must be positive")


def _up_ball(n: int, l: int, r: int) -> int:
    """b⁺_n(l, r) with the centre weight clamped into 0..n.

    The rare threshold hi(n, R) can equal n, one more than any weight in the
    (n-1)-cube the bounds live in; the clamp reads that as the heaviest word.
    """
    return ball_size(n - min(max(l, 0), n), r)


def _ball_fn(n: int, mode: str, R: int | None):
    """Ball-size function b(r) on Q_{n-1} used by k and tau in ``mode``."""
    if mode == "symmetric":
        return lambda r: ball_size(n - 1, r)
    if R is None:
        raise ValueError("asymmetric mode needs the radius R for the rare thresholds")
    hi = rare_spec(n, R).hi
    return lambda r: _up_ball(n - 1, hi, r)


def _k_denominator(b, N: int) -> int:
    return b((N - 1) // 2) + b(N // 2 - 1)


def k_value(n: int, N: int, x: float, mode: str = "symmetric", R: int | None = None,
            saturate: bool = False) -> int:
    """floor(x 2^(n-1) / (b((N-1)/2 rounded down) + b((N-1)/2 rounded up - 1))).

    The quotient can exceed the half-cube size 2^(n-1); that raises unless
    ``saturate`` is set, in which case the whole half-cube is taken.
    """
    check_mode(mode)
    _check_params(n, N, x)
    D = _k_denominator(_ball_fn(n, mode, R), N)
    half_cube = 1 << (n - 1)
    k = math.floor(Fraction(x) * half_cube / D)
    if k > half_cube:
        if saturate:
            return half_cube
        raise ValueError(f"k = {k} exceeds the half-cube size {half_cube} (n={n}, N={N}, x={x}, {mode})")
    return k


def _scaled(total: float, exponent: int) -> float:
    try:
        return math.ldexp(total, exponent)
    except OverflowError:
        warnings.warn(f"bound overflows a double at 2^{exponent}; returning inf", RuntimeWarning)
        return math.inf


def _term(x: float, d: int, D: int, corr: int, M: int) -> float:
    return math.exp(-x * (d / D) + corr / M)


def tau(n: int, N: int, x: float) -> float:
    """Upper bound on E|T| for the symmetric sampler at length n, norm N, density x."""
    _check_params(n, N, x)
    b = _ball_fn(n, "symmetric", None)
    D = _k_denominator(b, N)
    M = 1 << (n - 1)
    total = 0.0
    for i in range(N):
        d = b(i - 1) + b(N - i - 1)
        total += _term(x, d, D, d, M)
    total += _term(x, b(N - 1), D, b(N - 1), M)
    return _scaled(total, n + 1)


def tau_asym(n: int, N: int, R: int, x: float) -> float:
    """Upper bound on E|T| for the asymmetric sampler.

    The rare-word term is taken as its Chernoff bound 2^(n+1) n^(-R-1).
    Ball sizes are upward balls in Q_{n-1} centred at weight hi(n, R) (or
    hi(n, R) - 1 for the last term), with the same correction terms as the
    closed form they implement.
    """
    _check_params(n, N, x)
    if R < 1:
        raise ValueError("asymmetric bound needs R >= 1")
    hi = rare_spec(n, R).hi
    b = lambda r: _up_ball(n - 1, hi, r)  # noqa: E731
    b_low = _up_ball(n - 1, hi - 1, (N - 1) // 2)
    D = _k_denominator(b, N)
    M = 1 << (n - 1)
    bracket = 0.0
    for i in range(N):
        d = b(i - 1) + b(N - i - 1)
        bracket += _term(x, d, D, d, M)
    bracket += _term(x, b(N - 1), D, b_low, M)
    bracket += _term(x, b_low, D, b_low, M)
    return rare_bound(n, R) + _scaled(bracket, n)


def tau_limit(n: int, N: int, x: float, mode: str = "symmetric") -> float:
    """Large-n form of the bounds: 2^(n+2)e^-x / 2^(n+1)e^-x (symmetric, N odd/even),
    3·2^n e^-x / 2^n(e^-x + e^-x/2) (asymmetric)."""
    check_mode(mode)
    if mode == "symmetric":
        return _scaled(math.exp(-x), n + 2 if N % 2 else n + 1)
    if N % 2:
        return _scaled(3 * math.exp(-x), n)
    return _scaled(math.exp(-x) + math.exp(-x / 2), n)


def s_size_limit(n: int, N: int, x: float, mode: str = "symmetric") -> float:
    """Large-n form of |S| = 2k."""
    check_mode(mode)
    if mode == "symmetric":
        if N % 2:
            return x * 2.0 ** n / ball_size(n - 1, (N - 1) // 2)
        return x * 2.0 ** (n - 1) / ball_size(n - 1, N // 2 - 1)
    R = N // 2
    if N % 2:
        return x * 2.0 ** n / ((n / 2) ** R / math.factorial(R))
    return x * 2.0 ** (n - 1) / ((n / 2) ** (R - 1) / math.factorial(R - 1))


# --- sampling ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PatchSampleParams:
    n: int
    N: int
    x: float
    R: int | None = None
    seed: int = 0
    mode: str = "symmetric"
    saturate: bool = False

    def __post_init__(self) -> None:
        check_mode(self.mode)
        _check_params(self.n, self.N, self.x)
        if self.mode == "asymmetric" and (self.R is None or self.R < 1):
            raise ValueError("asymmetric sampling needs R >= 1")
        if self.n < 2:
            raise ValueError("sampling needs n >= 2")

    @property
    def k(self) -> int:
        return k_value(self.n, self.N, self.x, self.mode, self.R, self.saturate)

    def reference_bound(self) -> float:
        if self.mode == "symmetric":
            return tau(self.n, self.N, self.x)
        return tau_asym(self.n, self.N, self.R, self.x)


def make_rng(seed: int, trial: int | None = None) -> np.random.Generator:
    """PCG64 stream for ``seed``, or for the pair (seed, trial) in batch runs."""
    entropy = seed if trial is None else [seed, trial]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def sample_indices(M: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform k-subset of range(M) by a partial Fisher-Yates shuffle."""
    pool = np.arange(M, dtype=np.int64)
    for j in range(k):
        r = int(rng.integers(j, M))
        pool[j], pool[r] = pool[r], pool[j]
    return np.sort(pool[:k])


def _mask_to_code(n: int, mask: np.ndarray) -> Code:
    return Code(n, frozenset(np.nonzero(mask)[0].tolist()))


def sample_patched(params: PatchSampleParams, rng: np.random.Generator | None = None) -> PatchedCode:
    """Draw one balanced norm-N patched code with acceptable coordinate n."""
    n, N = params.n, params.N
    require_exhaustive(n, "patched-code sampling")
    if rng is None:
        rng = make_rng(params.seed)
    k = params.k
    M = 1 << (n - 1)
    # coordinate n is the lowest bit
    s0 = sample_indices(M, k, rng) << 1
    s1 = (sample_indices(M, k, rng) << 1) | 1
    S0, S1 = Code(n, frozenset(s0.tolist())), Code(n, frozenset(s1.tolist()))
    low = (np.arange(1 << n) & 1) == 0

    if params.mode == "symmetric":
        d0, d1 = distance_field(S0), distance_field(S1)
        own = np.where(low, d0, d1)
        other = np.where(low, d1, d0)
        bad = ((own < N) & (other > N - own)) | (own >= N)
        extra = np.zeros_like(bad)
    else:
        d0, d1 = asym_distance_field(S0), asym_distance_field(S1)
        rare = _rare_mask(n, params.R)
        bad_low = low & ~rare & (((d0 < N) & (d1 > N - d0)) | (d0 >= N))
        bad_high = ~low & ~rare & (2 * d1 + 1 > N)
        bad = bad_low | bad_high
        # a rare word missed in the lower half also needs its partner in T
        missed_rare_low = low & rare & (d0 + d1 > N)
        extra = rare | missed_rare_low | missed_rare_low[np.arange(1 << n) ^ 1]

    partners = bad[np.arange(1 << n) ^ 1]
    T = _mask_to_code(n, bad | partners | extra)
    return PatchedCode(S0.union(S1), T, coordinate=n, target_norm=N, mode=params.mode)


@dataclass(frozen=True)
class PatchEstimate:
    params: PatchSampleParams
    trials: int
    k: int
    patch_sizes: tuple[int, ...]
    mean: float
    deviation: float
    max: int
    reference: float

    @property
    def standard_error(self) -> float:
        return self.deviation / math.sqrt(self.trials)

    def as_dict(self) -> dict:
        return {
            "n": self.params.n, "N": self.params.N, "x": self.params.x, "R": self.params.R,
            "mode": self.params.mode, "seed": self.params.seed, "trials": self.trials,
            "k": self.k, "S_size": 2 * self.k,
            "mean_T": self.mean, "deviation_T": self.deviation, "max_T": self.max,
            "standard_error": self.standard_error, "tau": self.reference,
        }


def estimate_patch(params: PatchSampleParams, trials: int, workers: int = 1) -> PatchEstimate:
    """Monte Carlo estimate of |T|; trial t uses the stream for (seed, t).

    Results do not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")

    def one(t: int) -> int:
        return len(sample_patched(params, make_rng(params.seed, t)).T)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sizes = tuple(pool.map(one, range(trials)))
    else:
        sizes = tuple(one(t) for t in range(trials))
    dev = statistics.stdev(sizes) if trials > 1 else 0.0
    return PatchEstimate(params, trials, params.k, sizes, statistics.fmean(sizes), dev,
                         max(sizes), params.reference_bound())

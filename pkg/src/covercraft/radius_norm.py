"""Covering radii, symmetric and asymmetric norms, normality and patched-code checks.

Every quantity here is a maximum over all of Q_n, so each call costs a few
2^n-sized BFS sweeps (see :func:`covercraft.hypercube.distance_field`) and is
subject to the exhaustive length limit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypercube import (
    INF,
    UNREACHED,
    Code,
    ExtendedNat,
    Word,
    asym_distance_field,
    distance_field,
    half,
    to_extended,
)

MODES = ("symmetric", "asymmetric")


class RadiusMismatchError(ValueError):
    """A caller-supplied radius disagrees with the computed covering radius."""

    def __init__(self, supplied: int, computed: ExtendedNat, mode: str):
        self.supplied = supplied
        self.computed = computed
        self.mode = mode
        super().__init__(f"supplied {mode} radius {supplied} but the code has radius {computed}")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _check_coordinate(C: Code, i: int) -> None:
    if not 1 <= i <= C.length:
        raise ValueError(f"coordinate {i} out of range 1..{C.length}")


def _coordinate_mask(n: int, i: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return (idx >> (n - i)) & 1 == 1


def _field_max(values: np.ndarray) -> ExtendedNat:
    if values.size == 0:
        return 0
    return to_extended(int(values.max()))


# --- covering radius -----------------------------------------------------------

def covering_radius(C: Code) -> ExtendedNat:
    if not C.values:
        return INF
    return _field_max(distance_field(C))


def asym_covering_radius(C: Code) -> ExtendedNat:
    return _field_max(asym_distance_field(C))


def radius(C: Code, mode: str = "symmetric") -> ExtendedNat:
    check_mode(mode)
    return covering_radius(C) if mode == "symmetric" else asym_covering_radius(C)


# --- norms -----------------------------------------------------------------------

def _norm_field(C: Code, i: int, mode: str) -> np.ndarray:
    """Per-word norm contribution at coordinate i, saturated at UNREACHED."""
    _check_coordinate(C, i)
    c0, c1 = half(C, i, 0), half(C, i, 1)
    if mode == "symmetric":
        total = distance_field(c0) + distance_field(c1)
    else:
        d0, d1 = asym_distance_field(c0), asym_distance_field(c1)
        upper = _coordinate_mask(C.length, i)
        total = np.where(upper, 2 * d1 + 1, d0 + d1)
    return np.minimum(total, UNREACHED)


def norm_at(C: Code, i: int) -> ExtendedNat:
    """Symmetric norm N^(i): max over x of d(x, C_0^(i)) + d(x, C_1^(i))."""
    return _field_max(_norm_field(C, i, "symmetric"))


def asym_norm_at(C: Code, i: int) -> ExtendedNat:
    """Asymmetric norm at coordinate i.

    Words with x_i = 0 score d⁺(x, C_0) + d⁺(x, C_1); words with x_i = 1 can
    only be dominated from C_1 and score 2·d⁺(x, C_1) + 1.
    """
    return _field_max(_norm_field(C, i, "asymmetric"))


def norm(C: Code, i: int, mode: str = "symmetric") -> ExtendedNat:
    check_mode(mode)
    return norm_at(C, i) if mode == "symmetric" else asym_norm_at(C, i)


@dataclass(frozen=True)
class NormReport:
    mode: str
    per_coordinate: dict[int, ExtendedNat]
    min_norm: ExtendedNat
    acceptable: frozenset[int]
    threshold: ExtendedNat

    def as_dict(self) -> dict:
        from .serialize import ext

        return {
            "mode": self.mode,
            "norms": {str(i): ext(v) for i, v in sorted(self.per_coordinate.items())},
            "min_norm": ext(self.min_norm),
            "acceptable": sorted(self.acceptable),
            "threshold": ext(self.threshold),
        }


def norm_report(C: Code, mode: str = "symmetric", threshold: ExtendedNat | None = None) -> NormReport:
    """Norms at every coordinate, their minimum, and the coordinates at or below ``threshold``.

    Without an explicit threshold, acceptability is judged against 2R+1 for
    the code's own covering radius R.
    """
    check_mode(mode)
    if threshold is None:
        r = radius(C, mode)
        threshold = 2 * r + 1 if r != INF else INF
    per = {i: norm(C, i, mode) for i in range(1, C.length + 1)}
    min_norm = min(per.values())
    acceptable = frozenset(i for i, v in per.items() if v != INF and v <= threshold)
    return NormReport(mode, per, min_norm, acceptable, threshold)


def is_normal(C: Code, R: int, mode: str = "symmetric") -> bool:
    """True iff the minimum norm is 2R or 2R+1.

    ``R`` must equal the code's covering radius in ``mode``; a disagreement
    raises :class:`RadiusMismatchError` instead of being silently corrected.
    """
    computed = radius(C, mode)
    if computed != R:
        raise RadiusMismatchError(R, computed, mode)
    min_norm = min(norm(C, i, mode) for i in range(1, C.length + 1))
    return min_norm in (2 * R, 2 * R + 1)


def is_balanced(C: Code, i: int) -> bool:
    _check_coordinate(C, i)
    return len(half(C, i, 0)) == len(half(C, i, 1))


# --- norm-patched codes ------------------------------------------------------------

@dataclass(frozen=True)
class PatchedCode:
    S: Code
    T: Code
    coordinate: int
    target_norm: int
    mode: str = "symmetric"

    def __post_init__(self) -> None:
        check_mode(self.mode)
        if self.S.length != self.T.length:
            raise ValueError("S and T must have equal lengths")
        if not 1 <= self.coordinate <= self.S.length:
            raise ValueError(f"coordinate {self.coordinate} out of range 1..{self.S.length}")

    @property
    def length(self) -> int:
        return self.S.length


def _missed_mask(S: Code, i: int, N: int, mode: str) -> np.ndarray:
    return _norm_field(S, i, mode) > N


def missed_vectors(S: Code, i: int, N: int, mode: str = "symmetric") -> Code:
    check_mode(mode)
    idx = np.nonzero(_missed_mask(S, i, N, mode))[0]
    return Code(S.length, frozenset(idx.tolist()))


@dataclass
class PatchCheck:
    valid: bool
    violations: list[Word] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def check_norm_patched(P: PatchedCode) -> PatchCheck:
    """Validate (S, T) against the patched-code conditions at ``P.coordinate``.

    Violations come back in lexicographic order.
    """
    n, i = P.length, P.coordinate
    missed = _missed_mask(P.S, i, P.target_norm, P.mode)
    in_t = np.zeros(1 << n, dtype=bool)
    if P.T.values:
        in_t[np.fromiter(P.T.values, dtype=np.int64)] = True
    partner = np.arange(1 << n, dtype=np.int64) ^ (1 << (n - i))
    pair_in_t = in_t & in_t[partner]
    if P.mode == "symmetric":
        absorbed = pair_in_t
    else:
        upper = _coordinate_mask(n, i)
        absorbed = np.where(upper, in_t, pair_in_t)
    bad = np.nonzero(missed & ~absorbed)[0]
    return PatchCheck(bad.size == 0, [Word(n, int(v)) for v in bad])

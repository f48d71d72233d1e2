"""Direct sum, amalgamated direct sum (ADS) and amalgamated semi-direct sum (ASDS).

The glue coordinates are fixed: the last coordinate of the left operand and
the first coordinate of the right one. Use :func:`covercraft.hypercube.move_coordinate`
to bring a different acceptable coordinate into place first.

Strict mode checks the theorem hypotheses by exhaustive norm computation
before building anything, and re-checks the promised glue norm afterwards
when the result is short enough (``POSTCHECK_MAX_LENGTH``).
"""
from __future__ import annotations

from .hypercube import INF, Code, ExtendedNat, half
from .radius_norm import PatchedCode, check_mode, check_norm_patched, norm, radius

POSTCHECK_MAX_LENGTH = 16


class HypothesisError(ValueError):
    """An operand fails a hypothesis of the construction it was passed to."""


def direct_sum(A: Code, B: Code) -> Code:
    if not A.values or not B.values:
        raise ValueError("direct sum needs nonempty operands")
    shift = B.length
    return Code(A.length + B.length, frozenset((a << shift) | b for a in A.values for b in B.values))


def _glue(A: Code, B: Code) -> Code:
    """{(a, c, b) : (a, c) in A, (c, b) in B}, overlapping A's last and B's first coordinate."""
    nb = B.length - 1
    tail = (1 << nb) - 1
    a0 = [a for a in A.values if not a & 1]
    a1 = [a for a in A.values if a & 1]
    b0 = [b & tail for b in B.values if not b >> nb]
    b1 = [b & tail for b in B.values if b >> nb]
    words = {(a << nb) | b for a in a0 for b in b0}
    words.update((a << nb) | b for a in a1 for b in b1)
    return Code(A.length + nb, frozenset(words))


def ads_size(A: Code, B: Code) -> int:
    return (len(half(A, A.length, 0)) * len(half(B, 1, 0))
            + len(half(A, A.length, 1)) * len(half(B, 1, 1)))


def _acceptable_norm(C: Code, i: int, mode: str, declared: ExtendedNat | None, label: str) -> ExtendedNat:
    value = norm(C, i, mode)
    r = radius(C, mode)
    if value == INF or r == INF or value > 2 * r + 1:
        raise HypothesisError(
            f"{label}: coordinate {i} is not acceptable ({mode} norm {value}, radius {r}, need <= 2R+1)"
        )
    if declared is not None and value > declared:
        raise HypothesisError(f"{label}: {mode} norm at coordinate {i} is {value} > declared {declared}")
    return value if declared is None else declared


def _postcheck(C: Code, i: int, mode: str, bound: ExtendedNat, what: str) -> None:
    if C.length > POSTCHECK_MAX_LENGTH or not C.values:
        return
    got = norm(C, i, mode)
    if got > bound:
        raise AssertionError(f"{what}: norm {got} at coordinate {i} exceeds {bound}")


def ads(A: Code, B: Code, mode: str = "symmetric", strict: bool = True,
        norm_a: int | None = None, norm_b: int | None = None) -> Code:
    """Amalgamated direct sum A ⊕̇ B; the glue ends up at coordinate ``A.length``.

    In strict mode A's last and B's first coordinate must be acceptable
    (norm at most 2R+1 for the operand's own radius, and at most the declared
    norm if one is given). The result then has norm at most N_A + N_B - 1 at
    the glue coordinate.
    """
    check_mode(mode)
    if A.length < 1 or B.length < 1:
        raise ValueError("operands must have positive length")
    if strict:
        na = _acceptable_norm(A, A.length, mode, norm_a, "left operand")
        nb = _acceptable_norm(B, 1, mode, norm_b, "right operand")
    C = _glue(A, B)
    if strict:
        _postcheck(C, A.length, mode, na + nb - 1, "ADS")
    return C


def asds(P: PatchedCode, K1: Code, K2: Code, strict: bool = True,
         norm_k1: int | None = None) -> Code:
    """Amalgamated semi-direct sum (S ⊕̇ K1) ∪ (T ⊕̇ K2), deduplicated.

    Hypotheses (checked in strict mode, all in ``P.mode``): (S, T) is a valid
    norm-N patched code at its last coordinate; K1 has finite norm N' at its
    first coordinate (N' is ``norm_k1`` when given, which must then bound the
    computed norm); K2 has norm at most N + N' - 1 at its first coordinate.
    The result has norm at most N + N' - 1 at coordinate ``P.length``.
    """
    mode = P.mode
    n = P.length
    if K1.length != K2.length:
        raise ValueError("K1 and K2 must have equal lengths")
    if strict:
        if P.coordinate != n:
            raise HypothesisError(f"patched code must use its last coordinate {n}, not {P.coordinate}")
        check = check_norm_patched(P)
        if not check:
            raise HypothesisError(
                f"(S, T) is not norm {P.target_norm}-patched: {len(check.violations)} violating words, "
                f"first {check.violations[0]}"
            )
        n1 = norm(K1, 1, mode)
        if n1 == INF:
            raise HypothesisError(f"K1 has infinite {mode} norm at coordinate 1")
        if norm_k1 is not None:
            if n1 > norm_k1:
                raise HypothesisError(f"K1 has {mode} norm {n1} at coordinate 1 > declared {norm_k1}")
            n1 = norm_k1
        bound = P.target_norm + n1 - 1
        n2 = norm(K2, 1, mode)
        if n2 > bound:
            raise HypothesisError(f"K2 has {mode} norm {n2} at coordinate 1 > N + N' - 1 = {bound}")
    C = _glue(P.S, K1).union(_glue(P.T, K2))
    if strict:
        _postcheck(C, n, mode, bound, "ASDS")
    return C


def asds_size_bound(P: PatchedCode, K1: Code, K2: Code) -> int:
    """Size before deduplication; equals |S||K1|/2 + |T||K2|/2 when S and T are balanced."""
    return ads_size(P.S, K1) + ads_size(P.T, K2)

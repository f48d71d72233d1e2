import random

import pytest

import generators
from covercraft.constructions import (
    HypothesisError,
    ads,
    ads_size,
    asds,
    asds_size_bound,
    direct_sum,
)
from covercraft.density import density
from covercraft.hypercube import Code
from covercraft.radius_norm import (
    PatchedCode,
    asym_covering_radius,
    covering_radius,
    is_balanced,
    is_normal,
    norm,
    norm_at,
    radius,
)


def code(*ws, n=None):
    return Code.from_words(ws, n)


REP3 = code("000", "111")


def test_direct_sum_examples():
    C = direct_sum(REP3, REP3)
    assert C.length == 6 and len(C) == 4
    assert covering_radius(C) == 2
    B = code("0110", "1011", "0000")
    assert direct_sum(code("0"), B).strings() == ["0" + w for w in B.strings()]


def test_direct_sum_with_one_bit_codes():
    B = code("0110", "1011", "0000", "1101")
    # Q_1 has radius 0 and keeps B's radius; {0} has radius 1 and adds it
    assert covering_radius(direct_sum(Code.full(1), B)) == covering_radius(B)
    assert covering_radius(direct_sum(code("0"), B)) == covering_radius(B) + 1


def test_direct_sum_rejects_empty():
    with pytest.raises(ValueError):
        direct_sum(Code.empty(2), REP3)


def test_direct_sum_radius_subadditive_exhaustive():
    rng = random.Random(3)
    for _ in range(150):
        na, nb = rng.randint(1, 5), rng.randint(1, 5)
        A, B = generators.random_code(rng, na, 8), generators.random_code(rng, nb, 8)
        C = direct_sum(A, B)
        assert len(C) == len(A) * len(B)
        assert covering_radius(C) <= covering_radius(A) + covering_radius(B)
        assert asym_covering_radius(C) <= asym_covering_radius(A) + asym_covering_radius(B)


def test_ads_repetition_codes():
    C = ads(REP3, REP3)
    assert C.strings() == ["00000", "11111"]
    assert norm_at(C, 3) <= 5


def test_ads_size_balanced_is_half_product():
    A = code("000", "011", "101", "110")
    assert is_balanced(A, 3) and is_balanced(A, 1)
    C = ads(A, A, strict=False)
    assert len(C) == ads_size(A, A) == len(A) * len(A) // 2


def test_ads_zero_glued_only():
    A = code("000", "010")
    B = code("000", "001")
    C = ads(A, B, strict=False)
    assert C.strings() == ["00000", "00001", "01000", "01001"]


def test_ads_strict_rejects_unacceptable_coordinate():
    bad = code("00", "10")  # empty 1-half at coordinate 2
    with pytest.raises(HypothesisError, match="left operand: coordinate 2 is not acceptable"):
        ads(bad, REP3)
    with pytest.raises(HypothesisError, match="right operand"):
        ads(REP3, code("00", "01"))


def test_ads_strict_rejects_exceeded_declared_norm():
    with pytest.raises(HypothesisError, match="declared"):
        ads(REP3, REP3, norm_a=2)


def test_ads_unchecked_skips_hypotheses():
    C = ads(code("00", "10"), REP3, strict=False)
    assert C.length == 4


def test_ads_theorem_property_symmetric_and_asymmetric():
    rng = random.Random(17)
    for mode in ("symmetric", "asymmetric"):
        for _ in range(150):
            na, nb = rng.randint(1, 5), rng.randint(1, 5)
            A, NA = generators.acceptable_code(rng, na, mode, na)
            B, NB = generators.acceptable_code(rng, nb, mode, 1)
            C = ads(A, B, mode)
            assert C.length == na + nb - 1
            assert len(C) == ads_size(A, B)
            assert norm(C, na, mode) <= NA + NB - 1


def test_asds_with_empty_t_collapses_to_ads():
    P = PatchedCode(Code.full(3), Code.empty(3), 3, 1)
    C = asds(P, REP3, REP3)
    assert C == ads(Code.full(3), REP3, strict=False)
    assert norm_at(C, 3) <= 3


def test_asds_with_empty_s_is_t_branch():
    P = PatchedCode(Code.empty(3), Code.full(3), 3, 2)
    K2 = code("000", "011", "101", "110")  # norm at 1 is small
    C = asds(P, REP3, K2)
    assert C == ads(Code.full(3), K2, strict=False)


def test_asds_size_formula_on_balanced_inputs():
    S = code("000", "011", "101", "110")
    T = code("001", "000", "111", "110")
    P = PatchedCode(S, T, 3, 3)
    K = code("000", "011", "101", "110")
    assert is_balanced(S, 3) and is_balanced(T, 3) and is_balanced(K, 1)
    assert asds_size_bound(P, K, K) == len(S) * len(K) // 2 + len(T) * len(K) // 2
    C = asds(P, K, K, strict=False)
    assert len(C) <= asds_size_bound(P, K, K)


def test_asds_strict_names_failed_hypothesis():
    S = REP3
    with pytest.raises(HypothesisError, match="not norm 2-patched"):
        asds(PatchedCode(S, Code.empty(3), 3, 2), REP3, REP3)
    with pytest.raises(HypothesisError, match="last coordinate"):
        asds(PatchedCode(Code.full(3), Code.empty(3), 1, 1), REP3, REP3)
    with pytest.raises(HypothesisError, match="K1 has infinite"):
        asds(PatchedCode(Code.full(3), Code.empty(3), 3, 1), code("000"), REP3)
    with pytest.raises(HypothesisError, match="K2 has"):
        asds(PatchedCode(Code.full(3), Code.empty(3), 3, 1), Code.full(3), REP3)


def test_asds_theorem_property_both_modes():
    rng = random.Random(29)
    for mode in ("symmetric", "asymmetric"):
        for _ in range(100):
            n = rng.randint(2, 6)
            n1 = rng.randint(1, 12 - n)
            N = rng.randint(1, 5)
            P = generators.patched_code(rng, n, N, mode)
            K1, N1 = generators.finite_norm_code(rng, n1, mode)
            K2, _ = generators.finite_norm_code(rng, n1, mode, bound=N + N1 - 1)
            C = asds(P, K1, K2)
            assert C.length == n + n1 - 1
            glue = norm(C, n, mode)
            assert glue <= N + N1 - 1
            assert radius(C, mode) <= (N + N1 - 1) // 2


def test_ads_density_not_above_direct_sum():
    A = code("000", "111")
    B = code("000", "111")
    s = direct_sum(A, B)
    a = ads(A, B)
    da = density(a, covering_radius(a))
    ds = density(s, covering_radius(s))
    assert da.density <= ds.density


def test_ads_density_not_above_direct_sum_random_balanced_normal():
    rng = random.Random(1)
    checked = 0
    while checked < 60:
        na, nb = rng.randint(2, 5), rng.randint(2, 5)
        A, _ = generators.acceptable_code(rng, na, "symmetric", na)
        B, _ = generators.acceptable_code(rng, nb, "symmetric", 1)
        if not (is_balanced(A, na) and is_balanced(B, 1)):
            continue
        if not (is_normal(A, covering_radius(A)) and is_normal(B, covering_radius(B))):
            continue
        a, s = ads(A, B), direct_sum(A, B)
        assert density(a, covering_radius(a)).density <= density(s, covering_radius(s)).density
        checked += 1

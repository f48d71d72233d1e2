"""Exact and greedy search for small optimal (and optimal normal) covering codes.

The exact search is a depth-first set cover: branch on the lowest uncovered
word over the codewords whose ball contains it, forbid earlier siblings so
each cover is produced once, and cut when the uncovered count exceeds what
the remaining balls could possibly cover. Symmetric searches fix the zero
word as a codeword (every code can be translated to contain it, and norms
and radii are translation invariant); asymmetric codes must contain the
all-ones word anyway.

Among optimal codes the witness is the lexicographically least one (sorted
word lists compared elementwise).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterator

from .hypercube import Code, ball_size, enumerate_ball, move_coordinate, Word
from .radius_norm import check_mode, is_normal, norm, radius

EXACT_N_LIMIT = 7
DEFAULT_BUDGET = 2_000_000


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SearchResult:
    n: int
    R: int
    mode: str
    optimum: int
    witness: Code
    normal_optimum: int | None
    normal_witness: Code | None
    exhaustive: bool
    nodes: int = 0

    def as_dict(self) -> dict:
        return {
            "n": self.n, "R": self.R, "mode": self.mode, "exhaustive": self.exhaustive,
            "optimum": self.optimum, "witness": self.witness.strings(),
            "normal_optimum": self.normal_optimum,
            "normal_witness": None if self.normal_witness is None else self.normal_witness.strings(),
            "nodes": self.nodes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        n = d["n"]
        nw = d.get("normal_witness")
        return cls(n, d["R"], d["mode"], d["optimum"], Code.from_words(d["witness"], n),
                   d.get("normal_optimum"), None if nw is None else Code.from_words(nw, n),
                   d["exhaustive"], d.get("nodes", 0))


@lru_cache(maxsize=32)
def _balls(n: int, R: int, mode: str) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Coverage bitmask of each candidate codeword, and the candidates covering each word."""
    kind = "undirected" if mode == "symmetric" else "downward"
    balls = []
    covers: list[list[int]] = [[] for _ in range(1 << n)]
    for c in range(1 << n):
        mask = 0
        for u in enumerate_ball(Word(n, c), R, kind).values:
            mask |= 1 << u
            covers[u].append(c)
        balls.append(mask)
    return tuple(balls), tuple(tuple(sorted(cs)) for cs in covers)


def _is_lex_less(a: tuple[int, ...], b: tuple[int, ...] | None) -> bool:
    return b is None or a < b


class _CoverSearch:
    def __init__(self, n: int, R: int, mode: str, budget: int):
        self.n, self.R, self.mode = n, R, mode
        self.full = (1 << (1 << n)) - 1
        self.balls, self.covers = _balls(n, R, mode)
        self.max_ball = ball_size(n, R)
        self.budget = budget
        self.nodes = 0
        self.forced = 0 if mode == "symmetric" else (1 << n) - 1

    def covers_of_size(self, m: int) -> Iterator[tuple[int, ...]]:
        """Every cover with exactly m codewords containing the forced word (may repeat)."""
        start = self.forced
        yield from self._dfs(self.balls[start], [start], 1 << start, m)

    def _dfs(self, covered: int, chosen: list[int], forbidden: int, m: int) -> Iterator[tuple[int, ...]]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted
        if covered == self.full:
            yield from self._pad(chosen, m)
            return
        left = m - len(chosen)
        uncovered = self.full & ~covered
        if left <= 0 or uncovered.bit_count() > left * self.max_ball:
            return
        u = (uncovered & -uncovered).bit_length() - 1
        skipped = 0
        for c in self.covers[u]:
            if forbidden >> c & 1:
                continue
            chosen.append(c)
            yield from self._dfs(covered | self.balls[c], chosen, forbidden | skipped | (1 << c), m)
            chosen.pop()
            skipped |= 1 << c

    def _pad(self, chosen: list[int], m: int) -> Iterator[tuple[int, ...]]:
        extra = m - len(chosen)
        if extra == 0:
            yield tuple(sorted(chosen))
            return
        taken = set(chosen)
        rest = [w for w in range(1 << self.n) if w not in taken]
        for add in combinations(rest, extra):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExhausted
            yield tuple(sorted(chosen + list(add)))


def _lower_bound(n: int, R: int) -> int:
    return max(1, math.ceil((1 << n) / ball_size(n, R)))


def _is_normal_cover(code: Code, mode: str) -> bool:
    # an (n, R) code only needs radius <= R, so normality is judged at its own radius
    return is_normal(code, radius(code, mode), mode)


def greedy_cover(n: int, R: int, mode: str = "symmetric") -> Code:
    """Greedy set cover by (downward) R-balls; ties go to the smallest word."""
    check_mode(mode)
    balls, _ = _balls(n, R, mode)
    uncovered = (1 << (1 << n)) - 1
    chosen = []
    while uncovered:
        best, gain = -1, -1
        for c, ball in enumerate(balls):
            g = (ball & uncovered).bit_count()
            if g > gain:
                best, gain = c, g
        chosen.append(best)
        uncovered &= ~balls[best]
    code = Code(n, frozenset(chosen))
    assert radius(code, mode) <= R
    return code


def search_optimal(n: int, R: int, mode: str = "symmetric", require_normal: bool = False,
                   budget: int = DEFAULT_BUDGET, max_exact_n: int = EXACT_N_LIMIT) -> SearchResult:
    """Minimum-size (n, R) code, and with ``require_normal`` the minimum normal one.

    Exact for n <= ``max_exact_n`` unless the node budget runs out; otherwise
    the greedy cover is returned as an upper bound with ``exhaustive=False``.
    """
    check_mode(mode)
    if not 0 <= R <= n:
        raise ValueError(f"need 0 <= R <= n, got R={R}, n={n}")
    if n > max_exact_n:
        return _greedy_result(n, R, mode, require_normal, 0)

    search = _CoverSearch(n, R, mode, budget)
    best: tuple[int, ...] | None = None
    normal_best: tuple[int, ...] | None = None
    m = _lower_bound(n, R)
    try:
        while best is None:
            for cover in search.covers_of_size(m):
                if _is_lex_less(cover, best):
                    best = cover
            if best is None:
                m += 1
        optimum = m
        if require_normal:
            while normal_best is None:
                for cover in search.covers_of_size(m):
                    if _is_lex_less(cover, normal_best) and _is_normal_cover(Code(n, frozenset(cover)), mode):
                        normal_best = cover
                if normal_best is None:
                    m += 1
                    if m > 1 << n:
                        break
    except _BudgetExhausted:
        fallback = _greedy_result(n, R, mode, require_normal, search.nodes)
        if best is None:
            return fallback
        witness = Code(n, frozenset(best))
        if require_normal and normal_best is None:
            return SearchResult(n, R, mode, len(best), witness, fallback.normal_optimum,
                                fallback.normal_witness, False, search.nodes)
        return SearchResult(n, R, mode, len(best), witness,
                            None if normal_best is None else len(normal_best),
                            None if normal_best is None else Code(n, frozenset(normal_best)),
                            False, search.nodes)

    normal_code = None if normal_best is None else Code(n, frozenset(normal_best))
    return SearchResult(n, R, mode, optimum, Code(n, frozenset(best)),
                        None if normal_code is None else len(normal_code), normal_code,
                        True, search.nodes)


def _greedy_result(n: int, R: int, mode: str, require_normal: bool, nodes: int) -> SearchResult:
    g = greedy_cover(n, R, mode)
    normal_code = g if require_normal and _is_normal_cover(g, mode) else None
    return SearchResult(n, R, mode, len(g), g, None if normal_code is None else len(g),
                        normal_code, False, nodes)


# --- cache and convenience -------------------------------------------------------------------

class SearchCache:
    """Small JSON table of search results keyed by (n, R, mode, require_normal)."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._data: dict[str, dict] = {}
        if self.path.exists():
            self._data = json.loads(self.path.read_text())

    @staticmethod
    def key(n: int, R: int, mode: str, require_normal: bool) -> str:
        return f"{n}:{R}:{mode}:{int(require_normal)}"

    def get(self, n: int, R: int, mode: str, require_normal: bool) -> SearchResult | None:
        entry = self._data.get(self.key(n, R, mode, require_normal))
        return None if entry is None else SearchResult.from_dict(entry)

    def put(self, result: SearchResult, require_normal: bool) -> None:
        self._data[self.key(result.n, result.R, result.mode, require_normal)] = result.as_dict()
        self.path.write_text(json.dumps(self._data, sort_keys=True, indent=2))

    def search(self, n: int, R: int, mode: str = "symmetric", require_normal: bool = False,
               **kwargs) -> SearchResult:
        hit = self.get(n, R, mode, require_normal)
        if hit is None:
            hit = search_optimal(n, R, mode, require_normal, **kwargs)
            self.put(hit, require_normal)
        return hit


@lru_cache(maxsize=64)
def acceptable_first_code(n: int, R: int, mode: str = "symmetric", budget: int = DEFAULT_BUDGET) -> Code:
    """Smallest normal (n, R) code found by search, with an acceptable coordinate moved to 1."""
    result = search_optimal(n, R, mode, require_normal=True, budget=budget)
    code = result.normal_witness
    if code is None:
        raise LookupError(f"no normal ({n},{R}) {mode} code found within the search budget")
    for i in range(1, n + 1):
        if norm(code, i, mode) <= 2 * R + 1:
            return move_coordinate(code, i, 1)
    raise AssertionError("a normal code must have an acceptable coordinate")

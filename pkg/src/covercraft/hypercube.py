"""Binary words, codes, distances and ball combinatorics on the hypercube Q_n.

Coordinates are 1-based everywhere in the public API. Internally a word of
length ``n`` is an integer whose bit ``n - i`` holds coordinate ``i``, so the
integer order of words coincides with the lexicographic order of their
``'0'/'1'`` strings.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

CAP = 64
DEFAULT_N_LIMIT = 24
N_LIMIT_ENV = "COVERCRAFT_N_LIMIT"

INF = math.inf
ExtendedNat = Union[int, float]

# Sentinel used inside distance fields for "unreachable"; large enough that
# sums of two sentinels never wrap in int32.
UNREACHED = 1 << 20


class ExhaustiveLimitError(ValueError):
    """Raised when an exhaustive 2^n scan is requested above the configured limit."""


class CodeFormatError(ValueError):
    pass


def n_limit() -> int:
    value = os.environ.get(N_LIMIT_ENV)
    if value is None:
        return DEFAULT_N_LIMIT
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{N_LIMIT_ENV} must be an integer, got {value!r}") from None


def require_exhaustive(n: int, what: str = "exhaustive scan") -> None:
    limit = n_limit()
    if n > limit:
        raise ExhaustiveLimitError(
            f"{what} over Q_{n} needs 2^{n} words; exhaustive limit is n <= {limit} "
            f"(set {N_LIMIT_ENV} to override)"
        )


def _check_length(n: int) -> None:
    if not 1 <= n <= CAP:
        raise ValueError(f"word length must be in 1..{CAP}, got {n}")


def _bit(n: int, i: int) -> int:
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} out of range 1..{n}")
    return 1 << (n - i)


@dataclass(frozen=True, order=True)
class Word:
    length: int
    value: int

    def __post_init__(self) -> None:
        _check_length(self.length)
        if not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, s: str) -> "Word":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary word: {s!r}")
        return cls(len(s), int(s, 2))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Word":
        bits = list(bits)
        return cls.from_str("".join("1" if b else "0" for b in bits))

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")

    def __getitem__(self, i: int) -> int:
        return 1 if self.value & _bit(self.length, i) else 0

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in str(self))


def _as_word(x: Union[Word, str]) -> Word:
    return Word.from_str(x) if isinstance(x, str) else x


def _same_length(x: Word, y: Word) -> None:
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")


def weight(x: Union[Word, str]) -> int:
    return bin(_as_word(x).value).count("1")


def hamming_distance(x: Union[Word, str], y: Union[Word, str]) -> int:
    x, y = _as_word(x), _as_word(y)
    _same_length(x, y)
    return bin(x.value ^ y.value).count("1")


def precedes(x: Union[Word, str], y: Union[Word, str]) -> bool:
    """x ⪯ y in the boolean lattice."""
    x, y = _as_word(x), _as_word(y)
    _same_length(x, y)
    return x.value & ~y.value == 0


def flip(x: Union[Word, str], i: int) -> Word:
    x = _as_word(x)
    return Word(x.length, x.value ^ _bit(x.length, i))


@dataclass(frozen=True)
class Code:
    """A set of distinct words of common length ``length``.

    ``values`` holds the integer encodings; iterate the code to get ``Word``
    objects in lexicographic order.
    """

    length: int
    values: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        _check_length(self.length)
        top = 1 << self.length
        if any(not 0 <= v < top for v in self.values):
            raise ValueError(f"code contains a value outside Q_{self.length}")

    @classmethod
    def from_words(cls, words: Iterable[Union[Word, str]], length: int | None = None) -> "Code":
        ws = [_as_word(w) for w in words]
        if length is None:
            if not ws:
                raise ValueError("length is required for an empty code")
            length = ws[0].length
        if any(w.length != length for w in ws):
            raise ValueError("all words of a code must share one length")
        values = [w.value for w in ws]
        if len(set(values)) != len(values):
            raise ValueError("duplicate words in code")
        return cls(length, frozenset(values))

    @classmethod
    def full(cls, n: int) -> "Code":
        return cls(n, frozenset(range(1 << n)))

    @classmethod
    def empty(cls, n: int) -> "Code":
        return cls(n, frozenset())

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Word]:
        return (Word(self.length, v) for v in sorted(self.values))

    def __contains__(self, item: object) -> bool:
        if isinstance(item, str):
            item = Word.from_str(item)
        if isinstance(item, Word):
            return item.length == self.length and item.value in self.values
        return item in self.values

    def sorted_values(self) -> list[int]:
        return sorted(self.values)

    def strings(self) -> list[str]:
        return [str(w) for w in self]

    def union(self, other: "Code") -> "Code":
        if other.length != self.length:
            raise ValueError("length mismatch in union")
        return Code(self.length, self.values | other.values)

    def __repr__(self) -> str:
        shown = self.strings()
        if len(shown) > 8:
            shown = shown[:8] + ["..."]
        return f"Code(n={self.length}, size={len(self)}, {shown})"


def half(C: Code, i: int, b: int) -> Code:
    """Codewords whose i-th coordinate equals b."""
    mask = _bit(C.length, i)
    if b not in (0, 1):
        raise ValueError("b must be 0 or 1")
    want = mask if b else 0
    return Code(C.length, frozenset(v for v in C.values if v & mask == want))


def permute(C: Code, order: list[int]) -> Code:
    """Reorder coordinates: new coordinate j takes old coordinate ``order[j-1]``."""
    n = C.length
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"order must be a permutation of 1..{n}")
    out = []
    for v in C.values:
        w = 0
        for old in order:
            w = (w << 1) | ((v >> (n - old)) & 1)
        out.append(w)
    return Code(n, frozenset(out))


def move_coordinate(C: Code, src: int, dst: int) -> Code:
    """Move coordinate ``src`` to position ``dst``, keeping the others in order."""
    order = [j for j in range(1, C.length + 1) if j != src]
    order.insert(dst - 1, src)
    return permute(C, order)


def distance_to_set(x: Union[Word, str], Y: Code) -> ExtendedNat:
    x = _as_word(x)
    if not Y.values:
        return INF
    if x.length != Y.length:
        raise ValueError(f"length mismatch: {x.length} vs {Y.length}")
    return min(bin(x.value ^ y).count("1") for y in Y.values)


def asym_distance_to_set(x: Union[Word, str], Y: Code) -> ExtendedNat:
    """d⁺(x, Y): distance to the nearest codeword that dominates x."""
    x = _as_word(x)
    if x.length != Y.length:
        raise ValueError(f"length mismatch: {x.length} vs {Y.length}")
    best = INF
    for y in Y.values:
        if x.value & ~y == 0:
            best = min(best, bin(y ^ x.value).count("1"))
    return best


# --- ball sizes -------------------------------------------------------------

def ball_size(n: int, R: int) -> int:
    """binom(n, <= R); 0 for R < 0 and 2^n for R >= n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if R < 0:
        return 0
    if R >= n:
        return 1 << n
    return sum(math.comb(n, i) for i in range(R + 1))


def directed_ball_size(n: int, l: int, R: int) -> int:
    """Size of the upward ball of radius R around a weight-l word of Q_n."""
    if not 0 <= l <= n:
        raise ValueError(f"weight {l} out of range 0..{n}")
    return ball_size(n - l, R)


def enumerate_ball(x: Union[Word, str], R: int, kind: str = "undirected") -> Code:
    x = _as_word(x)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    n = x.length
    if kind == "undirected":
        if n <= 20:
            return Code(n, frozenset(np.bitwise_xor(_flip_masks(n, min(R, n)), x.value).tolist()))
        return Code(n, frozenset(x.value ^ m for m in _spread(0, [1 << j for j in range(n)], R, True)))
    if kind == "upward":
        free = [1 << j for j in range(n) if not x.value >> j & 1]
        return Code(n, frozenset(_spread(x.value, free, R, set_bits=True)))
    if kind == "downward":
        ones = [1 << j for j in range(n) if x.value >> j & 1]
        return Code(n, frozenset(_spread(x.value, ones, R, set_bits=False)))
    raise ValueError(f"unknown ball kind {kind!r}")


def _spread(center: int, positions: list[int], R: int, set_bits: bool) -> Iterator[int]:
    for r in range(min(R, len(positions)) + 1):
        for combo in combinations(positions, r):
            m = sum(combo)
            yield center | m if set_bits else center & ~m


@lru_cache(maxsize=64)
def _flip_masks(n: int, R: int) -> np.ndarray:
    """All masks of weight <= R, as an int64 array."""
    weights = _popcounts(n)
    return np.nonzero(weights <= R)[0].astype(np.int64)


@lru_cache(maxsize=32)
def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    for j in range(n):
        pc[1 << j:1 << (j + 1)] = pc[: 1 << j] + 1
    return pc


# --- distance fields ---------------------------------------------------------
# d(x, C) (or d⁺(x, C)) for every x in Q_n at once, by multi-source BFS on the
# cube. Cost O(n * R * 2^n).

@lru_cache(maxsize=8)
def _neighbour_tables(n: int) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    idx = np.arange(1 << n, dtype=np.int64)
    flips = [idx ^ (1 << j) for j in range(n)]
    zero_at = [(idx >> j) & 1 == 0 for j in range(n)]
    return idx, flips, zero_at


def distance_field(C: Code) -> np.ndarray:
    """Array of d(x, C) over x in Q_n, with ``UNREACHED`` when C is empty."""
    n = C.length
    require_exhaustive(n, "distance field")
    size = 1 << n
    dist = np.full(size, UNREACHED, dtype=np.int32)
    if not C.values:
        return dist
    _, flips, _ = _neighbour_tables(n)
    frontier = np.zeros(size, dtype=bool)
    frontier[np.fromiter(C.values, dtype=np.int64)] = True
    reached = frontier.copy()
    dist[frontier] = 0
    r = 0
    while frontier.any() and not reached.all():
        r += 1
        nxt = np.zeros(size, dtype=bool)
        for perm in flips:
            nxt |= frontier[perm]
        nxt &= ~reached
        dist[nxt] = r
        reached |= nxt
        frontier = nxt
    return dist


def asym_distance_field(C: Code) -> np.ndarray:
    """Array of d⁺(x, C) over x in Q_n; ``UNREACHED`` where no codeword dominates x."""
    n = C.length
    require_exhaustive(n, "distance field")
    size = 1 << n
    dist = np.full(size, UNREACHED, dtype=np.int32)
    if not C.values:
        return dist
    _, flips, zero_at = _neighbour_tables(n)
    frontier = np.zeros(size, dtype=bool)
    frontier[np.fromiter(C.values, dtype=np.int64)] = True
    reached = frontier.copy()
    dist[frontier] = 0
    r = 0
    while frontier.any():
        r += 1
        nxt = np.zeros(size, dtype=bool)
        # x is one step below y = x + e_j when x_j = 0
        for perm, zero in zip(flips, zero_at):
            nxt |= frontier[perm] & zero
        nxt &= ~reached
        dist[nxt] = r
        reached |= nxt
        frontier = nxt
    return dist


def to_extended(value: int) -> ExtendedNat:
    return INF if value >= UNREACHED else int(value)


# --- text format ---------------------------------------------------------------

_LENGTH_HEADER = re.compile(r"#\s*length\s*[:=]\s*(\d+)\s*$")


def parse_code(text: str, length: int | None = None) -> Code:
    """Parse the one-word-per-line format; '#' comments and blank lines are skipped.

    A ``# length: n`` comment fixes the word length, which lets empty codes
    round-trip.
    """
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            m = _LENGTH_HEADER.match(line)
            if m and length is None:
                length = int(m.group(1))
            continue
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise CodeFormatError(f"line {lineno}: not a binary word: {line!r}")
        if length is None:
            length = len(line)
        elif len(line) != length:
            raise CodeFormatError(f"line {lineno}: expected length {length}, got {len(line)}")
        if line in seen:
            raise CodeFormatError(f"line {lineno}: duplicate word {line} (first on line {seen[line]})")
        seen[line] = lineno
    if length is None:
        raise CodeFormatError("empty code file gives no word length")
    if not 1 <= length <= CAP:
        raise CodeFormatError(f"word length {length} outside 1..{CAP}")
    return Code(length, frozenset(int(w, 2) for w in seen))


def format_code(C: Code) -> str:
    return "".join(s + "\n" for s in C.strings())


def read_code(path: Union[str, Path], length: int | None = None) -> Code:
    return parse_code(Path(path).read_text(), length)


def write_code(C: Code, path: Union[str, Path], header: str | None = None) -> None:
    text = f"# length: {C.length}\n" + format_code(C)
    if header:
        text = "".join(f"# {line}\n" for line in header.splitlines()) + text
    Path(path).write_text(text)

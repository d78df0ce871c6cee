"""Canonical set partitions of [n] = {1, ..., n}.

A partition is stored as a restricted-growth sequence (rgs): rgs[k] is the
block index of element k+1, rgs[0] = 0, and every entry is at most one more
than the maximum of the entries before it.  Block indices are therefore
assigned in order of each block's minimum element, which makes the rgs a
canonical form: two partitions are equal iff their rgs tuples are equal.

Element indexing is 1-based in every public interface; the rgs itself is the
only 0-based surface and is documented as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    CoverError,
    DimensionError,
    ElementError,
    EmptyBlockError,
    LimitError,
    OverlapError,
    ParseError,
    RangeError,
)

# Materializing streams is capped to keep accidental jobs bounded; exact
# counting for larger n lives in pekr.counting and never builds partitions.
ENUM_LIMIT = 14


def _validate_rgs(rgs: tuple[int, ...]) -> None:
    if not rgs:
        raise RangeError("rgs must be nonempty (n >= 1)")
    if rgs[0] != 0:
        raise RangeError(f"rgs must start with 0, got {rgs[0]}")
    running_max = 0
    for k, v in enumerate(rgs[1:], start=1):
        if not 0 <= v <= running_max + 1:
            raise RangeError(f"rgs[{k}] = {v} exceeds running max {running_max} + 1")
        if v > running_max:
            running_max = v


@dataclass(frozen=True)
class SetPartition:
    """A set partition of [n] in canonical restricted-growth form."""

    n: int
    rgs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rgs", tuple(self.rgs))
        if self.n != len(self.rgs):
            raise RangeError(f"n = {self.n} does not match rgs length {len(self.rgs)}")
        _validate_rgs(self.rgs)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        """Build the canonical partition with the given blocks.

        Raises OverlapError / CoverError / EmptyBlockError when the blocks do
        not form a partition of [n].
        """
        owner = [0] * (n + 1)  # element -> 1 + block id, 0 = unassigned
        blocks = [sorted(b) for b in blocks]
        for bi, block in enumerate(blocks):
            if not block:
                raise EmptyBlockError(f"block #{bi} is empty")
            for x in block:
                if not isinstance(x, int) or not 1 <= x <= n:
                    raise CoverError(f"element {x} outside 1..{n}")
                if owner[x]:
                    raise OverlapError(f"element {x} appears in two blocks")
                owner[x] = bi + 1
        missing = [x for x in range(1, n + 1) if not owner[x]]
        if missing:
            raise CoverError(f"elements {missing} not covered by any block")
        rgs = [0] * n
        relabel: dict[int, int] = {}
        for x in range(1, n + 1):
            b = owner[x]
            if b not in relabel:
                relabel[b] = len(relabel)
            rgs[x - 1] = relabel[b]
        return cls(n, tuple(rgs))

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as sorted tuples, ordered by minimum element."""
        nb = max(self.rgs) + 1
        out: list[list[int]] = [[] for _ in range(nb)]
        for idx, b in enumerate(self.rgs):
            out[b].append(idx + 1)
        blocks = tuple(tuple(b) for b in out)
        assert all(blocks), "rgs validity forces nonempty blocks"
        return blocks

    @cached_property
    def block_signature(self) -> frozenset[int]:
        """Blocks encoded as element bitmasks (bit x-1 set for element x)."""
        sig = []
        for block in self.blocks:
            m = 0
            for x in block:
                m |= 1 << (x - 1)
            sig.append(m)
        return frozenset(sig)

    @cached_property
    def sigma_mask(self) -> int:
        """Bitmask of the elements that form singleton blocks."""
        m = 0
        for block in self.blocks:
            if len(block) == 1:
                m |= 1 << (block[0] - 1)
        return m

    @property
    def block_count(self) -> int:
        return max(self.rgs) + 1

    def block_of(self, i: int) -> tuple[int, ...]:
        """The block containing element i."""
        self._check_element(i)
        return self.blocks[self.rgs[i - 1]]

    def sigma(self) -> frozenset[int]:
        """The set of elements whose block has size 1."""
        return frozenset(b[0] for b in self.blocks if len(b) == 1)

    def common_blocks(self, other: "SetPartition") -> int:
        """Number of blocks the two partitions share (as equal sets)."""
        if self.n != other.n:
            raise DimensionError(f"ground sets differ: {self.n} vs {other.n}")
        return len(self.block_signature & other.block_signature)

    def split(self, i: int, j: int) -> "SetPartition":
        """Detach i into a singleton if j lies in i's block; otherwise identity."""
        self._check_element(i)
        self._check_element(j)
        if i == j:
            raise ElementError(f"split requires i != j, got i = j = {i}")
        bi = self.rgs[i - 1]
        if self.rgs[j - 1] != bi:
            return self
        new_blocks = [list(b) for b in self.blocks]
        new_blocks[bi].remove(i)
        new_blocks.append([i])
        return SetPartition.from_blocks(self.n, new_blocks)

    def merge(self, i: int, j: int) -> "SetPartition":
        """Inverse of split: move the singleton {i} into j's block.

        This is the unique partition P with P != self and split(P, i, j) ==
        self; raises ElementError when {i} is not a singleton block.
        """
        self._check_element(i)
        self._check_element(j)
        if i == j:
            raise ElementError(f"merge requires i != j, got i = j = {i}")
        if len(self.block_of(i)) != 1:
            raise ElementError(f"{{{i}}} is not a singleton block")
        new_blocks = [list(b) for b in self.blocks if b != (i,)]
        for block in new_blocks:
            if j in block:
                block.append(i)
                break
        return SetPartition.from_blocks(self.n, new_blocks)

    def relabel(self, perm: tuple[int, ...]) -> "SetPartition":
        """Image under the permutation of [n] given as perm[x-1] = image of x."""
        if len(perm) != self.n or sorted(perm) != list(range(1, self.n + 1)):
            raise ElementError(f"not a permutation of 1..{self.n}: {perm}")
        return SetPartition.from_blocks(
            self.n, [[perm[x - 1] for x in block] for block in self.blocks]
        )

    def to_text(self) -> str:
        """Block form: blocks by minimum element, `|`-separated, e.g. `1,5|2|3|4`."""
        return "|".join(",".join(str(x) for x in b) for b in self.blocks)

    def to_rgs_text(self) -> str:
        return "rgs:" + ",".join(str(v) for v in self.rgs)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "SetPartition":
        """Parse either block form (`1,5|2|3|4`) or rgs form (`rgs:0,1,0,0`).

        When n is omitted it is inferred (block form: the maximum element; the
        cover check then validates the ground set).
        """
        raw = text.strip()
        if not raw:
            raise ParseError("empty partition text")
        if raw.startswith("rgs:"):
            try:
                rgs = tuple(int(tok) for tok in raw[4:].split(","))
            except ValueError as exc:
                raise ParseError(f"bad rgs literal: {exc}") from None
            if n is not None and n != len(rgs):
                raise ParseError(f"rgs length {len(rgs)} does not match n={n}")
            return cls(len(rgs), rgs)
        blocks = []
        for chunk in raw.split("|"):
            try:
                block = [int(tok.strip()) for tok in chunk.split(",")]
            except ValueError:
                raise ParseError(f"bad block {chunk!r}") from None
            blocks.append(block)
        inferred = max(max(b) for b in blocks) if n is None else n
        return cls.from_blocks(inferred, blocks)

    def _check_element(self, x: int) -> None:
        if not 1 <= x <= self.n:
            raise ElementError(f"element {x} outside 1..{self.n}")

    def __str__(self) -> str:
        return self.to_text()


def sigma(p: SetPartition) -> frozenset[int]:
    return p.sigma()


def common_blocks(p: SetPartition, q: SetPartition) -> int:
    return p.common_blocks(q)


def split(p: SetPartition, i: int, j: int) -> SetPartition:
    return p.split(i, j)


# --- enumeration and lexicographic rank/unrank ------------------------------
#
# _completions(n)[r][m] counts the rgs tails of length r when the prefix max
# is m: each next entry is 0..m (max stays m) or m+1 (max grows).

_COMPLETIONS: dict[int, list[list[int]]] = {}


def _completions(n: int) -> list[list[int]]:
    table = _COMPLETIONS.get(n)
    if table is None:
        table = [[1] * (n + 2)]
        for r in range(1, n + 1):
            prev = table[r - 1]
            table.append([(m + 1) * prev[m] + prev[m + 1] for m in range(n + 1)] + [0])
        _COMPLETIONS[n] = table
    return table


def partition_count(n: int) -> int:
    """Number of partitions of [n], from the rank table (not pekr.counting)."""
    if n < 0:
        raise RangeError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1
    return _completions(n)[n - 1][0]


def rank(p: SetPartition) -> int:
    """Position of p in the lexicographic rgs order of all partitions of [n]."""
    table = _completions(p.n)
    r = 0
    running_max = 0
    for k in range(1, p.n):
        v = p.rgs[k]
        # every value below v keeps the running max (v <= running_max + 1)
        r += v * table[p.n - 1 - k][running_max]
        if v > running_max:
            running_max = v
    return r


def unrank(n: int, index: int) -> SetPartition:
    """Inverse of rank: the index-th partition of [n] in lexicographic rgs order."""
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    total = partition_count(n)
    if not 0 <= index < total:
        raise RangeError(f"index {index} outside 0..{total - 1} for n={n}")
    table = _completions(n)
    rgs = [0] * n
    running_max = 0
    for k in range(1, n):
        block_weight = table[n - 1 - k][running_max]
        v = index // block_weight
        if v > running_max:  # only one way to exceed: the new-block value
            index -= (running_max + 1) * block_weight
            v = running_max + 1
            # remaining index is within the subtree where max grew
            running_max = v
        else:
            index -= v * block_weight
        rgs[k] = v
        if v > running_max:
            running_max = v
    assert index == 0
    return SetPartition(n, tuple(rgs))


def enumerate_partitions(
    n: int,
    start: int = 0,
    stop: int | None = None,
    limit: int = ENUM_LIMIT,
) -> Iterator[SetPartition]:
    """Yield partitions of [n] in lexicographic rgs order.

    start/stop are rank bounds (half-open) so iteration can be sharded for
    parallel consumers; unrank provides the random access.  Raises LimitError
    for n beyond `limit` (default 14) -- use pekr.counting for larger counts.
    """
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    if n > limit:
        raise LimitError(f"n = {n} exceeds the enumeration limit {limit}")
    total = partition_count(n)
    if stop is None:
        stop = total
    if not (0 <= start <= stop <= total):
        raise RangeError(f"bad rank window [{start}, {stop}) for n={n}")
    if start == stop:
        return
    a = list(unrank(n, start).rgs)
    mx = [0] * n  # mx[k] = max(a[0..k-1])
    for idx in range(start, stop):
        yield SetPartition(n, tuple(a))
        if idx + 1 == stop:
            break
        for k in range(1, n):
            mx[k] = mx[k - 1] if a[k - 1] <= mx[k - 1] else a[k - 1]
        for k in range(n - 1, 0, -1):
            if a[k] <= mx[k]:
                a[k] += 1
                for t in range(k + 1, n):
                    a[t] = 0
                break
        else:  # pragma: no cover - stop > total is rejected above
            raise AssertionError("ran past the last rgs")


def all_singletons(n: int) -> SetPartition:
    """The partition of [n] into n singletons."""
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    return SetPartition(n, tuple(range(n)))


def pair_partition(n: int, a: int, b: int) -> SetPartition:
    """The partition with block {a, b} and every other element a singleton."""
    if not (1 <= a <= n and 1 <= b <= n):
        raise ElementError(f"elements {a}, {b} outside 1..{n}")
    if a == b:
        raise ElementError("pair partition needs two distinct elements")
    blocks = [[a, b]] + [[x] for x in range(1, n + 1) if x not in (a, b)]
    return SetPartition.from_blocks(n, blocks)

"""Families of set partitions: intersection, splitting, compression, and the
trivial / Hilton-Milner-type constructions with their recognizers.

A family is a set of partitions over a common ground set, stored as a sorted
tuple of lexicographic ranks (see pekr.partition.rank), which makes equality,
hashing and membership cheap.  All operations return new values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import counting
from .errors import (
    DimensionError,
    ElementError,
    EmptyFamilyError,
    NotIntersectingError,
    RangeError,
    VerificationError,
)
from .partition import (
    SetPartition,
    all_singletons,
    enumerate_partitions,
    pair_partition,
    rank,
    unrank,
)


@dataclass(frozen=True)
class PartitionFamily:
    """A set of partitions of [n], held as sorted distinct ranks."""

    n: int
    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(sorted(set(self.ranks))))

    @classmethod
    def from_partitions(cls, n: int, members: Iterable[SetPartition]) -> "PartitionFamily":
        rs = []
        for p in members:
            if p.n != n:
                raise DimensionError(f"member over [{p.n}] in a family over [{n}]")
            rs.append(rank(p))
        return cls(n, tuple(rs))

    @cached_property
    def partitions(self) -> tuple[SetPartition, ...]:
        return tuple(unrank(self.n, r) for r in self.ranks)

    def __len__(self) -> int:
        return len(self.ranks)

    def __iter__(self) -> Iterator[SetPartition]:
        return iter(self.partitions)

    def contains_rank(self, r: int) -> bool:
        lo, hi = 0, len(self.ranks)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ranks[mid] < r:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self.ranks) and self.ranks[lo] == r

    def __contains__(self, p: SetPartition) -> bool:
        if p.n != self.n:
            return False
        return self.contains_rank(rank(p))

    def add(self, p: SetPartition) -> "PartitionFamily":
        if p.n != self.n:
            raise DimensionError(f"member over [{p.n}] in a family over [{self.n}]")
        return PartitionFamily(self.n, self.ranks + (rank(p),))

    def remove(self, p: SetPartition) -> "PartitionFamily":
        r = rank(p)
        return PartitionFamily(self.n, tuple(x for x in self.ranks if x != r))

    def union(self, other: "PartitionFamily") -> "PartitionFamily":
        if other.n != self.n:
            raise DimensionError("union of families over different ground sets")
        return PartitionFamily(self.n, self.ranks + other.ranks)


@dataclass(frozen=True)
class SplitDecomposition:
    """Decomposition of a family w.r.t. one (i, j) pair: the members whose
    split image leaves the family (move), the rest (stay), and the image."""

    stay: PartitionFamily
    move: PartitionFamily
    image_of_move: PartitionFamily


@dataclass(frozen=True)
class TrivialityReport:
    """Witness that a family is trivially t-intersecting."""

    witness: tuple[int, ...]  # some t common singleton elements
    common: frozenset[int]  # all elements that are singletons in every member


@dataclass(frozen=True)
class HmWitness:
    """Anchors a_1..a_t and pivot b of a Hilton-Milner-type family."""

    anchors: tuple[int, ...]
    pivot: int

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(sorted(self.anchors)))
        seen = set(self.anchors)
        if len(seen) != len(self.anchors) or self.pivot in seen:
            raise ElementError("anchors and pivot must be pairwise distinct")

    def validate(self, n: int) -> None:
        for x in (*self.anchors, self.pivot):
            if not 1 <= x <= n:
                raise ElementError(f"element {x} outside 1..{n}")


@dataclass(frozen=True)
class CompressionReport:
    initial: PartitionFamily
    final: PartitionFamily
    steps: tuple[tuple[int, int, int], ...]  # (i, j, members moved)
    passes: int
    stuck: bool = False  # nontrivial-preserving strategy found no usable pair

    @property
    def effective_steps(self) -> int:
        return len(self.steps)


def is_t_intersecting(family: PartitionFamily, t: int) -> bool:
    """Every two members share at least t blocks (vacuously true for |A| <= 1)."""
    ps = family.partitions
    sigs = [p.block_signature for p in ps]
    for a in range(len(sigs)):
        sa = sigs[a]
        for b in range(a + 1, len(sigs)):
            if len(sa & sigs[b]) < t:
                return False
    return True


def triviality_witness(family: PartitionFamily, t: int) -> TrivialityReport | None:
    """Common singletons of all members; a report iff there are at least t."""
    if len(family) == 0:
        raise EmptyFamilyError("triviality is undefined for the empty family")
    common: frozenset[int] | None = None
    for p in family:
        s = p.sigma()
        common = s if common is None else common & s
        if not common:
            break
    assert common is not None
    if len(common) < t:
        return None
    return TrivialityReport(witness=tuple(sorted(common))[:t], common=common)


def family_split(
    family: PartitionFamily, i: int, j: int, verify_t: int | None = None
) -> tuple[SplitDecomposition, PartitionFamily]:
    """One application of the family splitting operator for the pair (i, j).

    Members whose split image is already present stay; the others are replaced
    by their images.  Size is always preserved (asserted).  With verify_t set,
    also checks that the t-intersecting property carries over and raises
    VerificationError otherwise.
    """
    stay_ranks, move_ranks, image_ranks = [], [], []
    for r, p in zip(family.ranks, family.partitions):
        q = p.split(i, j)
        if q is p:
            stay_ranks.append(r)
            continue
        qr = rank(q)
        if family.contains_rank(qr):
            stay_ranks.append(r)
        else:
            move_ranks.append(r)
            image_ranks.append(qr)
    n = family.n
    decomp = SplitDecomposition(
        stay=PartitionFamily(n, tuple(stay_ranks)),
        move=PartitionFamily(n, tuple(move_ranks)),
        image_of_move=PartitionFamily(n, tuple(image_ranks)),
    )
    if len(decomp.image_of_move) != len(decomp.move):
        raise VerificationError("split is not injective on the moved part")
    result = PartitionFamily(n, tuple(stay_ranks) + tuple(image_ranks))
    if len(result) != len(family):
        raise VerificationError("family splitting changed the family size")
    if verify_t is not None and is_t_intersecting(family, verify_t):
        if not is_t_intersecting(result, verify_t):
            raise VerificationError(
                f"splitting by ({i},{j}) broke the {verify_t}-intersecting property"
            )
    return decomp, result


def _ordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


PAIR_ORDERS = ("lex", "nontrivial-preserving")


def compress(
    family: PartitionFamily,
    t: int,
    pair_order: str = "lex",
    verify: bool = False,
) -> CompressionReport:
    """Apply family splitting until no pair changes the family.

    `lex` sweeps all ordered pairs (i, j) repeatedly.  `nontrivial-preserving`
    additionally skips any pair whose application would make the family
    trivially t-intersecting, and reports stuck=True if only such pairs remain
    before reaching a fixpoint.  Requires a t-intersecting input.
    """
    if pair_order not in PAIR_ORDERS:
        raise RangeError(f"unknown pair order {pair_order!r}, expected one of {PAIR_ORDERS}")
    if not is_t_intersecting(family, t):
        raise NotIntersectingError(f"input family is not {t}-intersecting")
    pairs = _ordered_pairs(family.n)
    current = family
    steps: list[tuple[int, int, int]] = []
    passes = 0
    budget = family.n * max(len(family), 1) + 1  # singleton-count potential bound
    stuck = False
    while True:
        passes += 1
        changed = False
        skipped_effective = False
        for i, j in pairs:
            decomp, result = family_split(current, i, j, verify_t=t if verify else None)
            moved = len(decomp.move)
            if moved == 0:
                continue
            if pair_order == "nontrivial-preserving":
                if len(result) > 0 and triviality_witness(result, t) is not None:
                    skipped_effective = True
                    continue
            steps.append((i, j, moved))
            current = result
            changed = True
            if len(steps) > budget:
                raise VerificationError(
                    "compression exceeded its singleton-potential step bound"
                )
        if not changed:
            stuck = skipped_effective
            break
    return CompressionReport(
        initial=family, final=current, steps=tuple(steps), passes=passes, stuck=stuck
    )


def is_compressed(family: PartitionFamily) -> bool:
    """Fixpoint test: no ordered pair moves any member."""
    for i, j in _ordered_pairs(family.n):
        decomp, _ = family_split(family, i, j)
        if len(decomp.move) != 0:
            return False
    return True


@dataclass(frozen=True)
class SigmaImage:
    """sigma applied member-wise: distinct singleton sets plus the multiset size."""

    sets: tuple[frozenset[int], ...]  # distinct images, sorted for determinism
    multiset_size: int  # |A|; collisions are multiset_size - len(sets)


def sigma_family(family: PartitionFamily) -> SigmaImage:
    images = {p.sigma() for p in family}
    ordered = tuple(sorted(images, key=lambda s: sorted(s)))
    return SigmaImage(sets=ordered, multiset_size=len(family))


def construct_trivial(n: int, anchors: Sequence[int]) -> PartitionFamily:
    """All partitions of [n] containing every anchor as a singleton block."""
    anchors = tuple(sorted(anchors))
    if len(set(anchors)) != len(anchors):
        raise ElementError("anchors must be distinct")
    for a in anchors:
        if not 1 <= a <= n:
            raise ElementError(f"anchor {a} outside 1..{n}")
    rest = [x for x in range(1, n + 1) if x not in anchors]
    anchor_blocks = [[a] for a in anchors]
    members = []
    if not rest:
        members.append(all_singletons(n))
    else:
        m = len(rest)
        for q in enumerate_partitions(m):
            blocks = [[rest[x - 1] for x in block] for block in q.blocks]
            members.append(SetPartition.from_blocks(n, anchor_blocks + blocks))
    return PartitionFamily.from_partitions(n, members)


def construct_hm(n: int, witness: HmWitness) -> PartitionFamily:
    """The Hilton-Milner-type family for the witness (anchors a_1..a_t, pivot b):
    partitions containing every anchor singleton plus a further singleton
    {c} with c not an anchor and c != b, together with the t pair partitions
    joining each anchor to the pivot."""
    witness.validate(n)
    t = len(witness.anchors)
    if n < t + 2:
        raise RangeError(f"needs n >= t + 2, got n={n}, t={t}")
    anchors = witness.anchors
    b = witness.pivot
    rest = [x for x in range(1, n + 1) if x not in anchors]
    anchor_blocks = [[a] for a in anchors]
    members = []
    m = len(rest)
    for q in enumerate_partitions(m):
        blocks = [[rest[x - 1] for x in block] for block in q.blocks]
        if any(len(bl) == 1 and bl[0] != b for bl in blocks):
            members.append(SetPartition.from_blocks(n, anchor_blocks + blocks))
    for a in anchors:
        members.append(pair_partition(n, a, b))
    family = PartitionFamily.from_partitions(n, members)
    assert len(family) == counting.hm_size(n, t), "construction disagrees with the size formula"
    return family


def recognize_hm(family: PartitionFamily, t: int) -> HmWitness | None:
    """The lexicographically least witness with construct_hm == family, if any."""
    n = family.n
    if n < t + 2 or len(family) != counting.hm_size(n, t):
        return None
    for anchors in itertools.combinations(range(1, n + 1), t):
        anchor_set = set(anchors)
        for pivot in range(1, n + 1):
            if pivot in anchor_set:
                continue
            candidate = HmWitness(anchors=anchors, pivot=pivot)
            if construct_hm(n, candidate) == family:
                return candidate
    return None


def anchored_partition(n: int, anchors: Sequence[int], e: int) -> SetPartition:
    """Anchors and e as singletons, everything else one block (the family's
    boundary members used by the undo check)."""
    big = [x for x in range(1, n + 1) if x not in anchors and x != e]
    if not big:
        raise RangeError("needs at least one element outside anchors + {e}")
    return SetPartition.from_blocks(n, [[a] for a in anchors] + [[e], big])


@dataclass(frozen=True)
class UndoVerdict:
    """Outcome of the undo check for one (family, pair, witness) instance."""

    status: str  # 'premise-not-met' | 'pass' | 'fail'
    premise_intersecting: bool
    premise_image_is_hm: bool
    counterexample: SetPartition | None  # a member of the symmetric difference on 'fail'
    pe_missing: tuple[int, ...]  # e with the anchored partition P_e absent from A
    q_missing: tuple[int, ...]  # anchors a with the pair partition Q(a, b) absent from A


def verify_undo(
    family: PartitionFamily, t: int, i: int, j: int, witness: HmWitness
) -> UndoVerdict:
    """Check that splitting cannot be 'undone': if A is t-intersecting and
    S_ij(A) equals the Hilton-Milner family H, then A = H already.

    Needs n >= t + 3.  A 'fail' verdict would contradict a non-asymptotic
    proposition and is reported with a counterexample member, never hidden.
    """
    n = family.n
    witness.validate(n)
    if len(witness.anchors) != t:
        raise RangeError(f"witness has {len(witness.anchors)} anchors, expected t={t}")
    if n < t + 3:
        raise RangeError(f"undo check needs n >= t + 3, got n={n}")
    if i == j:
        raise ElementError("needs i != j")
    hm = construct_hm(n, witness)
    premise_intersecting = is_t_intersecting(family, t)
    _, image = family_split(family, i, j)
    premise_image_is_hm = image == hm

    others = [x for x in range(1, n + 1) if x not in witness.anchors and x != witness.pivot]
    pe_missing = tuple(
        e for e in others if anchored_partition(n, witness.anchors, e) not in family
    )
    q_missing = tuple(
        a for a in witness.anchors if pair_partition(n, a, witness.pivot) not in family
    )

    if not (premise_intersecting and premise_image_is_hm):
        return UndoVerdict(
            status="premise-not-met",
            premise_intersecting=premise_intersecting,
            premise_image_is_hm=premise_image_is_hm,
            counterexample=None,
            pe_missing=pe_missing,
            q_missing=q_missing,
        )
    if family == hm:
        return UndoVerdict(
            status="pass",
            premise_intersecting=True,
            premise_image_is_hm=True,
            counterexample=None,
            pe_missing=pe_missing,
            q_missing=q_missing,
        )
    diff = set(family.ranks).symmetric_difference(hm.ranks)
    counterexample = unrank(n, min(diff))
    return UndoVerdict(
        status="fail",
        premise_intersecting=True,
        premise_image_is_hm=True,
        counterexample=counterexample,
        pe_missing=pe_missing,
        q_missing=q_missing,
    )


def relabel_family(family: PartitionFamily, perm: tuple[int, ...]) -> PartitionFamily:
    """Member-wise image under a permutation of [n] (perm[x-1] = image of x)."""
    return PartitionFamily.from_partitions(
        family.n, (p.relabel(perm) for p in family)
    )

"""Exact extremal search: maximum t-intersecting families as maximum cliques.

Vertices of the compatibility graph are all partitions of [n] (indexed by
lexicographic rank); edges join pairs sharing at least t blocks, so cliques
are exactly the t-intersecting families.  `nontrivial` mode restricts to
cliques whose member-wise common-singleton set has fewer than t elements.

The branch-and-bound runs one independent subproblem per root vertex with a
fixed starting incumbent (a feasible constructed family), so node counts and
results do not depend on thread count or scheduling.  The reported witness is
recovered in a separate pass as the lexicographically least optimal clique.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from . import counting
from ._kernels import CliqueKernel
from ._kernels.fallback import _color_order, _sigma_reducible
from .errors import LimitError, RangeError, VerificationError
from .families import (
    HmWitness,
    PartitionFamily,
    construct_hm,
    construct_trivial,
    is_t_intersecting,
    recognize_hm,
    triviality_witness,
)
from .partition import enumerate_partitions, rank

GRAPH_LIMIT = 8  # partitions of [8] give 4140 vertices; beyond that build cost explodes
ISO_LIMIT = 8
MODES = ("unrestricted", "nontrivial")
DEFAULT_BUDGET = 300.0


@dataclass(frozen=True)
class CompatibilityGraph:
    """Block-intersection compatibility graph over all partitions of [n]."""

    n: int
    t: int
    adj: tuple[int, ...]  # vertex -> neighbor bitset
    sigma_masks: tuple[int, ...]  # vertex -> singleton-element bitmask

    @property
    def vertex_count(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()


def build_graph(n: int, t: int, limit: int = GRAPH_LIMIT) -> CompatibilityGraph:
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    if not 1 <= t <= n:
        raise RangeError(f"t must be in 1..{n}, got {t}")
    if n > limit:
        raise LimitError(f"n = {n} exceeds the search limit {limit}")
    parts = list(enumerate_partitions(n))
    sigs = [p.block_signature for p in parts]
    V = len(parts)
    adj = [0] * V
    for a in range(V):
        sa = sigs[a]
        for b in range(a + 1, V):
            if len(sa & sigs[b]) >= t:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return CompatibilityGraph(
        n=n, t=t, adj=tuple(adj), sigma_masks=tuple(p.sigma_mask for p in parts)
    )


@dataclass(frozen=True)
class BoundComparison:
    hm_size: int | None  # None when n < t + 2
    trivial: int  # B_{n-t}
    equals_hm: bool | None
    equals_trivial: bool


@dataclass(frozen=True)
class SearchReport:
    n: int
    t: int
    mode: str
    optimum: int
    witness: PartitionFamily
    hm_verdict: HmWitness | None
    bounds: BoundComparison
    nodes_explored: int
    wall_time: float
    optimal: bool  # False when the budget expired; optimum is then best-so-far


def thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("PEKR_THREADS", "1"))
    if threads < 1:
        raise RangeError(f"threads must be >= 1, got {threads}")
    return threads


def _feasible_baseline(graph: CompatibilityGraph, mode: str) -> PartitionFamily:
    """A valid family for the mode, used as the starting incumbent."""
    n, t = graph.n, graph.t
    if mode == "unrestricted":
        return construct_trivial(n, tuple(range(1, t + 1)))
    if n >= t + 3:
        # Hilton-Milner families are t-intersecting and non-trivial from t+3 on
        return construct_hm(n, HmWitness(anchors=tuple(range(1, t + 1)), pivot=n))
    for v in range(graph.vertex_count):
        if graph.sigma_masks[v].bit_count() < t:
            return PartitionFamily(n, (v,))
    return PartitionFamily(n, ())


def _extract_witness(
    graph: CompatibilityGraph,
    kernel,
    size: int,
    constrained: bool,
    deadline: float,
) -> tuple[tuple[int, ...], int, bool]:
    """Lexicographically least qualifying clique of the given size.

    Fixes vertices in ascending rank order, each time asking the kernel
    whether the remainder can still be completed.  Returns (vertices, nodes,
    completed)."""
    V = graph.vertex_count
    adj = graph.adj
    sigma = graph.sigma_masks
    chosen: list[int] = []
    cand = (1 << V) - 1
    mask = (1 << graph.n) - 1
    nodes = 0
    for pos in range(size):
        placed = False
        c = cand
        while c:
            b = c & -c
            v = b.bit_length() - 1
            c ^= b
            above = ((1 << V) - 1) >> (v + 1) << (v + 1)
            newcand = cand & adj[v] & above
            newmask = mask & sigma[v]
            found, nds, completed = kernel.exists(
                newcand, size - pos - 1, newmask, constrained, deadline
            )
            nodes += nds
            if not completed:
                return tuple(chosen), nodes, False
            if found:
                chosen.append(v)
                cand = newcand
                mask = newmask
                placed = True
                break
        if not placed:
            raise VerificationError(
                "witness extraction could not complete a clique of the proven size"
            )
    return tuple(chosen), nodes, True


def max_family(
    graph: CompatibilityGraph,
    mode: str,
    budget: float = DEFAULT_BUDGET,
    threads: int | None = None,
) -> SearchReport:
    """Exact maximum family size for the mode, with deterministic witness.

    On budget expiry the report carries best-so-far with optimal=False; the
    budget never changes a completed result.
    """
    if mode not in MODES:
        raise RangeError(f"unknown mode {mode!r}, expected one of {MODES}")
    workers = thread_count(threads)
    started = time.monotonic()
    deadline = started + budget if budget and math.isfinite(budget) else math.inf
    n, t = graph.n, graph.t
    V = graph.vertex_count
    constrained = mode == "nontrivial"
    kernel = CliqueKernel(list(graph.adj), list(graph.sigma_masks), t)

    baseline = _feasible_baseline(graph, mode)
    lb = len(baseline)

    order = sorted(range(V), key=lambda v: (-graph.degree(v), v))
    suffix = [0] * (V + 1)
    for k in range(V - 1, -1, -1):
        suffix[k] = suffix[k + 1] | (1 << order[k])
    jobs = [
        (order[k], graph.adj[order[k]] & suffix[k + 1]) for k in range(V)
    ]

    def run_branch(job):
        root, cand = job
        return kernel.branch_max(root, cand, lb, constrained, deadline)

    if workers == 1:
        results = [run_branch(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_branch, jobs))

    optimum = max([lb] + [r[0] for r in results])
    nodes = sum(r[1] for r in results)
    completed = all(r[2] for r in results)

    if optimum > 0:
        witness_ranks, extra_nodes, ex_completed = _extract_witness(
            graph, kernel, optimum, constrained, deadline
        )
        nodes += extra_nodes
        if not ex_completed:
            completed = False
            # budget ran out mid-extraction: fall back to the constructed
            # baseline when it attains the best-so-far size
            witness = baseline if len(baseline) == optimum else PartitionFamily(n, witness_ranks)
        else:
            witness = PartitionFamily(n, witness_ranks)
    else:
        witness = PartitionFamily(n, ())

    _verify_witness(witness, t, constrained, optimum if completed else len(witness))

    hm_value = counting.hm_size(n, t) if n >= t + 2 else None
    trivial_value = counting.bell(n - t)
    bounds = BoundComparison(
        hm_size=hm_value,
        trivial=trivial_value,
        equals_hm=(optimum == hm_value) if hm_value is not None else None,
        equals_trivial=optimum == trivial_value,
    )
    hm_verdict = recognize_hm(witness, t) if len(witness) else None
    return SearchReport(
        n=n,
        t=t,
        mode=mode,
        optimum=optimum,
        witness=witness,
        hm_verdict=hm_verdict,
        bounds=bounds,
        nodes_explored=nodes,
        wall_time=time.monotonic() - started,
        optimal=completed,
    )


def _verify_witness(
    witness: PartitionFamily, t: int, constrained: bool, expected_size: int
) -> None:
    """Independent re-check of the reported witness (no kernel involvement)."""
    if len(witness) != expected_size:
        raise VerificationError(
            f"witness has {len(witness)} members, expected {expected_size}"
        )
    if not is_t_intersecting(witness, t):
        raise VerificationError("witness family is not t-intersecting")
    if constrained and len(witness) > 0 and triviality_witness(witness, t) is not None:
        raise VerificationError("witness family is trivially t-intersecting")


def enumerate_extremal(
    graph: CompatibilityGraph,
    mode: str,
    target_size: int,
    budget: float = DEFAULT_BUDGET,
) -> Iterator[PartitionFamily]:
    """All cliques of exactly target_size satisfying the mode, in
    lexicographic member order.  Raises LimitError on budget expiry."""
    if mode not in MODES:
        raise RangeError(f"unknown mode {mode!r}, expected one of {MODES}")
    if target_size < 0:
        raise RangeError("target_size must be >= 0")
    constrained = mode == "nontrivial"
    deadline = time.monotonic() + budget if budget and math.isfinite(budget) else math.inf
    adj = list(graph.adj)
    sigma = list(graph.sigma_masks)
    t = graph.t
    V = graph.vertex_count
    full = (1 << V) - 1

    if target_size == 0:
        yield PartitionFamily(graph.n, ())
        return

    def rec(chosen: list[int], cand: int, mask: int) -> Iterator[tuple[int, ...]]:
        if time.monotonic() > deadline:
            raise LimitError("enumeration budget expired")
        if len(chosen) == target_size:
            if not constrained or mask.bit_count() < t:
                yield tuple(chosen)
            return
        need = target_size - len(chosen)
        if cand.bit_count() < need:
            return
        if constrained and mask.bit_count() >= t:
            if not _sigma_reducible(sigma, cand, mask, t):
                return
        _, colors = _color_order(adj, cand)
        if colors and colors[-1] < need:
            return
        c = cand
        while c:
            b = c & -c
            v = b.bit_length() - 1
            c ^= b
            above = (full >> (v + 1)) << (v + 1)
            chosen.append(v)
            yield from rec(chosen, cand & adj[v] & above, mask & sigma[v])
            chosen.pop()

    for ranks in rec([], full, (1 << graph.n) - 1):
        yield PartitionFamily(graph.n, ranks)


@dataclass(frozen=True)
class CanonicalForm:
    """Relabeling-canonical image of a family plus a permutation achieving it."""

    family: PartitionFamily
    perm: tuple[int, ...]  # perm[x-1] = image of x


def _element_profiles(family: PartitionFamily) -> list[tuple[int, ...]]:
    """Per-element multiset of containing-block sizes; invariant under relabeling."""
    n = family.n
    profiles: list[list[int]] = [[] for _ in range(n)]
    for p in family:
        sizes = [len(b) for b in p.blocks]
        for x in range(n):
            profiles[x].append(sizes[p.rgs[x]])
    return [tuple(sorted(pr)) for pr in profiles]


def canonicalize_family_iso(family: PartitionFamily) -> CanonicalForm:
    """Minimal relabeled image over all permutations of [n] consistent with
    the element profiles (equal profiles are the only candidates to swap)."""
    n = family.n
    if n > ISO_LIMIT:
        raise LimitError(f"n = {n} exceeds the isomorphism limit {ISO_LIMIT}")
    if len(family) == 0:
        return CanonicalForm(family=family, perm=tuple(range(1, n + 1)))
    profiles = _element_profiles(family)
    groups: dict[tuple[int, ...], list[int]] = {}
    for x, pr in enumerate(profiles):
        groups.setdefault(pr, []).append(x + 1)
    keys = sorted(groups)
    member_lists = [groups[k] for k in keys]

    best_ranks: tuple[int, ...] | None = None
    best_perm: tuple[int, ...] | None = None
    for images in itertools.product(*(itertools.permutations(g) for g in member_lists)):
        perm = [0] * n
        for src_group, img_group in zip(member_lists, images):
            for src, img in zip(src_group, img_group):
                perm[src - 1] = img
        pt = tuple(perm)
        ranks = tuple(sorted(rank(p.relabel(pt)) for p in family))
        key = (ranks, pt)
        if best_ranks is None or key < (best_ranks, best_perm):
            best_ranks, best_perm = ranks, pt
    assert best_ranks is not None and best_perm is not None
    return CanonicalForm(
        family=PartitionFamily(family.n, best_ranks), perm=best_perm
    )


def families_equivalent(a: PartitionFamily, b: PartitionFamily) -> bool:
    """Equality up to relabeling of the ground set."""
    if a.n != b.n or len(a) != len(b):
        return False
    return canonicalize_family_iso(a).family == canonicalize_family_iso(b).family

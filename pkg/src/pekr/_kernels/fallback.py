"""Pure-Python kernels: enumeration counting and clique branch-and-bound.

This module is the reference implementation of the hot loops.  The compiled
extension pekr._kernels._speedups mirrors it operation for operation and must
produce identical results, including node counts -- tests compare the two.

Bitset conventions: vertex sets are Python ints (bit v = vertex v); sigma
masks are ints over ground-set elements (bit x-1 = element x).  All entry
points are reentrant: per-call search state lives on the call stack, so one
kernel instance may serve several threads at once.
"""

from __future__ import annotations

import time

IMPL = "pure"

_DEADLINE_STRIDE = 4096  # wall-clock checks are amortized over this many nodes


def enumeration_counts(n: int) -> tuple[int, int]:
    """(number of partitions of [n], number of singleton-free ones), by DFS.

    Walks the full restricted-growth tree, tracking block sizes, so the result
    is an actual enumeration rather than a recurrence evaluation.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sizes = [0] * (n + 1)
    totals = [0, 0]

    def walk(k: int, nblocks: int, nsingle: int) -> None:
        if k == n:
            totals[0] += 1
            if nsingle == 0:
                totals[1] += 1
            return
        for j in range(nblocks):
            sj = sizes[j]
            sizes[j] = sj + 1
            walk(k + 1, nblocks, nsingle - 1 if sj == 1 else nsingle)
            sizes[j] = sj
        sizes[nblocks] = 1
        walk(k + 1, nblocks + 1, nsingle + 1)
        sizes[nblocks] = 0

    walk(0, 0, 0)
    return totals[0], totals[1]


def _color_order(adj: list[int], cand: int) -> tuple[list[int], list[int]]:
    """Greedy coloring of cand (classes filled in ascending vertex order).

    Returns (order, colors): vertices sorted by (color, index) ascending and
    their 1-based color numbers; a clique in cand has all-distinct colors, so
    colors[i] bounds any clique inside order[0..i].
    """
    classes: list[int] = []
    c = cand
    while c:
        b = c & -c
        v = b.bit_length() - 1
        c ^= b
        av = adj[v]
        for ci in range(len(classes)):
            if not av & classes[ci]:
                classes[ci] |= b
                break
        else:
            classes.append(b)
    order: list[int] = []
    colors: list[int] = []
    for ci, cm in enumerate(classes):
        m = cm
        while m:
            b = m & -m
            order.append(b.bit_length() - 1)
            colors.append(ci + 1)
            m ^= b
    return order, colors


def _sigma_reducible(sigma: list[int], cand: int, mask: int, t: int) -> bool:
    """Can intersecting mask with candidate sigma masks drop below t bits?"""
    and_all = mask
    c = cand
    while c:
        b = c & -c
        and_all &= sigma[b.bit_length() - 1]
        if and_all.bit_count() < t:
            return True
        c ^= b
    return False


class CliqueKernel:
    """Exact clique search over one compatibility graph.

    adj[v] is the neighbor bitset of vertex v; sigma[v] the singleton mask of
    the partition behind v.  In constrained mode a clique qualifies only if
    the AND of its members' sigma masks has fewer than t bits (the family is
    not trivially t-intersecting).
    """

    def __init__(self, adj: list[int], sigma: list[int], t: int):
        self.adj = list(adj)
        self.sigma = list(sigma)
        self.t = t

    def branch_max(
        self, root: int, cand: int, lb: int, constrained: bool, deadline: float
    ) -> tuple[int, int, bool]:
        """Best qualifying clique size among {root} + subsets of cand, given
        incumbent lb (only strictly larger cliques are recorded).
        Returns (best, nodes, completed)."""
        adj = self.adj
        sigma = self.sigma
        t = self.t
        state = [lb, 0, False]  # best, nodes, timed_out

        def expand(ksize: int, cand: int, mask: int) -> None:
            state[1] += 1
            if state[1] % _DEADLINE_STRIDE == 0 and time.monotonic() > deadline:
                state[2] = True
                return
            if constrained and mask.bit_count() >= t:
                if not _sigma_reducible(sigma, cand, mask, t):
                    return
            if cand == 0:
                if ksize > state[0] and (not constrained or mask.bit_count() < t):
                    state[0] = ksize
                return
            order, colors = _color_order(adj, cand)
            for i in range(len(order) - 1, -1, -1):
                if ksize + colors[i] <= state[0]:
                    return
                v = order[i]
                expand(ksize + 1, cand & adj[v], mask & sigma[v])
                if state[2]:
                    return
                cand ^= 1 << v

        expand(1, cand, sigma[root])
        return state[0], state[1], not state[2]

    def exists(
        self, cand: int, need: int, mask: int, constrained: bool, deadline: float
    ) -> tuple[bool, int, bool]:
        """Is there a clique of size exactly `need` inside cand whose final
        sigma-AND with `mask` qualifies?  Returns (found, nodes, completed)."""
        adj = self.adj
        sigma = self.sigma
        t = self.t
        state = [0, False]  # nodes, timed_out

        def rec(need: int, cand: int, mask: int) -> bool:
            state[0] += 1
            if state[0] % _DEADLINE_STRIDE == 0 and time.monotonic() > deadline:
                state[1] = True
                return False
            if need == 0:
                return not constrained or mask.bit_count() < t
            if cand.bit_count() < need:
                return False
            if constrained and mask.bit_count() >= t:
                if not _sigma_reducible(sigma, cand, mask, t):
                    return False
            order, colors = _color_order(adj, cand)
            if colors and colors[-1] < need:
                return False
            for i in range(len(order) - 1, -1, -1):
                if colors[i] < need:
                    return False
                v = order[i]
                if rec(need - 1, cand & adj[v], mask & sigma[v]):
                    return True
                if state[1]:
                    return False
                cand ^= 1 << v
            return False

        found = rec(need, cand, mask)
        return found, state[0], not state[1]

"""Exact Bell-number arithmetic and the inequality checks built on it.

Everything here is integer arithmetic on Python ints (arbitrary precision);
no floating point is used anywhere, including the floor of n/(t+1) + t - 1,
which is evaluated as (n + (t-1)(t+1)) // (t+1).

B[n] counts all partitions of [n]; B_sf[n] counts the singleton-free ones.
The table is built from the two standard recurrences

    B[n]    = sum_{k=0..n}   C(n, k)   * B_sf[n-k]        (n >= 2)
    B_sf[n] = sum_{k=1..n-1} C(n-1, k) * B_sf[n-1-k]      (n >= 2)

with B[0] = B[1] = B_sf[0] = 1 and B_sf[1] = 0, and is cross-checked against
the independent recurrence B[m+1] = sum_k C(m, k) B[k] plus the identity
B[n] = B_sf[n] + B_sf[n+1].
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import RangeError, UnknownLemmaError


class BellTable:
    """Immutable table of B, B_sf and binomials for 0 <= m <= n_max."""

    def __init__(self, n_max: int):
        if n_max < 0:
            raise RangeError(f"n_max must be >= 0, got {n_max}")
        self.n_max = n_max
        size = max(n_max, 1) + 2  # one spare row so the B = B_sf identity can be checked
        self._pascal = [[1]]
        for m in range(1, size + 1):
            prev = self._pascal[-1]
            row = [1] + [prev[k - 1] + prev[k] for k in range(1, m)] + [1]
            self._pascal.append(row)

        sf = [1, 0]
        for m in range(2, size + 1):
            sf.append(sum(self._pascal[m - 1][k] * sf[m - 1 - k] for k in range(1, m)))
        bell = [1, 1]
        for m in range(2, size + 1):
            bell.append(sum(self._pascal[m][k] * sf[m - k] for k in range(0, m + 1)))
        self._bell = bell
        self._sf = sf
        self._self_test(size)

    def _self_test(self, size: int) -> None:
        # independent second recurrence for B, and the sum identity
        check = [1]
        for m in range(size):
            check.append(sum(self._pascal[m][k] * check[k] for k in range(m + 1)))
        assert check == self._bell[: size + 1], "Bell cross-recurrence mismatch"
        for m in range(size):
            assert self._bell[m] == self._sf[m] + self._sf[m + 1], (
                f"B[{m}] != B_sf[{m}] + B_sf[{m + 1}]"
            )

    def bell(self, m: int) -> int:
        if not 0 <= m <= self.n_max:
            raise RangeError(f"bell({m}) outside table range 0..{self.n_max}")
        return self._bell[m]

    def bell_sf(self, m: int) -> int:
        if not 0 <= m <= self.n_max:
            raise RangeError(f"bell_sf({m}) outside table range 0..{self.n_max}")
        return self._sf[m]

    def binom(self, n: int, k: int) -> int:
        if k < 0 or k > n:
            return 0
        return self._pascal[n][k]


_shared = BellTable(8)
_shared_lock = threading.Lock()


def table_for(n_max: int) -> BellTable:
    """Process-wide table, grown on demand (tables are immutable once built)."""
    global _shared
    if _shared.n_max < n_max:
        with _shared_lock:
            if _shared.n_max < n_max:
                _shared = BellTable(max(n_max, 2 * _shared.n_max))
    return _shared


def build_table(n_max: int) -> BellTable:
    return BellTable(n_max)


def bell(n: int) -> int:
    if n < 0:
        raise RangeError(f"bell({n}): n must be >= 0")
    return table_for(n).bell(n)


def bell_sf(n: int) -> int:
    if n < 0:
        raise RangeError(f"bell_sf({n}): n must be >= 0")
    return table_for(n).bell_sf(n)


def hm_size(n: int, t: int) -> int:
    """Size of the Hilton-Milner-type family: B[n-t] - B_sf[n-t] - B_sf[n-t-1] + t."""
    if t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    if n < t + 2:
        raise RangeError(f"hm_size requires n >= t + 2, got n={n}, t={t}")
    tb = table_for(n - t)
    return tb.bell(n - t) - tb.bell_sf(n - t) - tb.bell_sf(n - t - 1) + t


def check_lemma_less(c: int, t: int, n: int) -> bool:
    """c * B[n-t-1] < B[n-t] - B_sf[n-t] - B_sf[n-t-1], exactly."""
    if c < 1 or t < 1:
        raise RangeError(f"c and t must be >= 1, got c={c}, t={t}")
    if n < t + 2:
        raise RangeError(f"requires n >= t + 2, got n={n}, t={t}")
    tb = table_for(n - t)
    rhs = tb.bell(n - t) - tb.bell_sf(n - t) - tb.bell_sf(n - t - 1)
    return c * tb.bell(n - t - 1) < rhs


def check_lemma_less02(t: int, r: int, n: int) -> bool:
    """t * B[n-r+1] < B_sf[n-t-1], exactly; requires t+4 <= r <= n-2."""
    if t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    if not t + 4 <= r <= n - 2:
        raise RangeError(f"requires t+4 <= r <= n-2, got t={t}, r={r}, n={n}")
    tb = table_for(n)
    return t * tb.bell(n - r + 1) < tb.bell_sf(n - t - 1)


def eq5_split_point(n: int, t: int) -> int:
    """floor(n/(t+1) + t - 1) in pure integer arithmetic."""
    return (n + (t - 1) * (t + 1)) // (t + 1)


def check_lemma_less03(t: int, n: int) -> bool:
    """B_sf[n-t-1] > sum_{k > split point} C(n,k) * B_sf[n-k], exactly."""
    if t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    if n <= t + 1:
        raise RangeError(f"requires n > t + 1, got n={n}, t={t}")
    tb = table_for(n)
    m = eq5_split_point(n, t)
    rhs = sum(tb.binom(n, k) * tb.bell_sf(n - k) for k in range(m + 1, n + 1))
    return tb.bell_sf(n - t - 1) > rhs


def eval_eq5_bound(n: int, t: int) -> int:
    """Upper bound on a compressed nontrivial family via the k-subset layers.

    sum_{k=t+1..M} C(n-t, k-t) B_sf[n-k]  +  sum_{k=M+1..n} C(n, k) B_sf[n-k]
    with M the split point; empty sums are 0.
    """
    if t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    if n < t + 1:
        raise RangeError(f"requires n >= t + 1, got n={n}, t={t}")
    tb = table_for(n)
    m = eq5_split_point(n, t)
    first = sum(tb.binom(n - t, k - t) * tb.bell_sf(n - k) for k in range(t + 1, m + 1))
    second = sum(tb.binom(n, k) * tb.bell_sf(n - k) for k in range(m + 1, n + 1))
    return first + second


def check_eq5_dominates(t: int, n: int) -> bool:
    """eval_eq5_bound(n, t) >= hm_size(n, t) - t (the bound covers the family body)."""
    return eval_eq5_bound(n, t) >= hm_size(n, t) - t


@dataclass(frozen=True)
class ScanReport:
    """Truth profile of an inequality over an n range."""

    lemma: str
    t: int
    params: dict
    ns: tuple[int, ...]
    values: tuple[bool, ...]
    first_true: int | None
    persistent_from: int | None  # smallest n true from there to the end of range
    monotonic: bool  # no true -> false flip inside the scanned range

    def summary(self) -> str:
        if self.first_true is None:
            tail = "never holds in range"
        elif self.persistent_from is None:
            tail = f"flips back to false after n={self.first_true}; no persistent threshold in range"
        elif not self.monotonic:
            tail = f"holds non-monotonically; persistent from n={self.persistent_from}"
        else:
            tail = f"holds from n={self.persistent_from} onward"
        return f"{self.lemma} t={self.t} {self.params or ''}: {tail}"


_LEMMAS = ("less", "less02", "less03")


def threshold_scan(lemma: str, t: int, params: dict | None, n_range) -> ScanReport:
    """Empirical threshold for one of the asymptotic inequalities.

    lemma is one of 'less' (params: c), 'less02' (params: r, or r_offset to
    scan r = t + offset), 'less03' (no params).  n values whose preconditions
    fail are skipped, so the report covers the valid part of the range only.
    """
    if lemma not in _LEMMAS:
        raise UnknownLemmaError(f"unknown lemma {lemma!r}, expected one of {_LEMMAS}")
    params = dict(params or {})
    ns: list[int] = []
    values: list[bool] = []
    for n in n_range:
        try:
            if lemma == "less":
                v = check_lemma_less(params.get("c", 1), t, n)
            elif lemma == "less02":
                r = params["r"] if "r" in params else t + params.get("r_offset", 4)
                if not t + 4 <= r <= n - 2:
                    continue
                v = check_lemma_less02(t, r, n)
            else:
                v = check_lemma_less03(t, n)
        except RangeError:
            continue
        ns.append(n)
        values.append(v)

    first_true = next((n for n, v in zip(ns, values) if v), None)
    persistent = None
    for n, v in zip(reversed(ns), reversed(values)):
        if not v:
            break
        persistent = n
    if first_true is None:
        monotonic = True
    else:
        idx = ns.index(first_true)
        monotonic = all(values[idx:])
    return ScanReport(
        lemma=lemma,
        t=t,
        params=params,
        ns=tuple(ns),
        values=tuple(values),
        first_true=first_true,
        persistent_from=persistent,
        monotonic=monotonic,
    )

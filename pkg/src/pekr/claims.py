"""Checkable claims: each maps a proved statement (or its small-n shadow) to
an executable verification over a parameter grid, reporting a Finding.

Statuses: `verified` (held everywhere tested), `refuted-at-n` (counterexample
found), `skipped` (not decidable in budget, or an asymptotic statement not yet
holding at the tested sizes).  Asymptotic statements can legitimately fail at
desk scale; those findings are informational and map to exit code 2, never 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import counting
from ._kernels import enumeration_counts
from .errors import LimitError, PekrError
from .families import (
    HmWitness,
    PartitionFamily,
    compress,
    construct_hm,
    construct_trivial,
    family_split,
    is_compressed,
    is_t_intersecting,
    recognize_hm,
    sigma_family,
    triviality_witness,
    verify_undo,
)
from .partition import enumerate_partitions, partition_count, unrank
from .search import build_graph, canonicalize_family_iso, enumerate_extremal, max_family


@dataclass(frozen=True)
class Finding:
    claim: str
    status: str  # 'verified' | 'refuted-at-n' | 'skipped'
    asymptotic: bool
    evidence: dict


@dataclass
class CheckContext:
    n_max: int = 9
    t_max: int = 2
    seed: int = 0
    samples: int = 1000
    budget: float = 300.0
    threads: int | None = None


def exit_code(findings: Iterable[Finding]) -> int:
    """0 all verified; 1 hard refutation; 2 informational (asymptotic gaps,
    skips) only."""
    code = 0
    for f in findings:
        if f.status == "refuted-at-n" and not f.asymptotic:
            return 1
        if f.status != "verified":
            code = 2
    return code


# --- random family generation -------------------------------------------------


def random_family(rng: random.Random, n: int, size_cap: int) -> PartitionFamily:
    total = partition_count(n)
    k = rng.randint(0, min(size_cap, total))
    return PartitionFamily(n, tuple(rng.sample(range(total), k)))


def random_intersecting_family(
    rng: random.Random, n: int, t: int, size_cap: int
) -> PartitionFamily:
    """Greedy growth over a shuffled candidate pool; always t-intersecting."""
    total = partition_count(n)
    target = rng.randint(1, size_cap)
    pool = rng.sample(range(total), min(total, 6 * size_cap + 24))
    ranks: list[int] = []
    parts = []
    for r in pool:
        p = unrank(n, r)
        if all(p.common_blocks(q) >= t for q in parts):
            ranks.append(r)
            parts.append(p)
            if len(ranks) >= target:
                break
    return PartitionFamily(n, tuple(ranks))


# --- individual claims ---------------------------------------------------------


def claim_bell_identities(ctx: CheckContext) -> Finding:
    """The two Bell recurrences and the sum identity, exact, on their stated
    domains (the recurrences are stated for n >= 2; the conventions pin n < 2)."""
    top = max(25, ctx.n_max)
    tb = counting.build_table(top)
    bad: list[str] = []
    if tb.bell(0) != 1 or tb.bell(1) != 1:
        bad.append("B[0] or B[1] convention")
    if tb.bell_sf(0) != 1 or tb.bell_sf(1) != 0:
        bad.append("B_sf[0] or B_sf[1] convention")
    for m in range(0, top + 1):
        want = sum(tb.binom(m, k) * tb.bell_sf(m - k) for k in range(0, m + 1))
        if tb.bell(m) != want:
            bad.append(f"binomial-sum identity for B at n={m}")
    for m in range(2, top + 1):
        want = sum(tb.binom(m - 1, k) * tb.bell_sf(m - 1 - k) for k in range(1, m))
        if tb.bell_sf(m) != want:
            bad.append(f"singleton-free recurrence at n={m}")
    for m in range(0, top):
        if tb.bell(m) != tb.bell_sf(m) + tb.bell_sf(m + 1):
            bad.append(f"sum identity at n={m}")
    status = "verified" if not bad else "refuted-at-n"
    return Finding("bell-identities", status, False, {"n_max": top, "violations": bad})


def claim_enumeration_count(ctx: CheckContext) -> Finding:
    """Enumerated totals (all / singleton-free) equal the recurrence values."""
    top = min(12, ctx.n_max)
    bad = []
    checked = []
    for n in range(1, top + 1):
        total, sf = enumeration_counts(n)
        if n <= 7:  # tie the counting walk to the materializing stream
            stream = list(enumerate_partitions(n))
            if len(stream) != total or sum(1 for p in stream if not p.sigma()) != sf:
                bad.append(f"stream/walk mismatch at n={n}")
        if total != counting.bell(n) or sf != counting.bell_sf(n):
            bad.append(f"count mismatch at n={n}: {total},{sf}")
        checked.append(n)
    status = "verified" if not bad else "refuted-at-n"
    return Finding("enumeration-count", status, False, {"checked_n": checked, "violations": bad})


def _hm_grid(ctx: CheckContext) -> list[tuple[int, int]]:
    grid = []
    for t in range(1, min(3, ctx.t_max) + 1):
        for n in range(t + 2, min(9, ctx.n_max) + 1):
            grid.append((n, t))
    return grid


def claim_hm_size(ctx: CheckContext) -> Finding:
    """|construct_hm| equals B[n-t] - B_sf[n-t] - B_sf[n-t-1] + t on the grid."""
    bad = []
    grid = _hm_grid(ctx)
    for n, t in grid:
        fam = construct_hm(n, HmWitness(anchors=tuple(range(1, t + 1)), pivot=n))
        if len(fam) != counting.hm_size(n, t):
            bad.append(f"size mismatch at n={n}, t={t}")
    status = "verified" if not bad else "refuted-at-n"
    return Finding("hm-size", status, False, {"grid": grid, "violations": bad})


def claim_hm_properties(ctx: CheckContext) -> Finding:
    """construct_hm output should be t-intersecting and non-trivially so.

    This genuinely fails at the n = t+2 boundary: with only one extra element
    besides the pivot, the pair partitions share just n-3 = t-1 blocks (t >= 2),
    and for t = 1 the single extra singleton is common to every member.  It
    holds for every n >= t+3; a violation there would be a hard refutation.
    """
    boundary: list[tuple[int, int, str]] = []
    hard: list[tuple[int, int, str]] = []
    grid = _hm_grid(ctx)
    for n, t in grid:
        fam = construct_hm(n, HmWitness(anchors=tuple(range(1, t + 1)), pivot=n))
        problems = []
        if not is_t_intersecting(fam, t):
            problems.append("not-intersecting")
        if triviality_witness(fam, t) is not None:
            problems.append("trivial")
        for what in problems:
            (boundary if n == t + 2 else hard).append((n, t, what))
    if hard:
        return Finding(
            "hm-properties", "refuted-at-n", False,
            {"grid": grid, "violations": hard, "boundary": boundary},
        )
    status = "verified" if not boundary else "skipped"
    return Finding(
        "hm-properties", status, True,
        {
            "grid": grid,
            "boundary_degenerate": boundary,
            "note": "holds for all tested n >= t+3" if boundary else "holds on full grid",
        },
    )


def claim_split_preserves(ctx: CheckContext) -> Finding:
    """Family splitting preserves size always, and the t-intersecting property.

    Exhaustive over all families of at most 3 members over [4] with every
    ordered pair, then seeded random families at n = 5, 6 for t = 1, 2.
    """
    import itertools as it

    bad = []
    total = partition_count(4)
    pairs4 = [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]
    exhaustive = 0
    for k in range(0, 4):
        for ranks in it.combinations(range(total), k):
            fam = PartitionFamily(4, ranks)
            inter = is_t_intersecting(fam, 1)
            for i, j in pairs4:
                decomp, result = family_split(fam, i, j)
                exhaustive += 1
                if len(result) != len(fam):
                    bad.append(f"size broken: n=4 ranks={ranks} pair=({i},{j})")
                if len(decomp.move) + len(decomp.stay) != len(fam):
                    bad.append(f"decomposition not a partition of A: {ranks} ({i},{j})")
                if inter and not is_t_intersecting(result, 1):
                    bad.append(f"1-intersecting broken: n=4 ranks={ranks} pair=({i},{j})")

    rng = random.Random(ctx.seed)
    sampled = 0
    per_combo = max(1, ctx.samples // 4)
    for n in (5, 6):
        for t in (1, 2):
            pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
            for _ in range(per_combo):
                fam = (
                    random_family(rng, n, 8)
                    if rng.random() < 0.5
                    else random_intersecting_family(rng, n, t, 8)
                )
                sampled += 1
                inter = is_t_intersecting(fam, t)
                for i, j in pairs:
                    _, result = family_split(fam, i, j)
                    if len(result) != len(fam):
                        bad.append(f"size broken: n={n} t={t} |A|={len(fam)} ({i},{j})")
                    if inter and not is_t_intersecting(result, t):
                        bad.append(f"{t}-intersecting broken: n={n} ranks={fam.ranks} ({i},{j})")
    status = "verified" if not bad else "refuted-at-n"
    return Finding(
        "split-preserves", status, False,
        {"exhaustive_applications": exhaustive, "random_families": sampled,
         "violations": bad[:5]},
    )


def _compression_samples(ctx: CheckContext):
    rng = random.Random(ctx.seed + 1)
    per_combo = max(1, ctx.samples // 6)
    for n in (4, 5, 6):
        for t in (1, 2):
            for _ in range(per_combo):
                yield n, t, random_intersecting_family(rng, n, t, 10)


def claim_compress_fixpoint(ctx: CheckContext) -> Finding:
    """Compression terminates within the singleton-potential bound, reaches a
    fixpoint, preserves size, and is idempotent."""
    bad = []
    count = 0
    for n, t, fam in _compression_samples(ctx):
        count += 1
        rep = compress(fam, t)
        if len(rep.final) != len(fam):
            bad.append(f"size changed: n={n} t={t} ranks={fam.ranks}")
        if len(rep.steps) > n * max(len(fam), 1):
            bad.append(f"step bound exceeded: n={n} t={t} ranks={fam.ranks}")
        if not is_compressed(rep.final):
            bad.append(f"not a fixpoint: n={n} t={t} ranks={fam.ranks}")
        if compress(rep.final, t).steps != ():
            bad.append(f"not idempotent: n={n} t={t} ranks={fam.ranks}")
        if rep.steps:
            gained = sum(len(p.sigma()) for p in rep.final) - sum(
                len(p.sigma()) for p in fam
            )
            if gained <= 0:
                bad.append(f"singleton potential did not increase: n={n} t={t}")
    status = "verified" if not bad else "refuted-at-n"
    return Finding(
        "compress-fixpoint", status, False,
        {"families": count, "violations": bad[:5]},
    )


def claim_sigma_intersecting(ctx: CheckContext) -> Finding:
    """After compression the singleton-set images pairwise share >= t elements."""
    bad = []
    count = 0
    for n, t, fam in _compression_samples(ctx):
        count += 1
        rep = compress(fam, t)
        image = sigma_family(rep.final).sets
        for a in range(len(image)):
            for b in range(a + 1, len(image)):
                if len(image[a] & image[b]) < t:
                    bad.append(f"n={n} t={t} ranks={fam.ranks}")
    status = "verified" if not bad else "refuted-at-n"
    return Finding(
        "sigma-intersecting", status, False,
        {"families": count, "violations": bad[:5]},
    )


def undo_perturbation_scan(n: int, t: int) -> dict:
    """Exhaustive single-member un-split perturbations of the canonical
    Hilton-Milner family; counts any A != H, t-intersecting, with image H."""
    witness = HmWitness(anchors=tuple(range(1, t + 1)), pivot=n)
    hm = construct_hm(n, witness)
    hm_parts = set(hm.partitions)
    tested = 0
    counterexamples = []
    for p in hm.partitions:
        for i in sorted(p.sigma()):
            for j in range(1, n + 1):
                if j == i:
                    continue
                q = p.merge(i, j)
                if q in hm_parts:
                    continue  # |A| would drop; its image cannot equal H
                tested += 1
                others = [x for x in hm.partitions if x is not p]
                if any(q.common_blocks(x) < t for x in others):
                    continue  # A not t-intersecting: premise unreachable
                family = hm.remove(p).add(q)
                verdict = verify_undo(family, t, i, j, witness)
                if verdict.status == "fail":
                    counterexamples.append((p.to_text(), i, j))
    return {"n": n, "t": t, "perturbations": tested, "counterexamples": counterexamples}


def claim_undo_recovery(ctx: CheckContext) -> Finding:
    """No single-member un-split of the Hilton-Milner family survives the
    premise with a different family: splitting cannot be undone (n >= t+3).

    Scanning the canonical witness suffices: relabeling equivariance (checked
    by the property suite) transports any counterexample to it.
    """
    bad = []
    scans = []
    for t in range(1, min(2, ctx.t_max) + 1):
        for n in range(t + 3, min(7, ctx.n_max) + 1):
            result = undo_perturbation_scan(n, t)
            scans.append(result)
            if result["counterexamples"]:
                bad.append(result)
            witness = HmWitness(anchors=tuple(range(1, t + 1)), pivot=n)
            hm = construct_hm(n, witness)
            verdict = verify_undo(hm, t, 1 if t > 1 else 2, n, witness)
            if verdict.status != "pass" or verdict.pe_missing or verdict.q_missing:
                bad.append({"n": n, "t": t, "self_check": verdict.status})
    status = "verified" if not bad else "refuted-at-n"
    return Finding(
        "undo-recovery", status, False,
        {"scans": scans, "violations": bad},
    )


def _search_points(ctx: CheckContext, mode: str) -> list[tuple[int, int]]:
    pts = []
    if mode == "unrestricted":
        for t in range(1, min(2, ctx.t_max) + 1):
            for n in range(max(2, t), min(6, ctx.n_max) + 1):
                pts.append((n, t))
    else:
        for n, t in ((4, 1), (5, 1), (6, 1), (5, 2), (6, 2)):
            if n <= ctx.n_max and t <= ctx.t_max:
                pts.append((n, t))
    return pts


def claim_trivial_max(ctx: CheckContext) -> Finding:
    """Unrestricted optimum vs the trivial-family size B[n-t]: feasibility is
    hard (optimum >= B[n-t]); equality is the asymptotic statement."""
    hard_bad = []
    records = []
    all_equal = True
    for n, t in _search_points(ctx, "unrestricted"):
        graph = build_graph(n, t)
        report = max_family(graph, "unrestricted", budget=ctx.budget, threads=ctx.threads)
        if not report.optimal:
            return Finding("trivial-max", "skipped", True,
                           {"reason": f"budget expired at n={n}, t={t}", "records": records})
        trivial = counting.bell(n - t)
        records.append({"n": n, "t": t, "optimum": report.optimum, "trivial": trivial,
                        "equal": report.optimum == trivial})
        if report.optimum < trivial:
            hard_bad.append((n, t))
        if report.optimum != trivial:
            all_equal = False
    if hard_bad:
        return Finding("trivial-max", "refuted-at-n", False,
                       {"feasibility_violations": hard_bad, "records": records})
    return Finding(
        "trivial-max", "verified" if all_equal else "skipped", True,
        {"records": records,
         "note": "equality everywhere" if all_equal
         else "equality fails at some tested n (asymptotic statement)"},
    )


def claim_nontrivial_max(ctx: CheckContext) -> Finding:
    """Nontrivial optimum vs the Hilton-Milner size: feasibility hard
    (optimum >= hm_size for n >= t+3), equality + uniqueness asymptotic."""
    hard_bad = []
    records = []
    all_equal = True
    for n, t in _search_points(ctx, "nontrivial"):
        graph = build_graph(n, t)
        report = max_family(graph, "nontrivial", budget=ctx.budget, threads=ctx.threads)
        if not report.optimal:
            return Finding("nontrivial-max", "skipped", True,
                           {"reason": f"budget expired at n={n}, t={t}", "records": records})
        hm_value = counting.hm_size(n, t)
        rec = {"n": n, "t": t, "optimum": report.optimum, "hm_size": hm_value,
               "equal": report.optimum == hm_value,
               "witness_is_hm": report.hm_verdict is not None}
        if report.optimum < hm_value:
            hard_bad.append((n, t))
        if report.optimum == hm_value:
            uniq = _uniqueness_scan(graph, report.optimum, ctx)
            rec.update(uniq)
        else:
            all_equal = False
        records.append(rec)
    if hard_bad:
        return Finding("nontrivial-max", "refuted-at-n", False,
                       {"feasibility_violations": hard_bad, "records": records})
    all_unique = all(r.get("all_extremal_hm", True) for r in records)
    status = "verified" if (all_equal and all_unique) else "skipped"
    return Finding(
        "nontrivial-max", status, True,
        {"records": records,
         "note": "equality and uniqueness everywhere" if status == "verified"
         else "asymptotic equality/uniqueness not established at tested n"},
    )


def _uniqueness_scan(graph, target: int, ctx: CheckContext) -> dict:
    """Every extremal nontrivial family should be a Hilton-Milner family; the
    isomorph-reduced count should then be 1."""
    try:
        families = list(enumerate_extremal(graph, "nontrivial", target, budget=ctx.budget))
    except LimitError:
        return {"uniqueness": "skipped (budget)"}
    non_hm = [f for f in families if recognize_hm(f, graph.t) is None]
    canon = {canonicalize_family_iso(f).family.ranks for f in families}
    return {
        "extremal_count": len(families),
        "iso_classes": len(canon),
        "all_extremal_hm": not non_hm,
        "non_hm_count": len(non_hm),
    }


def _lemma_scan_finding(name: str, lemma: str, ctx: CheckContext, params_list) -> Finding:
    reports = []
    never = []
    flips = []
    for t in range(1, min(3, ctx.t_max) + 1):
        for params in params_list:
            rep = counting.threshold_scan(lemma, t, params, range(2, 41))
            reports.append({"t": t, "params": params, "summary": rep.summary(),
                            "persistent_from": rep.persistent_from,
                            "monotonic": rep.monotonic})
            if rep.persistent_from is None:
                never.append((t, params))
            if not rep.monotonic:
                flips.append((t, params))
    status = "verified" if not never else "skipped"
    return Finding(
        name, status, True,
        {"reports": reports, "no_threshold_in_range": never, "non_monotonic": flips},
    )


def claim_lemma_less(ctx: CheckContext) -> Finding:
    return _lemma_scan_finding("lemma-less", "less", ctx, [{"c": c} for c in (1, 2, 3, 4)])


def claim_lemma_less02(ctx: CheckContext) -> Finding:
    return _lemma_scan_finding("lemma-less02", "less02", ctx, [{"r_offset": 4}])


def claim_lemma_less03(ctx: CheckContext) -> Finding:
    return _lemma_scan_finding("lemma-less03", "less03", ctx, [{}])


def claim_eq5_dominates(ctx: CheckContext) -> Finding:
    """The layered upper bound should dominate hm_size - t from some n on."""
    reports = []
    never = []
    for t in range(1, min(3, ctx.t_max) + 1):
        ns = [n for n in range(t + 2, 41)]
        vals = [counting.check_eq5_dominates(t, n) for n in ns]
        persistent = None
        for n, v in zip(reversed(ns), reversed(vals)):
            if not v:
                break
            persistent = n
        reports.append({"t": t, "persistent_from": persistent})
        if persistent is None:
            never.append(t)
    return Finding(
        "eq5-dominates", "verified" if not never else "skipped", True,
        {"reports": reports, "no_threshold": never},
    )


CLAIMS: dict[str, Callable[[CheckContext], Finding]] = {
    "bell-identities": claim_bell_identities,
    "enumeration-count": claim_enumeration_count,
    "hm-size": claim_hm_size,
    "hm-properties": claim_hm_properties,
    "split-preserves": claim_split_preserves,
    "compress-fixpoint": claim_compress_fixpoint,
    "sigma-intersecting": claim_sigma_intersecting,
    "undo-recovery": claim_undo_recovery,
    "trivial-max": claim_trivial_max,
    "nontrivial-max": claim_nontrivial_max,
    "lemma-less": claim_lemma_less,
    "lemma-less02": claim_lemma_less02,
    "lemma-less03": claim_lemma_less03,
    "eq5-dominates": claim_eq5_dominates,
}

# search-backed claims are slow; `verify` runs them only when asked or when
# the grid is small
DEFAULT_SUITE = (
    "bell-identities",
    "enumeration-count",
    "hm-size",
    "hm-properties",
    "split-preserves",
    "compress-fixpoint",
    "sigma-intersecting",
    "undo-recovery",
    "lemma-less",
    "lemma-less02",
    "lemma-less03",
    "eq5-dominates",
)
FULL_SUITE = tuple(CLAIMS)


def run_claims(names: Iterable[str], ctx: CheckContext) -> list[Finding]:
    findings = []
    for name in names:
        try:
            checker = CLAIMS[name]
        except KeyError:
            raise PekrError(f"unknown claim {name!r}; known: {', '.join(CLAIMS)}") from None
        findings.append(checker(ctx))
    return findings

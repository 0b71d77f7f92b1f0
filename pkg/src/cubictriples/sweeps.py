"""Batch checks of the families and of the ramification criteria against the
class-group oracle.

Every sweep returns a :class:`SweepResult`: one row per case in input order,
the violations among them, and counters.  ``workers > 1`` fans the oracle
calls out to a process pool; results are merged back in input order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .arith import squarefree_kernel
from .cubicfields import CubicHypothesisError, splitting_field_unramified
from .families import t_of
from .quadforms import (
    DEFAULT_ENUM_BUDGET,
    EnumerationBudgetExceeded,
    class_number_imaginary,
    fundamental_discriminant,
    narrow_class_number_real,
    three_rank,
)

__all__ = [
    "SweepResult",
    "class_number",
    "prop24_sweep",
    "prop25_sweep",
    "scholz_scan",
    "qualifying_cubics",
    "lemma_fuzz",
]


@dataclass
class SweepResult:
    name: str
    rows: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"sweep": self.name, "stats": self.stats, "violations": self.violations, "rows": self.rows}


def class_number(D: int, max_disc: int | None = None) -> int:
    """h for D < 0, h+ for D > 0."""
    if D < 0:
        return class_number_imaginary(D, max_disc=max_disc)
    return narrow_class_number_real(D, max_disc=max_disc)


def _pmap(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * workers))))


def _h_or_skip(job):
    D, max_disc = job
    try:
        return class_number(D, max_disc)
    except EnumerationBudgetExceeded:
        return None


def _divisibility_sweep(name, cases, max_disc, workers) -> SweepResult:
    """``cases`` are (row, radicand) pairs; checks 3 | class number of Q(sqrt(radicand))."""
    result = SweepResult(name)
    discs = [int(fundamental_discriminant(r)) for _, r in cases]
    hs = _pmap(_h_or_skip, [(D, max_disc) for D in discs], workers)
    skipped = 0
    for (row, radicand), D, h in zip(cases, discs, hs):
        row = dict(row, radicand=str(radicand), disc=str(D),
                   kind="h" if D < 0 else "h+")
        if h is None:
            row.update(status="skipped", reason="over enumeration budget")
            skipped += 1
        else:
            row.update(class_number=h, divisible_by_3=h % 3 == 0,
                       status="pass" if h % 3 == 0 else "FAIL")
            if h % 3:
                result.violations.append(row)
        result.rows.append(row)
    checked = len(cases) - skipped
    result.stats = {"cases": len(cases), "checked": checked, "skipped": skipped,
                    "divisible": checked - len(result.violations), "violations": len(result.violations)}
    return result


def prop25_sweep(ts: Iterable[int], max_disc: int | None = None, workers: int = 1) -> SweepResult:
    """3 | h(Q(sqrt(1 - 2916t^3))) for each t >= 1."""
    cases = []
    for t in ts:
        if t < 1:
            raise ValueError(f"t must be >= 1, got {t}")
        cases.append(({"t": t}, 1 - 2916 * t**3))
    return _divisibility_sweep("prop25", cases, max_disc, workers)


def prop24_sweep(ts: Iterable[int], max_disc: int | None = None, workers: int = 1) -> SweepResult:
    """3 | h+(Q(sqrt(3t(3888t^2 + 108t + 1)))); multiples of 3 are skipped."""
    cases, excluded = [], []
    for t in ts:
        if t == 0 or t % 3 == 0:
            excluded.append(t)
            continue
        cases.append(({"t": t}, 3 * t_of(t)))
    result = _divisibility_sweep("prop24", cases, max_disc, workers)
    result.stats["excluded_t"] = excluded
    return result


def _squarefree(n: int) -> bool:
    return abs(squarefree_kernel(n)) == n


def _scholz_case(d: int) -> dict:
    D_real = int(fundamental_discriminant(d))
    D_imag = int(fundamental_discriminant(-3 * d))
    r, s = three_rank(D_real), three_rank(D_imag)
    h_plus = narrow_class_number_real(D_real)
    h = class_number_imaginary(D_imag)
    return {"d": d, "disc_real": D_real, "disc_imag": D_imag, "h_plus": h_plus, "h_imag": h, "r": r, "s": s}


def scholz_scan(dmax: int, workers: int = 1) -> SweepResult:
    """r <= s <= r + 1 for the 3-ranks of Q(sqrt(d)), Q(sqrt(-3d)), squarefree d in [2, dmax]."""
    ds = [d for d in range(2, dmax + 1) if _squarefree(d)]
    result = SweepResult("scholz-scan")
    for row in _pmap(_scholz_case, ds, workers):
        problems = []
        if not row["r"] <= row["s"] <= row["r"] + 1:
            problems.append("r <= s <= r+1 fails")
        if row["h_plus"] % 3 == 0 and row["h_imag"] % 3:
            problems.append("3 | h+ but 3 does not divide h(-3d)")
        row["status"] = "pass" if not problems else "FAIL: " + "; ".join(problems)
        if problems:
            result.violations.append(row)
        result.rows.append(row)
    result.stats = {"cases": len(ds), "violations": len(result.violations),
                    "three_divides_h_plus": sum(r["h_plus"] % 3 == 0 for r in result.rows)}
    return result


def qualifying_cubics(bound: int) -> tuple[list[tuple[int, int, int]], dict]:
    """All (a, b, D) with |a|, |b| <= bound meeting the hypotheses and unramified.

    Also returns counters for each reason a cubic was dropped.
    """
    counts = {"grid": 0, "b_zero": 0, "hypotheses_fail": 0, "ramified": 0, "unramified": 0}
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            counts["grid"] += 1
            if b == 0 or (a == 0 and b == 0):
                counts["b_zero"] += 1
                continue
            try:
                report = splitting_field_unramified((a, b))
            except CubicHypothesisError:
                counts["hypotheses_fail"] += 1
                continue
            if report.unramified:
                counts["unramified"] += 1
                out.append((a, b, report.disc))
            else:
                counts["ramified"] += 1
    return out, counts


def lemma_fuzz(
    bound: int,
    samples: int | None = None,
    seed: int = 0,
    max_disc: int | None = None,
    workers: int = 1,
) -> SweepResult:
    """Unramified by the local criteria must imply 3 | h of Q(sqrt(D(f))).

    With ``samples`` set, a seeded sample of the qualifying cubics is checked
    instead of all of them.  Cubics whose field discriminant is over the
    enumeration budget are skipped and counted, not failed.
    """
    cubics, counts = qualifying_cubics(bound)
    if samples is not None and samples < len(cubics):
        picked = sorted(random.Random(seed).sample(range(len(cubics)), samples))
        cubics = [cubics[i] for i in picked]
    limit = DEFAULT_ENUM_BUDGET if max_disc is None else max_disc
    discs = [int(fundamental_discriminant(D)) for _, _, D in cubics]
    unique = sorted({D for D in discs if abs(D) <= limit})
    h_of = dict(zip(unique, _pmap(_h_or_skip, [(D, max_disc) for D in unique], workers)))
    result = SweepResult("lemma-fuzz")
    skipped = 0
    for (a, b, D), F in zip(cubics, discs):
        h = h_of.get(F)
        row = {"a": a, "b": b, "disc_f": str(D), "field_disc": str(F), "kind": "h" if F < 0 else "h+"}
        if h is None:
            skipped += 1
            row.update(status="skipped", reason="over enumeration budget")
        else:
            row.update(class_number=h, status="pass" if h % 3 == 0 else "FAIL")
            if h % 3:
                result.violations.append(row)
        result.rows.append(row)
    result.stats = dict(
        counts,
        checked=len(cubics) - skipped,
        skipped=skipped,
        distinct_fields=len(unique),
        violations=len(result.violations),
        seed=seed,
        samples=samples,
    )
    return result

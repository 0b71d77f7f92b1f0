"""Parametric families of quadratic fields with 3 | h, and triple certificates.

Three witnesses drive everything:

* ``prop24``: X^3 - 3(108t + 1)X - 2 cuts out an unramified cyclic cubic
  extension of Q(sqrt(3t(3888t^2 + 108t + 1))) for 3 not dividing t.
* ``prop25``: X^3 - 27tX - 1 does the same for Q(sqrt(3(2916t^3 - 1))).
* ``theorem-k``: X^3 - 27tX - k for Q(sqrt(3(2916t^3 - k^2))).

Scholz reflection carries 3-divisibility from Q(sqrt(m)) to Q(sqrt(-3m)).
With t_n = n(3888n^2 + 108n + 1), n = 2 (mod 9) and n = 1 (mod k), the three
reflected fields are Q(sqrt(d)), Q(sqrt(d + 1)), Q(sqrt(d + k^2)) for
d = -2916 t_n^3.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .arith import (
    FactorBudget,
    FactorizationTimeout,
    crt_pair,
    is_cubefree,
    is_square,
    same_square_class,
    squarefree_kernel,
)
from .cubicfields import (
    DepressedCubic,
    CubicHypothesisError,
    RamificationReport,
    discriminant,
    is_irreducible,
    splitting_field_unramified,
)

__all__ = [
    "DEFAULT_CERT_BUDGET",
    "FamilyWitness",
    "TripleCertificate",
    "TripleError",
    "CertificateParseError",
    "AuditItem",
    "AuditReport",
    "prop24_radicand",
    "prop25_radicand",
    "theorem_k_witness",
    "scholz_reflect",
    "t_of",
    "validate_k",
    "search_n",
    "next_n",
    "make_triple",
    "verify_certificate",
]

# 7 * 571: the value of t_n mod k when n = 1 (mod k).
T_RESIDUE = 3888 + 108 + 1

DEFAULT_CERT_BUDGET = FactorBudget(max_digits=20, max_iterations=200_000)

FLAG_DEGENERATE = "degenerate: pair"
FLAG_DIRECT = "below-T regime: direct checks"
TARGETS = ("d", "d+1", "d+k^2")


class TripleError(ValueError):
    """make_triple refused its input; ``entry`` names the failing part."""

    def __init__(self, message: str, entry: str | None = None):
        super().__init__(message if entry is None else f"{entry}: {message}")
        self.entry = entry


class CertificateParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class FamilyWitness:
    label: str
    radicand_real: int
    witness_cubic: DepressedCubic
    report: RamificationReport
    reflected_radicand: int | None = None
    radicand_real_kernel: int | None = None
    target: str | None = None

    def __post_init__(self):
        if not same_square_class(self.radicand_real, discriminant(self.witness_cubic)):
            raise AssertionError(f"{self.label}: radicand and D(f) name different fields")
        if self.reflected_radicand is not None and not same_square_class(
            self.reflected_radicand, -3 * self.radicand_real
        ):
            raise AssertionError(f"{self.label}: reflected radicand is not Q(sqrt(-3m))")

    def as_dict(self) -> dict:
        out: dict[str, Any] = {"label": self.label}
        if self.target is not None:
            out["target"] = self.target
        out["radicand_real"] = str(self.radicand_real)
        if self.radicand_real_kernel is not None:
            out["radicand_real_kernel"] = str(self.radicand_real_kernel)
            out["kernel_status"] = "normalized"
        else:
            out["kernel_status"] = "not normalized"
        out["witness_cubic"] = self.witness_cubic.as_dict()
        if self.reflected_radicand is not None:
            out["reflected_radicand"] = str(self.reflected_radicand)
        out["report"] = self.report.as_dict()
        return out


def _kernel_or_none(n: int, budget: FactorBudget | None) -> int | None:
    try:
        return squarefree_kernel(n, budget)
    except FactorizationTimeout:
        return None


def _witness(label, radicand, cubic, reflected, budget, target=None) -> FamilyWitness:
    report = splitting_field_unramified(cubic, budget=budget)
    if not report.unramified:
        bad = [c.p for c in report.checked_primes if c.totally_ramified]
        raise TripleError(f"witness cubic {tuple(cubic)} is totally ramified at {bad}", label)
    return FamilyWitness(
        label=label,
        radicand_real=radicand,
        witness_cubic=DepressedCubic(*cubic),
        report=report,
        reflected_radicand=reflected,
        radicand_real_kernel=_kernel_or_none(radicand, budget),
        target=target,
    )


def t_of(n: int) -> int:
    return n * (3888 * n * n + 108 * n + 1)


def prop24_radicand(t: int, *, reflect: bool = False, budget: FactorBudget | None = None) -> FamilyWitness:
    """Witness for 3 | h(Q(sqrt(3t(3888t^2 + 108t + 1)))), t != 0 (mod 3).

    For t < 0 the radicand is negative and the field imaginary.
    """
    if t == 0 or t % 3 == 0:
        raise ValueError(f"t must be nonzero and prime to 3, got {t}")
    radicand = 3 * t_of(t)
    reflected = scholz_reflect(radicand, budget) if reflect and radicand > 0 else None
    return _witness("prop24", radicand, (3 * (108 * t + 1), 2), reflected, budget)


def prop25_radicand(t: int, *, budget: FactorBudget | None = None) -> FamilyWitness:
    """Witness for 3 | h(Q(sqrt(1 - 2916t^3))) via Q(sqrt(3(2916t^3 - 1)))."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return _witness("prop25", 3 * (2916 * t**3 - 1), (27 * t, 1), 1 - 2916 * t**3, budget)


def theorem_k_witness(k: int, t: int, *, budget: FactorBudget | None = None) -> FamilyWitness:
    if t < 1 or k < 1:
        raise ValueError(f"need t, k >= 1, got t={t}, k={k}")
    return _witness("theorem-k", 3 * (2916 * t**3 - k * k), (27 * t, k), k * k - 2916 * t**3, budget)


def scholz_reflect(radicand: int, budget: FactorBudget | None = None) -> int:
    """Squarefree radicand of the reflected field Q(sqrt(-3 * radicand))."""
    if radicand <= 0 or is_square(radicand):
        raise ValueError(f"reflection needs a positive non-square radicand, got {radicand}")
    return squarefree_kernel(-3 * radicand, budget)


def validate_k(k: int, budget: FactorBudget | None = None) -> tuple[bool, str]:
    if k < 1:
        return False, "k < 1"
    if not is_cubefree(k, budget):
        return False, "k is not cube-free"
    if k % 9 != 1:
        return False, "k ≢ 1 (mod 9)"
    if math.gcd(k, T_RESIDUE) != 1:
        return False, "gcd(k, 3997) ≠ 1"
    return True, "ok"


def _candidate_problem(k: int, n: int) -> str | None:
    t = t_of(n)
    if not is_irreducible((27 * t, k)):
        return "f_t reducible"
    if is_square(27 * (2916 * t**3 - k * k)):
        return "D(f_t) is a perfect square"
    return None


def search_n(k: int, start: int = 1, limit: int = 10**6) -> tuple[int, list[tuple[int, str]]]:
    """First admissible n >= start and the rejected candidates before it.

    ``limit`` caps the number of candidates in the residue class examined.
    """
    ok, reason = validate_k(k)
    if not ok:
        raise ValueError(reason)
    r, m = crt_pair(2, 9, 1, k)
    n = r + m * max(0, -(-(start - r) // m))
    if n < 1:
        n += m
    rejected = []
    for _ in range(limit):
        problem = _candidate_problem(k, n)
        if problem is None:
            return n, rejected
        rejected.append((n, problem))
        n += m
    raise RuntimeError(f"no admissible n among {limit} candidates from {start}")


def next_n(k: int, start: int = 1, limit: int = 10**6) -> int:
    return search_n(k, start, limit)[0]


@dataclass
class TripleCertificate:
    k: int
    n: int
    t_n: int
    d: int
    entries: list[FamilyWitness]
    congruence_check: bool
    all_checks: bool
    flags: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "k": str(self.k),
            "n": str(self.n),
            "t_n": str(self.t_n),
            "d": str(self.d),
            "congruence_check": self.congruence_check,
            "all_checks": self.all_checks,
            "flags": list(self.flags),
            "entries": [e.as_dict() for e in self.entries],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False, **kwargs)


def _congruence(k: int, t: int) -> bool:
    # t_n = 7 * 571 (mod k), so 27 t_n is prime to k
    return (t - T_RESIDUE) % k == 0 and math.gcd(27 * t, k) == 1


def make_triple(k: int, n: int, budget: FactorBudget | None = DEFAULT_CERT_BUDGET) -> TripleCertificate:
    ok, reason = validate_k(k, budget)
    if not ok:
        raise TripleError(reason, "k")
    if n < 1 or n % 9 != 2:
        raise TripleError(f"n = {n} is not 2 (mod 9)", "n")
    if (n - 1) % k:
        raise TripleError(f"n = {n} is not 1 (mod {k})", "n")
    problem = _candidate_problem(k, n)
    if problem is not None:
        raise TripleError(problem, "theorem-k")
    t = t_of(n)
    d = -2916 * t**3
    try:
        first = _witness("prop24", 3 * t, (3 * (108 * n + 1), 2), d, budget, TARGETS[0])
        second = _witness("prop25", 3 * (2916 * t**3 - 1), (27 * t, 1), d + 1, budget, TARGETS[1])
        third = _witness("theorem-k", 3 * (2916 * t**3 - k * k), (27 * t, k), d + k * k, budget, TARGETS[2])
    except CubicHypothesisError as exc:
        raise TripleError(str(exc)) from exc
    entries = [first, second, third]
    congruence = _congruence(k, t)
    flags = [FLAG_DIRECT]
    if k == 1:
        flags.append(FLAG_DEGENERATE)
    all_checks = congruence and all(
        e.report.unramified and e.report.irreducible and not e.report.disc_is_square for e in entries
    )
    return TripleCertificate(k, n, t, d, entries, congruence, all_checks, flags)


# -- verification -------------------------------------------------------------


@dataclass
class AuditItem:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: str = ""

    def as_dict(self) -> dict:
        return {"item": self.name, "status": self.status, "detail": self.detail}


@dataclass
class AuditReport:
    items: list[AuditItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(i.status != "fail" for i in self.items)

    def failures(self) -> list[AuditItem]:
        return [i for i in self.items if i.status == "fail"]

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.items.append(AuditItem(name, "pass" if passed else "fail", "" if passed else detail))
        return passed

    def skip(self, name: str, detail: str):
        self.items.append(AuditItem(name, "skipped", detail))

    def as_dict(self) -> dict:
        return {"ok": self.ok, "items": [i.as_dict() for i in self.items]}


def _get(obj, key, path, kind=dict):
    if not isinstance(obj, dict):
        raise CertificateParseError(path, "expected an object")
    if key not in obj:
        raise CertificateParseError(f"{path}.{key}", "missing field")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise CertificateParseError(f"{path}.{key}", f"expected {kind.__name__}")
    return value


def _int(obj, key, path) -> int:
    raw = _get(obj, key, path, str)
    body = raw[1:] if raw.startswith("-") else raw
    if not body.isdigit() or not body.isascii():
        raise CertificateParseError(f"{path}.{key}", f"not a decimal integer: {raw!r}")
    return int(raw)


def _bool(obj, key, path) -> bool:
    return _get(obj, key, path, bool)


def _parse_entry(e, path) -> dict:
    out = {
        "label": _get(e, "label", path, str),
        "radicand_real": _int(e, "radicand_real", path),
        "cubic": DepressedCubic(
            _int(_get(e, "witness_cubic", path), "a", f"{path}.witness_cubic"),
            _int(_get(e, "witness_cubic", path), "b", f"{path}.witness_cubic"),
        ),
        "reflected": _int(e, "reflected_radicand", path) if "reflected_radicand" in e else None,
        "kernel": _int(e, "radicand_real_kernel", path) if "radicand_real_kernel" in e else None,
    }
    rep = _get(e, "report", path)
    rpath = f"{path}.report"
    primes = []
    for i, c in enumerate(_get(rep, "checked_primes", rpath, list)):
        cpath = f"{rpath}.checked_primes[{i}]"
        primes.append((_int(c, "p", cpath), _bool(c, "totally_ramified", cpath), _get(c, "condition", cpath, str)))
    out["report"] = {
        "disc": _int(rep, "disc", rpath),
        "disc_is_square": _bool(rep, "disc_is_square", rpath),
        "irreducible": _bool(rep, "irreducible", rpath),
        "normalized": _bool(rep, "normalized", rpath),
        "checked_primes": primes,
        "unramified": _bool(rep, "unramified", rpath),
    }
    return out


def parse_certificate(data: dict | str) -> dict:
    """Decode certificate JSON into plain Python values, or raise CertificateParseError."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise CertificateParseError("$", f"invalid JSON: {exc}") from exc
    if isinstance(data, TripleCertificate):
        data = data.as_dict()
    cert = {key: _int(data, key, "$") for key in ("k", "n", "t_n", "d")}
    cert["congruence_check"] = _bool(data, "congruence_check", "$")
    cert["all_checks"] = _bool(data, "all_checks", "$")
    cert["flags"] = list(data.get("flags", []))
    entries = _get(data, "entries", "$", list)
    cert["entries"] = [_parse_entry(e, f"$.entries[{i}]") for i, e in enumerate(entries)]
    return cert


def _audit_entry(audit: AuditReport, i: int, e: dict, expect: dict, budget) -> bool:
    """Checks for one entry; returns whether the stored cubic passes every
    hypothesis and ramification test."""
    tag = f"entry {i + 1} ({expect['label']})"
    audit.check(f"{tag} label", e["label"] == expect["label"], f"label {e['label']!r}")
    audit.check(f"{tag} radicand", e["radicand_real"] == expect["radicand"], "radicand mismatch")
    audit.check(
        f"{tag} cubic",
        tuple(e["cubic"]) == expect["cubic"],
        f"witness cubic {tuple(e['cubic'])} != expected {expect['cubic']}",
    )
    if e["radicand_real"] == 0 or e["cubic"] == (0, 0) or discriminant(e["cubic"]) == 0:
        audit.check(f"{tag} field of D(f)", False, "zero radicand or discriminant")
        return False
    audit.check(
        f"{tag} field of D(f)",
        same_square_class(e["radicand_real"], discriminant(e["cubic"])),
        "radicand mismatch: Q(sqrt(radicand)) != Q(sqrt(D(f)))",
    )
    if e["reflected"] is None or e["reflected"] == 0:
        audit.check(f"{tag} reflection", False, "reflected radicand missing")
    else:
        audit.check(
            f"{tag} reflection",
            same_square_class(e["reflected"], -3 * e["radicand_real"]),
            "reflected radicand is not in the class of -3 * radicand",
        )
        audit.check(
            f"{tag} target {expect['target']}",
            same_square_class(e["reflected"], expect["target_value"]),
            f"reflected field is not Q(sqrt({expect['target']}))",
        )
    if e["kernel"] is not None:
        try:
            sqfree = squarefree_kernel(e["kernel"], budget) == e["kernel"] if e["kernel"] else False
        except FactorizationTimeout:
            audit.skip(f"{tag} kernel", "kernel too large to re-factor within budget")
        else:
            audit.check(
                f"{tag} kernel",
                sqfree and same_square_class(e["kernel"], e["radicand_real"]),
                "stored kernel is not the squarefree kernel of the radicand",
            )

    # Re-run every hypothesis and the ramification test on the stored cubic.
    stored = e["report"]
    f = e["cubic"]
    disc = discriminant(f)
    audit.check(f"{tag} disc", stored["disc"] == disc, f"stored disc {stored['disc']} != {disc}")
    try:
        fresh = splitting_field_unramified(f, budget=budget)
    except CubicHypothesisError as exc:
        audit.check(f"{tag} hypotheses", False, f"{type(exc).__name__}: {exc}")
        return False
    except FactorizationTimeout as exc:
        audit.skip(f"{tag} hypotheses", str(exc))
        return False
    audit.check(f"{tag} hypotheses", True)
    audit.check(
        f"{tag} stored flags",
        (stored["disc_is_square"], stored["irreducible"], stored["normalized"]) == (False, True, True),
        "stored hypothesis flags disagree with recomputation",
    )
    fresh_primes = [(c.p, c.totally_ramified, c.condition) for c in fresh.checked_primes]
    audit.check(
        f"{tag} checked primes",
        stored["checked_primes"] == fresh_primes,
        f"stored {stored['checked_primes']} != recomputed {fresh_primes}",
    )
    audit.check(
        f"{tag} unramified",
        fresh.unramified,
        "ramification re-check fails: "
        + ", ".join(f"{c.p} ({c.condition})" for c in fresh.checked_primes if c.totally_ramified),
    )
    audit.check(
        f"{tag} stored unramified flag",
        stored["unramified"] == fresh.unramified,
        "stored unramified flag disagrees with recomputation",
    )
    return fresh.unramified


def verify_certificate(data, budget: FactorBudget | None = DEFAULT_CERT_BUDGET) -> AuditReport:
    """Re-derive a triple certificate from (k, n) and audit every stored value.

    Stored booleans are only compared against recomputed ones, never used.
    Malformed input raises CertificateParseError.
    """
    cert = parse_certificate(data)
    audit = AuditReport()
    k, n = cert["k"], cert["n"]
    ok, reason = validate_k(k, budget) if k >= 1 else (False, "k < 1")
    audit.check("k valid", ok, reason)
    audit.check("n residue", n >= 1 and n % 9 == 2 and k >= 1 and (n - 1) % k == 0,
                "n must be 2 (mod 9) and 1 (mod k)")
    t = t_of(n)
    d = -2916 * t**3
    audit.check("t_n", cert["t_n"] == t, f"t_n mismatch: stored {cert['t_n']}, expected {t}")
    audit.check("d", cert["d"] == d, f"d mismatch: stored {cert['d']}, expected {d}")
    audit.check("d < 0 and d + k^2 < 0", d + k * k < 0, "d + k^2 is not negative")
    if ok:
        problem = _candidate_problem(k, n)
        audit.check("direct checks on n", problem is None, problem or "")
    degenerate = FLAG_DEGENERATE in cert["flags"]
    audit.check("degenerate flag", degenerate == (k == 1), "degenerate flag must be set iff k = 1")

    expected = [
        dict(label="prop24", radicand=3 * t, cubic=(3 * (108 * n + 1), 2), target="d", target_value=d),
        dict(label="prop25", radicand=3 * (2916 * t**3 - 1), cubic=(27 * t, 1), target="d+1", target_value=d + 1),
        dict(label="theorem-k", radicand=3 * (2916 * t**3 - k * k), cubic=(27 * t, k), target="d+k^2",
             target_value=d + k * k),
    ]
    entries_ok = audit.check("entry count", len(cert["entries"]) == 3, f"{len(cert['entries'])} entries")
    if entries_ok:
        for i, (e, expect) in enumerate(zip(cert["entries"], expected)):
            entries_ok &= _audit_entry(audit, i, e, expect, budget)
    congruence = k >= 1 and _congruence(k, t)
    audit.check("congruence", congruence, "t_n is not 3997 (mod k) or shares a factor with k")
    audit.check(
        "stored congruence_check",
        cert["congruence_check"] == congruence,
        "stored congruence_check disagrees with recomputation",
    )
    all_checks = congruence and entries_ok and ok
    audit.check(
        "stored all_checks",
        cert["all_checks"] == all_checks,
        f"stored all_checks={cert['all_checks']} but recomputed {all_checks}",
    )
    return audit

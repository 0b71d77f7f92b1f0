"""Acceptance gate: one check per criterion, each with its runtime bound.

Run with pytest (the pass/fail lines appear in the terminal summary) or
directly: ``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time

import pytest

from cubictriples import sweeps
from cubictriples.families import FLAG_DEGENERATE, make_triple, verify_certificate
from cubictriples.quadforms import QForm, class_number_imaginary, reduced_forms

RESULTS: dict[int, str] = {}


def _timed(limit, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    within = elapsed < limit
    return ok and within, f"{detail}; {elapsed:.2f}s (limit {limit:g}s{'' if within else ', EXCEEDED'})"


def criterion_1():
    def body():
        forms = set(reduced_forms(-23))
        h23, h4 = class_number_imaginary(-23), class_number_imaginary(-4)
        ok = h23 == 3 and forms == {QForm(1, 1, 6), QForm(2, 1, 3), QForm(2, -1, 3)} and h4 == 1
        return ok, f"h(-23)={h23} forms={sorted(map(tuple, forms))} h(-4)={h4}"
    return "oracle sanity", _timed(1, body)


def criterion_2():
    def body():
        r = sweeps.prop25_sweep(range(1, 26))
        return r.ok and r.stats["divisible"] == 25, f"{r.stats['divisible']}/25 divisible by 3"
    return "h(1 - 2916 t^3) sweep, t = 1..25", _timed(120, body)


def criterion_3():
    def body():
        r = sweeps.prop24_sweep([1, 2, 4, 5, 7, 8, 10, 11])
        return r.ok and r.stats["divisible"] == 8, f"{r.stats['divisible']}/8 narrow class numbers divisible by 3"
    return "h+(3t(3888t^2 + 108t + 1)) sweep", _timed(300, body)


def criterion_4():
    def body():
        r = sweeps.scholz_scan(300)
        return r.ok, f"{r.stats['cases']} squarefree d, {len(r.violations)} violations"
    return "3-rank reflection, d <= 300", _timed(120, body)


def criterion_5():
    def body():
        r = sweeps.lemma_fuzz(200)
        s = r.stats
        ok = r.ok and s["checked"] >= 100
        return ok, (f"{s['checked']} qualifying cubics checked ({s['distinct_fields']} fields), "
                    f"{s['skipped']} skipped, {s['violations']} violations")
    return "local criteria vs class-group oracle, |a|, |b| <= 200", _timed(600, body)


def criterion_6():
    def body():
        notes = []
        ok = True
        for k, n in ((10, 11), (19, 20)):
            cert = make_triple(k, n)
            data = json.loads(cert.to_json())
            audit = verify_certificate(data)
            ok &= cert.all_checks and audit.ok
            t_bad = dict(data, t_n=str(int(data["t_n"]) + 1))
            caught_t = any(i.name == "t_n" for i in verify_certificate(t_bad).failures())
            cubic_bad = json.loads(cert.to_json())
            cubic_bad["entries"][2]["witness_cubic"] = {"a": str(27 * cert.t_n), "b": str(k + 9)}
            caught_cubic = not verify_certificate(cubic_bad).ok
            ok &= caught_t and caught_cubic
            notes.append(f"k={k} n={n} all_checks={cert.all_checks} reverified={audit.ok} "
                         f"tampered t_n caught={caught_t} tampered cubic caught={caught_cubic}")
        return ok, "; ".join(notes)
    return "triple certificates", _timed(10, body)


def criterion_7():
    def body():
        cert = make_triple(1, 2)
        e = cert.entries
        ok = (cert.t_n == 31538 and FLAG_DEGENERATE in cert.flags
              and e[1].reflected_radicand == e[2].reflected_radicand and e[1].witness_cubic == e[2].witness_cubic)
        return ok, f"t_2={cert.t_n} flags={cert.flags}"
    return "degenerate k = 1", _timed(10, body)


def criterion_8():
    def body():
        cmd = [sys.executable, "-m", "cubictriples", "triples", "--k", "10", "--count", "3", "--seed", "0"]
        runs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
        ok = runs[0] == runs[1] and len(runs[0].splitlines()) == 3
        return ok, f"{len(runs[0])} bytes, identical={runs[0] == runs[1]}"
    return "deterministic triples output", _timed(60, body)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 9)}


def check(i):
    name, (ok, detail) = CRITERIA[i]()
    RESULTS[i] = f"[{'PASS' if ok else 'FAIL'}] criterion {i}: {name}: {detail}"
    print(RESULTS[i])
    return ok


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    assert check(i), RESULTS[i]


if __name__ == "__main__":
    results = [check(i) for i in sorted(CRITERIA)]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)

"""Acceptance gate: one test per criterion, each printing a visible
pass/fail line with its check counts and elapsed time.

All criteria are property-based at desk scale.  "Zero violations" means no
law instance was definitively refuted; bounded checks may stay unknown and
their rate is reported where the criterion asks for it.
"""

import sys
import time

import pytest

from degreelab.laws import SUITES, machine_format, run_suites
from degreelab.pca import Pca

BOUNDS = {
    "pca-laws": 10.0,
    "bracket-abstraction": 30.0,
    "pairing": 5.0,
    "medvedev-coheyting": 30.0,
    "muchnik-heyting": 60.0,
    "adjoint-suites": 60.0,
    "beck-chevalley": 30.0,
    "isomorphism-suites": 90.0,
    "extsw-dialectica": 30.0,
    "extasm-category": 20.0,
}


@pytest.fixture(scope="module")
def structure():
    return Pca(oracles={"o1": {}})


def _announce(number, name, report, elapsed, extra=""):
    line = (
        f"ACCEPTANCE {number} [{name}]: "
        f"{'PASS' if report.violations == 0 else 'FAIL'} "
        f"({report.checked} checks, {report.violations} violations, "
        f"{report.unknowns} unknown, {elapsed:.2f}s{extra})\n"
    )
    sys.__stdout__.write(line)
    sys.__stdout__.flush()


def _run(number, name, structure, extra_fn=None):
    start = time.monotonic()
    report = SUITES[name](structure, None, 1)
    elapsed = time.monotonic() - start
    extra = extra_fn(report) if extra_fn else ""
    _announce(number, name, report, elapsed, extra)
    assert report.violations == 0, f"criterion {number}: {report.violations} violations"
    assert elapsed < BOUNDS[name], f"criterion {number}: {elapsed:.1f}s over {BOUNDS[name]}s"
    return report


def test_criterion_01_pca_laws(structure):
    report = _run(1, "pca-laws", structure)
    assert report.checked > 50_000  # the full pair space plus the S-law family


def test_criterion_02_bracket_abstraction(structure):
    report = _run(2, "bracket-abstraction", structure)
    assert report.checked == 471 * 22  # every body times every argument


def test_criterion_03_pairing(structure):
    report = _run(3, "pairing", structure)
    assert report.unknowns == 0  # pairing never times out on normal arguments


def test_criterion_04_medvedev_coheyting(structure):
    report = _run(4, "medvedev-coheyting", structure)
    assert report.unknowns == 0
    cases = {r.case for r in report.records}
    assert {"bottom-least", "top-greatest", "meet-below-left", "meet-below-right",
            "meet-greatest-lower", "join-above-left", "join-above-right",
            "join-least-upper", "subtract-to-join", "join-to-subtract"} <= cases


def test_criterion_05_muchnik_heyting(structure):
    def rate(report):
        agree = next(r for r in report.records if r.case == "adjunction-agreement")
        return f", unknown rate {agree.unknowns}/{agree.checked}"

    report = _run(5, "muchnik-heyting", structure, rate)
    agree = next(r for r in report.records if r.case == "adjunction-agreement")
    assert agree.checked == 7 ** 3  # all triples over the singleton instance family


def test_criterion_06_adjoint_suites(structure):
    report = _run(6, "adjoint-suites", structure)
    cases = {r.case for r in report.records}
    assert "forall-transpose" in cases and "exists-transpose" in cases
    assert "pure-forall-transpose" in cases
    assert "pure-forall-drW-transpose" in cases and "pure-forall-dextW-transpose" in cases


def test_criterion_07_beck_chevalley(structure):
    report = _run(7, "beck-chevalley", structure)
    cases = {r.case for r in report.records}
    assert cases == {"mass-forall", "pure-exists"}


def test_criterion_08_isomorphism_suites(structure):
    report = _run(8, "isomorphism-suites", structure)
    cases = {r.case for r in report.records}
    for stem in ("medvedev", "muchnik", "W", "SW", "rW", "tW", "dialectica"):
        assert any(c.startswith(stem) and c.endswith("roundtrip") for c in cases), stem
    assert report.unknowns == 0


def test_criterion_09_extsw_dialectica(structure):
    report = _run(9, "extsw-dialectica", structure)
    assert report.unknowns == 0  # every compared witness decided on both sides


def test_criterion_10_extasm_category(structure):
    report = _run(10, "extasm-category", structure)
    cases = {r.case for r in report.records}
    assert {"identity-laws", "associativity", "mediator-checks",
            "triangle-left", "triangle-right", "mediator-unique"} <= cases


def test_criterion_11_determinism(structure):
    start = time.monotonic()
    single = machine_format(run_suites(None, structure, None, workers=1))
    multi = machine_format(run_suites(None, structure, None, workers=4))
    elapsed = time.monotonic() - start
    ok = single == multi
    sys.__stdout__.write(
        f"ACCEPTANCE 11 [determinism]: {'PASS' if ok else 'FAIL'} "
        f"(byte-identical machine reports across 1 and 4 workers, {elapsed:.2f}s)\n"
    )
    sys.__stdout__.flush()
    assert ok

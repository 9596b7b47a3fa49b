import subprocess
import sys
from pathlib import Path

import pytest

from degreelab.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, out


class TestCheck:
    def test_all_holds_exit_zero(self, capsys):
        code, out = run(["check", FIXTURES / "holds.inst"], capsys)
        assert code == 0
        assert out.count("HOLDS") == 3

    def test_refuted_exit_one_with_counterexample(self, capsys):
        code, out = run(["check", FIXTURES / "refuted.inst"], capsys)
        assert code == 1
        assert "counterexample" in out

    def test_unknown_exit_two(self, capsys):
        code, out = run(["check", FIXTURES / "unknown.inst"], capsys)
        assert code == 2

    def test_shape_mismatch_exit_three(self, capsys):
        code = main(["check", str(FIXTURES / "shape_error.inst")])
        assert code == 3

    def test_parse_error_exit_three(self, tmp_path, capsys):
        bad = tmp_path / "bad.inst"
        bad.write_text("carrier X = [K K]\n")
        assert main(["check", str(bad)]) == 3

    def test_machine_format_reparses(self, capsys, tmp_path):
        code, out = run(["--format", "machine", "check", FIXTURES / "holds.inst"], capsys)
        assert code == 0
        from degreelab.instance import parse_instance

        inst = parse_instance(out)
        assert [r.status for r in inst.results] == ["holds"] * 3

    def test_machine_format_is_deterministic_across_workers(self, capsys):
        outs = []
        for workers in ("1", "4"):
            code, out = run(["--format", "machine", "--workers", workers,
                             "check", FIXTURES / "holds.inst"], capsys)
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]

    def test_claim_selection(self, capsys):
        code, out = run(["check", FIXTURES / "holds.inst", "refl"], capsys)
        assert code == 0
        assert "refl" in out and "vacuous_top" not in out


class TestSearch:
    def test_found_pipeline_re_checks(self, capsys, tmp_path):
        code, out = run(["--witness-size", "3", "--format", "machine",
                         "search", FIXTURES / "holds.inst", "refl"], capsys)
        assert code == 0
        combined = tmp_path / "combined.inst"
        combined.write_text((FIXTURES / "holds.inst").read_text() + out)
        code2, out2 = run(["check", combined, "refl_check"], capsys)
        assert code2 == 0 and "HOLDS" in out2

    def test_exhausted_prints_bound(self, capsys):
        code, out = run(["--witness-size", "3", "search",
                         FIXTURES / "refuted.inst", "impossible"], capsys)
        assert code == 1
        assert "exhausted" in out and "size 3" in out


class TestLattice:
    def test_join_prints_family(self, capsys):
        code, out = run(["lattice", FIXTURES / "coheyting_demo.inst",
                         "--op", "join", "--args", "psi", "rho"], capsys)
        assert code == 0
        assert out.startswith("family join_result over X")

    def test_law_synthesis_and_recheck(self, capsys):
        code, out = run(["lattice", FIXTURES / "coheyting_demo.inst",
                         "--op", "law", "--law", "subtract_intro",
                         "--args", "wfst", "--claim", "to_sub"], capsys)
        assert code == 0
        assert "result to_sub holds" in out

    def test_implication_denied_for_uniform_order(self, capsys):
        code = main(["lattice", str(FIXTURES / "coheyting_demo.inst"),
                     "--doc", "M", "--op", "implies", "--args", "phi", "psi"])
        assert code == 3

    def test_subtract_reports_universe(self, capsys):
        code, out = run(["lattice", FIXTURES / "coheyting_demo.inst",
                         "--op", "subtract", "--args", "phi", "psi",
                         "--universe", "U"], capsys)
        assert code == 0
        assert "relative to universe" in out


class TestIso:
    def test_medvedev_roundtrip_fixture(self, capsys):
        code, _ = run(["iso", FIXTURES / "medvedev_roundtrip.inst",
                       "--map", "medvedev", "--direction", "forward",
                       "--claim", "comp_claim"], capsys)
        assert code == 0
        code, _ = run(["iso", FIXTURES / "medvedev_roundtrip.inst",
                       "--map", "medvedev", "--direction", "backward",
                       "--claim", "mass_claim"], capsys)
        assert code == 0

    def test_weihrauch_transposition_fixture(self, capsys):
        code, _ = run(["iso", FIXTURES / "weihrauch_transposition.inst",
                       "--map", "weihrauch", "--direction", "forward",
                       "--claim", "ctrans"], capsys)
        assert code == 0
        code, _ = run(["iso", FIXTURES / "weihrauch_transposition.inst",
                       "--map", "weihrauch", "--direction", "backward",
                       "--claim", "wclaim"], capsys)
        assert code == 0

    def test_extsw_dialectica_fixture(self, capsys):
        code, out = run(["iso", FIXTURES / "extsw_dialectica.inst",
                         "--map", "extsw_d", "--claim", "ext_claim"], capsys)
        assert code == 0
        assert "agreement holds" in out


class TestComplete:
    def test_small_fiber_with_hasse(self, capsys):
        code, out = run(["--witness-size", "2", "complete", FIXTURES / "holds.inst",
                         "--object", "X", "--doc", "T", "--kind", "forall",
                         "--klass", "full", "--index-bound", "2"], capsys)
        assert code == 0
        assert "16 objects" in out
        assert "hasse" in out


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "degreelab.cli", "check", str(FIXTURES / "holds.inst")],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0

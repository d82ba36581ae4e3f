"""Command line behaviour: output shapes, exit codes, error channels."""

import json
import pathlib
import shutil
import subprocess
import sys
from importlib import resources

import pytest

from spunnormal.cli import main

DATA = pathlib.Path(__file__).parent / "data"
TOY = str(DATA / "toy_n1.json")
FIG8 = str(DATA / "fig8.json")
TWO_FUSION = str(resources.files("spunnormal") / "data" / "two_fusion.json")

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


def table_lines(out):
    """Header and data rows of the rendered table, after the preamble."""
    lines = out.splitlines()
    start = next(i for i, ln in enumerate(lines) if ln.startswith("#"))
    return lines[start:]


class TestVertices:
    def test_toy_table_has_three_rows(self, capsys):
        code, out, err = run(capsys, "vertices", "--input", TOY)
        assert code == 0
        lines = table_lines(out)
        assert lines[0].split() == ["#", "quad", "type", "weights", "slopes"]
        assert len(lines) == 1 + 3
        assert sorted(ln.split()[1] for ln in lines[1:]) == ["0", "1", "2"]
        assert "count: 3" in out

    def test_toy_json(self, capsys):
        code, obj, _ = run_json(capsys, "vertices", "--input", TOY)
        assert code == 0
        assert obj["count"] == 3
        assert obj["tetrahedra"] == 1 and obj["cusps"] == 0
        assert all(s["weights"] == [1] for s in obj["surfaces"])
        assert {s["quad_type"] for s in obj["surfaces"]} == {"0", "1", "2"}

    def test_two_fusion_single_cone_rays(self, capsys):
        code, obj, _ = run_json(
            capsys, "vertices", "--input", TWO_FUSION, "--quad-type", "0" * 8
        )
        assert code == 0
        assert obj["count"] == 3
        weights = sorted(tuple(s["weights"]) for s in obj["surfaces"])
        assert weights == sorted(
            [
                (0, 1, 0, 1, 1, 0, 0, 0),
                (0, 2, 0, 0, 0, 1, 0, 2),
                (1, 0, 1, 0, 0, 0, 1, 0),
            ]
        )

    def test_fig8_slope_column(self, capsys):
        code, out, _ = run(capsys, "vertices", "--input", FIG8, "--quad-type", "00")
        assert code == 0
        row = table_lines(out)[1].split()
        assert row[1:] == ["00", "1,2", "-4/1"]

    def test_fundamental_flag(self, capsys):
        code, obj, _ = run_json(
            capsys, "vertices", "--input", TOY, "--fundamental"
        )
        assert code == 0
        assert obj["kind"] == "fundamental"
        assert obj["count"] == 3

    def test_cap_refusal(self, capsys):
        code, out, err = run(
            capsys, "vertices", "--input", TWO_FUSION, "--cap", "4"
        )
        assert code == 1
        assert "refusing" in err and out == ""


class TestCriterion:
    def test_fig8_satisfied(self, capsys):
        code, out, _ = run(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "00", "--surface", "1,2",
        )
        assert code == 0
        assert "verdict: satisfied" in out
        assert "slopes: [\"-4/1\"]" in out

    def test_fig8_json_evidence(self, capsys):
        code, obj, _ = run_json(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "00", "--surface", "1,2",
        )
        assert code == 0
        assert obj["verdict"] == "satisfied"
        assert obj["evidence"]["kernel_dimension"] == 1
        assert obj["evidence"]["slopes"] == ["-4/1"]

    def test_not_in_kernel_exits_3(self, capsys):
        code, out, _ = run(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "00", "--surface", "1,1",
        )
        assert code == 3
        assert "verdict: criterion not met" in out
        assert "q-matching" in out

    def test_negative_weight_is_usage_error(self, capsys):
        code, out, err = run(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "00", "--surface", "-1,2",
        )
        assert code == 1 and "error:" in err


class TestRelative:
    def test_two_fusion_kernel_generator(self, capsys):
        code, obj, _ = run_json(
            capsys, "relative", "--input", TWO_FUSION, "--quad-type", "0" * 8,
            "--fill", "1=-1/2", "--fill", "2=-1/1",
        )
        assert code == 0
        assert obj["verdict"] == "satisfied"
        assert obj["weights"] == [2, 4, 2, 2, 2, 1, 2, 2]
        assert obj["evidence"]["gamma0"] == "3/2"
        assert obj["evidence"]["relative_rank"] == 7

    def test_two_fusion_table_mentions_gamma0(self, capsys):
        code, out, _ = run(
            capsys, "relative", "--input", TWO_FUSION, "--quad-type", "0" * 8,
            "--fill", "1=-1/2", "--fill", "2=-1/1",
        )
        assert code == 0
        assert "gamma0: 3/2" in out

    def test_explicit_surface(self, capsys):
        code, obj, _ = run_json(
            capsys, "relative", "--input", TWO_FUSION, "--quad-type", "0" * 8,
            "--surface", "4,8,4,4,4,2,4,4",
            "--fill", "1=-1/2", "--fill", "2=-1/1",
        )
        assert code == 0
        assert obj["evidence"]["gamma0"] == "3/2"

    def test_fig8_no_fillings_needed(self, capsys):
        code, obj, _ = run_json(
            capsys, "relative", "--input", FIG8, "--quad-type", "00"
        )
        assert code == 0
        assert obj["weights"] == [1, 2]
        assert obj["evidence"]["gamma0"] == "-4/1"

    def test_wrong_coverage_is_usage_error(self, capsys):
        code, out, err = run(
            capsys, "relative", "--input", TWO_FUSION, "--quad-type", "0" * 8,
            "--fill", "1=-1/2",
        )
        assert code == 1
        assert "every cusp except cusp 0" in err

    def test_multidimensional_kernel_not_met(self, capsys, tmp_path):
        # A system with no constraints at all has a fat kernel.
        src = json.loads((DATA / "fig8.json").read_text())
        src["edges"] = []
        f = tmp_path / "loose.json"
        f.write_text(json.dumps(src))
        code, obj, _ = run_json(
            capsys, "relative", "--input", str(f), "--quad-type", "00"
        )
        assert code == 3
        assert "dimension 2, expected 1" in obj["failures"][0]

    def test_bad_fill_token(self, capsys):
        for bad in ("x=1/2", "1=1/2/3", "1:1/2", "1=2/2"):
            code, out, err = run(
                capsys, "relative", "--input", FIG8, "--quad-type", "00",
                "--fill", bad,
            )
            assert code == 1, bad
            assert "bad --fill" in err


class TestFirstOrder:
    def test_fig8_degeneration(self, capsys):
        code, obj, _ = run_json(
            capsys, "first-order", "--input", FIG8, "--degeneration", "1,2"
        )
        assert code == 0
        assert obj["folded_index"] == 0
        assert obj["variables"] == ["b2"]
        assert obj["equations"] == ["b2^-1 = 1", "b2^1 = 1"]
        assert obj["trivially_inconsistent"] is False
        assert obj["purely_monomial"] is True
        assert obj["sign_solvable"] is True

    def test_fig8_table(self, capsys):
        code, out, _ = run(
            capsys, "first-order", "--input", FIG8, "--degeneration", "1,2"
        )
        assert code == 0
        assert "folded coordinate: b1" in out
        assert "  b2^-1 = 1" in out
        assert "sign solvable: yes" in out

    def test_inconsistent_system(self, capsys, tmp_path):
        src = {
            "name": "pinch",
            "num_tetrahedra": 2,
            "edges": [
                {"a": [0, 0], "b": [1, 1], "c": -1},
                {"a": [1, -1], "b": [0, 0], "c": 1},
            ],
            "cusps": [],
        }
        f = tmp_path / "pinch.json"
        f.write_text(json.dumps(src))
        code, obj, _ = run_json(
            capsys, "first-order", "--input", str(f), "--degeneration", "1,1"
        )
        assert code == 0
        assert obj["equations"] == ["1 = -1", "b2^-1 = 1"]
        assert obj["trivially_inconsistent"] is True
        assert obj["sign_solvable"] is False

    def test_non_kernel_degeneration_is_usage_error(self, capsys):
        code, out, err = run(
            capsys, "first-order", "--input", FIG8, "--degeneration", "1,0"
        )
        assert code == 1 and "kernel" in err


class TestErrorChannels:
    def test_missing_command(self, capsys):
        code, out, err = run(capsys)
        assert code == 1

    def test_unknown_flag(self, capsys):
        code, out, err = run(capsys, "vertices", "--input", TOY, "--bogus")
        assert code == 1

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "vertices", "--input", "/nonexistent.json")
        assert code == 2 and "data error" in err

    def test_malformed_json(self, capsys, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{not json")
        code, out, err = run(capsys, "vertices", "--input", str(f))
        assert code == 2 and "data error" in err

    def test_bad_quad_type(self, capsys):
        code, out, err = run(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "03", "--surface", "1,2",
        )
        assert code == 1 and "over {0,1,2}" in err

    def test_wrong_length_surface(self, capsys):
        code, out, err = run(
            capsys, "criterion", "--input", FIG8,
            "--quad-type", "00", "--surface", "1,2,3",
        )
        assert code == 1 and "expected 2" in err

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0


@pytest.mark.skipif(shutil.which("spun") is None, reason="entry point not on PATH")
def test_installed_entry_point():
    proc = subprocess.run(
        ["spun", "vertices", "--input", TOY, "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 3


def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "spunnormal.cli", "criterion", "--input", FIG8,
         "--quad-type", "00", "--surface", "1,2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "verdict: satisfied" in proc.stdout

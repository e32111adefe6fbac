"""
Tests for the contembed command line
"""

import json

import pytest

from contembed.cli import run


@pytest.fixture
def invoke(capsys):
    """Run the CLI and return (exit code, stdout, stderr)"""
    def _invoke(*argv):
        code = run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _invoke


class TestMapCommands:
    def test_eval(self, invoke):
        code, out, _ = invoke("map", "eval", "tent", "1/4")
        assert code == 0
        assert out.strip() == "1/2"

    def test_iterate_emit(self, invoke):
        code, out, _ = invoke("map", "iterate", "ex67", "2", "--emit")
        assert code == 0
        assert out.splitlines() == ["0\t0", "1/12\t3/4", "1/4\t1/4", "3/4\t3/4", "11/12\t1/4", "1\t1"]

    def test_compose_prints_normal_form(self, invoke):
        code, out, _ = invoke("map", "compose", "tent", "tent")
        assert code == 0
        assert out.strip() == "pl 0:0 1/4:1 1/2:0 3/4:1 1:0"

    def test_list_includes_builtins(self, invoke):
        code, out, _ = invoke("map", "list")
        assert code == 0
        assert "tent\tpl 0:0 1/2:1 1:0" in out.splitlines()


class TestExitCodes:
    def test_domain_error_exits_2(self, invoke):
        code, out, err = invoke("map", "parse", "pl 0:0 1/2:1 1:1")
        assert code == 2
        assert out == ""
        assert err.startswith("error: Plateau:")

    def test_unknown_builtin_exits_2(self, invoke):
        code, _, err = invoke("map", "eval", "no-such-map", "0")
        assert code == 2
        assert "MapSyntaxError" in err

    def test_missing_option_exits_1(self, invoke):
        code, _, _ = invoke("zigzag", "tent")
        assert code == 1

    def test_branch_out_of_range_exits_1(self, invoke):
        code, _, _ = invoke("zigzag", "tent", "--branch", "5")
        assert code == 1


class TestSearchCommands:
    def test_zigzag_witness(self, invoke):
        code, out, _ = invoke("zigzag", "ex67", "--branch", "1")
        assert code == 0
        assert out.strip() == "ZIGZAG witness a=0 e=1"

    def test_non_zigzag(self, invoke):
        code, out, _ = invoke("zigzag", "tent", "--branch", "0")
        assert code == 0
        assert out.strip() == "NON-ZIGZAG"

    def test_admissible(self, invoke):
        code, out, _ = invoke("permute", "admissible", "ex67", "0 2 1")
        assert code == 0
        assert out.strip() == "NOT ADMISSIBLE"

    def test_certificate_json(self, invoke):
        code, out, _ = invoke("access", "certificate", "--stages", "tent", "--branches", "1", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "certificate"
        assert doc["permutations"] == ["perm 0 1"]

    def test_topmost_graph_json(self, invoke):
        code, out, _ = invoke("permute", "topmost", "tent", "--branch", "0", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "graph"
        assert doc["permutation"] == "perm 1 0"
        assert [h["height"] for h in doc["horizontals"]] == [1, 0]


class TestEmbedCommands:
    def test_plan_writes_svg_and_plan(self, invoke, tmp_path):
        svg = tmp_path / "out" / "tent.svg"
        plan = tmp_path / "tent_plan.json"
        code, out, _ = invoke("--log-level", "ERROR", "embed", "plan", "--stages", "tent,tent",
                              "--topmost", "0,0", "--depth", "2", "--out", str(svg), "--plan-out", str(plan))
        assert code == 0
        assert "✅ nesting PASS" in out
        assert "probe x (" in out
        assert svg.read_text().count("<path") == 4
        assert json.loads(plan.read_text())["depth"] == 2

    def test_plan_with_short_branch_images(self, invoke, tmp_path):
        svg = tmp_path / "fig5f.svg"
        code, out, err = invoke("--log-level", "ERROR", "embed", "plan", "--stages", "fig5f",
                                "--topmost", "0", "--out", str(svg))
        assert "MeshTooCoarse" not in err
        assert code == 0
        assert "✅ nesting PASS" in out
        assert svg.exists()

    def test_depth_beyond_stages(self, invoke, tmp_path):
        code, _, _ = invoke("embed", "plan", "--stages", "tent", "--topmost", "0", "--depth", "3")
        assert code == 1

    def test_probe_saved_plan(self, invoke, tmp_path):
        plan = tmp_path / "plan.json"
        invoke("--log-level", "ERROR", "embed", "plan", "--stages", "tent", "--topmost", "0",
               "--plan-out", str(plan))
        code, out, _ = invoke("--log-level", "ERROR", "embed", "probe", str(plan))
        assert code == 0
        assert "PASS" in out and "FAIL" not in out

    def test_zigzag_stage_exits_2(self, invoke):
        code, _, err = invoke("embed", "plan", "--stages", "ex67", "--topmost", "1")
        assert code == 2
        assert "ZigzagObstruction" in err


class TestFigures:
    def test_report(self, invoke, tmp_path):
        code, out, _ = invoke("--log-level", "ERROR", "figures", "--out-dir", str(tmp_path))
        report = json.loads((tmp_path / "figures_report.json").read_text())
        assert report["kind"] == "figures"
        assert report["total"] == len(report["checks"]) == 10
        assert code == (0 if report["passed"] == report["total"] else 1)
        assert f"Results: {report['passed']}/{report['total']} passed" in out

    def test_all_fixtures_reproduce(self, invoke, tmp_path):
        code, _, _ = invoke("--log-level", "ERROR", "figures", "--out-dir", str(tmp_path))
        report = json.loads((tmp_path / "figures_report.json").read_text())
        assert [c["name"] for c in report["checks"] if not c["passed"]] == []
        assert code == 0

    def test_deterministic(self, invoke, tmp_path):
        invoke("--log-level", "ERROR", "figures", "--out-dir", str(tmp_path / "a"))
        invoke("--log-level", "ERROR", "figures", "--out-dir", str(tmp_path / "b"))
        assert (tmp_path / "a" / "figures_report.json").read_text() == \
            (tmp_path / "b" / "figures_report.json").read_text()


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])

"""Command-line client: artifacts, exit codes, manifests, budgets.

Every invocation here goes through ``cli.main`` with the default
in-process transport, so these are end-to-end runs of the same code
path a deployed server would execute.
"""

import json

import pytest

import cantorvis
from cantorvis import cli


@pytest.fixture(autouse=True)
def clean_budget_env(monkeypatch):
    monkeypatch.delenv("CANTOR_GAUGE_BUDGET", raising=False)


def read(path) -> str:
    return path.read_text()


GAPS_CSV_GOLDEN = (
    "level,num,lo,hi,mass\n"
    "1,1,1/3,2/3,1/3\n"
    "2,1,1/9,2/9,1/9\n"
    "2,3,7/9,8/9,1/9\n"
)


class TestConstruct:
    def test_writes_all_artifacts(self, tmp_path):
        out = tmp_path / "pieces.json"
        gaps = tmp_path / "gaps.csv"
        phi = tmp_path / "phi.json"
        assignment = tmp_path / "assignment.json"
        manifest = tmp_path / "run.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "construct",
                "--preset", "middle-thirds",
                "--depth", "2",
                "--out", str(out),
                "--gaps-out", str(gaps),
                "--phi-out", str(phi),
                "--assignment-out", str(assignment),
            ]
        )
        assert code == 0

        pieces = json.loads(read(out))
        assert pieces["depth"] == 2
        assert pieces["pieces"][0] == {"lo": "0/1", "hi": "1/9"}
        assert read(gaps) == GAPS_CSV_GOLDEN
        assert json.loads(read(phi))["resolution"] == 2
        assert [len(l) for l in json.loads(read(assignment))["levels"]] == [2, 4]

        doc = json.loads(read(manifest))
        assert doc["command"] == "construct"
        assert doc["version"] == cantorvis.__version__
        assert doc["outputs"] == sorted(
            str(p) for p in (out, gaps, phi, assignment)
        )
        assert doc["inputs"] == []
        assert doc["verdicts"] == {}
        assert doc["parameters"]["depth"] == 2

    def test_stdout_by_default(self, capsys):
        assert cli.main(["construct", "--preset", "middle-thirds", "--depth", "1"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["pieces"] == [
            {"lo": "0/1", "hi": "1/3"},
            {"lo": "2/3", "hi": "1/1"},
        ]

    def test_explicit_alpha_with_tail(self, capsys):
        code = cli.main(
            [
                "construct",
                "--alpha", "explicit:1/2,1/4",
                "--tail", "1/4",
                "--depth", "1",
            ]
        )
        assert code == 0
        assert len(json.loads(capsys.readouterr().out)["pieces"]) == 2

    def test_runs_are_byte_identical(self, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        for path in (first, second):
            args = [
                "construct", "--alpha", "geometric:1/2",
                "--depth", "3", "--resolution", "5", "--out", str(path),
            ]
            assert cli.main(args) == 0
        assert read(first) == read(second)

    def test_conflicting_sources_exit_2(self, tmp_path, capsys):
        code = cli.main(
            [
                "construct",
                "--alpha", "geometric:1/2",
                "--preset", "middle-thirds",
                "--depth", "2",
            ]
        )
        assert code == 2
        assert "cantorvis:" in capsys.readouterr().err

    def test_invalid_ratio_exit_2_and_error_manifest(self, tmp_path, capsys):
        manifest = tmp_path / "run.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "construct", "--alpha", "geometric:3/2", "--depth", "2",
            ]
        )
        assert code == 2
        assert json.loads(read(manifest))["verdicts"] == {"outcome": "error"}


class TestRecover:
    def test_round_trip_is_byte_identical(self, tmp_path):
        phi = tmp_path / "phi.json"
        assert cli.main(
            [
                "construct", "--preset", "middle-thirds", "--depth", "2",
                "--out", str(tmp_path / "pieces.json"), "--phi-out", str(phi),
            ]
        ) == 0
        observed = tmp_path / "gaps.json"
        observed.write_text(
            json.dumps(
                [
                    {"lo": "7/9", "hi": "8/9"},
                    {"lo": "1/3", "hi": "2/3"},
                    {"lo": "1/9", "hi": "2/9"},
                ]
            )
        )
        recovered = tmp_path / "recovered.json"
        assert cli.main(
            [
                "recover", "--gaps", str(observed),
                "--resolution", "2", "--out", str(recovered),
            ]
        ) == 0
        assert read(recovered) == read(phi)

    def test_wrong_gap_count_exit_2(self, tmp_path, capsys):
        observed = tmp_path / "gaps.json"
        observed.write_text(json.dumps([{"lo": "1/3", "hi": "2/3"}]))
        code = cli.main(["recover", "--gaps", str(observed), "--resolution", "2"])
        assert code == 2

    def test_corrupted_json_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "gaps.json"
        bad.write_text("{not json")
        code = cli.main(["recover", "--gaps", str(bad), "--resolution", "2"])
        assert code == 2
        assert "corrupted JSON" in capsys.readouterr().err

    def test_missing_file_exit_2(self, tmp_path):
        code = cli.main(
            ["recover", "--gaps", str(tmp_path / "absent.json"), "--resolution", "2"]
        )
        assert code == 2


class TestCertify:
    def test_true_verdict_exits_0(self, tmp_path, capsys):
        manifest = tmp_path / "run.json"
        report = tmp_path / "report.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "certify", "--alpha", "geometric:1/2", "--depth", "4",
                "--l", "3", "--report-out", str(report),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "verdict=true" in out
        assert "j0=2 c=1/8" in out
        assert "measure bracket: [1/1, 1/1]" in out
        assert json.loads(read(report))["verdict"] == "true"
        verdicts = json.loads(read(manifest))["verdicts"]
        assert verdicts == {
            "verdict": "true",
            "regular": "true",
            "l_intersection": "true",
        }

    def test_false_verdict_exits_1(self, capsys):
        code = cli.main(
            ["certify", "--preset", "middle-thirds", "--depth", "2", "--l", "2"]
        )
        assert code == 1
        assert "verdict=false" in capsys.readouterr().out

    def test_assignment_file(self, tmp_path, capsys):
        assignment = tmp_path / "assignment.json"
        assert cli.main(
            [
                "construct", "--preset", "middle-thirds", "--depth", "2",
                "--out", str(tmp_path / "pieces.json"),
                "--assignment-out", str(assignment),
            ]
        ) == 0
        code = cli.main(["certify", "--assignment", str(assignment), "--l", "3"])
        assert code == 0

    def test_source_without_depth_exit_2(self, capsys):
        code = cli.main(["certify", "--preset", "middle-thirds", "--l", "3"])
        assert code == 2

    def test_missing_l_is_a_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["certify", "--preset", "middle-thirds", "--depth", "2"])
        assert excinfo.value.code == 2


class TestGaugeAndMeasure:
    def test_gauge_csv_golden(self, tmp_path):
        out = tmp_path / "gauge.csv"
        code = cli.main(
            [
                "gauge", "--preset", "middle-thirds", "--depth", "3",
                "--grid", "1/27,1/9,1/3", "--out", str(out),
            ]
        )
        assert code == 0
        assert read(out) == (
            "t,h_lo,h_hi\n1/27,1/8,1/8\n1/9,1/4,1/4\n1/3,1/2,1/2\n"
        )

    def test_gauge_plateaus_out(self, tmp_path):
        plateaus = tmp_path / "plateaus.json"
        code = cli.main(
            [
                "gauge", "--preset", "middle-thirds", "--depth", "2",
                "--grid", "1/9", "--plateaus-out", str(plateaus),
            ]
        )
        assert code == 0
        assert json.loads(read(plateaus)) == [
            {"lo": "1/9", "hi": "1/9", "value": "1/4"},
            {"lo": "1/3", "hi": "1/3", "value": "1/2"},
        ]

    def test_measure_cover_json(self, tmp_path):
        out = tmp_path / "cover.json"
        code = cli.main(
            [
                "measure", "--preset", "middle-thirds", "--depth", "3",
                "--out", str(out),
            ]
        )
        assert code == 0
        cover = json.loads(read(out))
        assert (cover["value_lo"], cover["value_hi"]) == ("1/1", "1/1")
        assert cover["delta"] == "1/27"

    def test_measure_infeasible_cap_exit_2(self, capsys):
        code = cli.main(
            [
                "measure", "--preset", "middle-thirds", "--depth", "2",
                "--delta", "1/10",
            ]
        )
        assert code == 2


class TestDavies:
    def test_build_cloud_json(self, capsys):
        code = cli.main(["davies", "build", "--truncation", "4", "--k", "1"])
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["points"] == ["0/1", "1/64", "1/4", "17/64"]

    def test_build_restricted_merges_translations(self, capsys):
        code = cli.main(
            ["davies", "build", "--truncation", "6", "--k", "1", "--l", "1"]
        )
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["u_values"] == ["0/1", "1/4"]
        assert len(body["d_values"]) == 4

    def test_build_blocks(self, capsys):
        code = cli.main(["davies", "build", "--truncation", "6", "--blocks", "2"])
        assert code == 0
        assert len(json.loads(capsys.readouterr().out)["points"]) == 33

    def test_max_enum_refusal_exits_3(self, tmp_path, capsys):
        manifest = tmp_path / "run.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "davies", "build", "--truncation", "12", "--k", "1",
                "--max-enum", "4",
            ]
        )
        assert code == 3
        assert "cantorvis:" in capsys.readouterr().err
        doc = json.loads(read(manifest))
        assert doc["command"] == "davies build"
        assert doc["verdicts"] == {"outcome": "error"}

    def test_check_verdict_line(self, tmp_path, capsys):
        manifest = tmp_path / "run.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "davies", "check", "--truncation", "8", "--k", "1", "--l", "2",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "davies check: verdict=true identity_u=true identity_d=true" in out
        verdicts = json.loads(read(manifest))["verdicts"]
        assert verdicts == {
            "verdict": "true",
            "identity_u": "true",
            "identity_d": "true",
        }


class TestBudgets:
    def test_env_budget_is_honored(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CANTOR_GAUGE_BUDGET", "100")
        code = cli.main(
            [
                "construct", "--alpha", "geometric:1/2",
                "--depth", "2", "--resolution", "12",
                "--out", str(tmp_path / "pieces.json"),
            ]
        )
        assert code == 3

    def test_budget_flag_overrides_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CANTOR_GAUGE_BUDGET", "100")
        code = cli.main(
            [
                "--budget", str(2**20),
                "construct", "--alpha", "geometric:1/2",
                "--depth", "2", "--resolution", "12",
                "--out", str(tmp_path / "pieces.json"),
            ]
        )
        assert code == 0

    def test_garbage_env_budget_exit_2(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("CANTOR_GAUGE_BUDGET", "lots")
        code = cli.main(["construct", "--preset", "middle-thirds", "--depth", "2"])
        assert code == 2


class TestQlinear:
    def test_independent_matrix(self, tmp_path, capsys):
        matrix = tmp_path / "points.json"
        matrix.write_text(json.dumps([["1", "0"], ["0", "1"]]))
        code = cli.main(
            ["qlinear", "check", "--file", str(matrix), "--alpha", "1,1"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "independent=true rank=2 count=2 overlap=0" in out

    def test_dependent_progression_exits_1(self, tmp_path, capsys):
        matrix = tmp_path / "points.json"
        matrix.write_text(json.dumps([["1"], ["2"], ["3"]]))
        code = cli.main(
            ["qlinear", "check", "--file", str(matrix), "--alpha", "1"]
        )
        assert code == 1
        assert "overlap=2" in capsys.readouterr().out

    def test_dict_form_with_embedded_alpha(self, tmp_path, capsys):
        doc = tmp_path / "points.json"
        doc.write_text(
            json.dumps({"points": [["1", "0"], ["0", "1"]], "alpha": ["-1", "1"]})
        )
        code = cli.main(["qlinear", "check", "--file", str(doc)])
        assert code == 0
        assert "overlap=1" in capsys.readouterr().out

    def test_scalar_file_rejected(self, tmp_path):
        doc = tmp_path / "points.json"
        doc.write_text("3")
        assert cli.main(["qlinear", "check", "--file", str(doc)]) == 2


class TestApprox:
    def test_visible_family(self, tmp_path, capsys):
        target = tmp_path / "target.json"
        target.write_text(
            json.dumps(
                {"intervals": [{"lo": "0/1", "hi": "1/3"}, {"lo": "2/3", "hi": "1/1"}]}
            )
        )
        out = tmp_path / "approx.json"
        report = tmp_path / "report.json"
        manifest = tmp_path / "run.json"
        code = cli.main(
            [
                "--manifest", str(manifest),
                "approx", "--target", str(target), "--epsilon", "1/8",
                "--family", "hvisible", "--out", str(out),
                "--report-out", str(report),
            ]
        )
        assert code == 0
        assert "family=visible-ternary" in capsys.readouterr().out
        output = json.loads(read(out))
        assert output["provenance"]["family"] == "visible-ternary"
        witness = json.loads(read(report))
        assert witness["within_epsilon"] is True
        assert len(witness["translations"]) >= 2
        doc = json.loads(read(manifest))
        assert doc["verdicts"] == {"within_epsilon": "true"}
        assert doc["inputs"] == [str(target)]

    def test_bare_point_list_target(self, tmp_path, capsys):
        target = tmp_path / "target.json"
        target.write_text(json.dumps(["0/1", "1/2"]))
        code = cli.main(
            [
                "approx", "--target", str(target), "--epsilon", "1/4",
                "--family", "invisible", "--out", str(tmp_path / "o.json"),
            ]
        )
        assert code == 0
        assert "family=invisible-cloud" in capsys.readouterr().out

    def test_unknown_family_exit_2(self, tmp_path):
        target = tmp_path / "target.json"
        target.write_text(json.dumps(["0/1"]))
        code = cli.main(
            [
                "approx", "--target", str(target), "--epsilon", "1/4",
                "--family", "fat", "--out", str(tmp_path / "o.json"),
            ]
        )
        assert code == 2


class TestVersionFlag:
    def test_version_prints_and_exits(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["--version"])
        assert excinfo.value.code == 0
        assert cantorvis.__version__ in capsys.readouterr().out

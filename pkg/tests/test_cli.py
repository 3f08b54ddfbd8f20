from lna_fim.cli import main
from lna_fim.resources import get_data_path
import pandas as pd
import json
import os
import pytest


GENE_INPUTS = ["--model", "gene_expression.net",
               "--params", "gene_expression_a.json"]


def read_json(path):
    with open(path, "r") as f:
        return json.load(f)


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def write_json(path, content):
    path.write_text(json.dumps(content))
    return str(path)


def test_fim_of_the_bundled_gene_model(tmp_path, capsys):
    status = main(["fim", *GENE_INPUTS, "--design", "gene_expression_ts.json",
                   "--out", str(tmp_path)])
    assert status == 0
    assert "rank 4 of 4" in capsys.readouterr().out

    report = read_json(tmp_path / "fim.json")
    assert report["rank"] == 4
    assert report["regime"] == "TS"
    with open(tmp_path / "summary.txt") as f:
        assert "rank: 4 of 4" in f.read()

    manifest = read_json(tmp_path / "fim.manifest.json")
    assert manifest["command"] == "fim"
    assert manifest["regime"] == "TS"
    assert manifest["parameters"] == dict(k_r=10.0, k_p=4.0, g_r=1.0,
                                          g_p=0.7)
    assert get_data_path("gene_expression.net") in manifest["inputs"]
    assert len(manifest["inputs"]) == 3
    assert os.path.exists(tmp_path / "summary.manifest.json")


def test_trajectory_dump(tmp_path):
    status = main(["fim", "--experiment", "BirthDeath-TS-v0",
                   "--dump-trajectory", "--out", str(tmp_path)])
    assert status == 0
    frame = pd.read_csv(tmp_path / "trajectory.csv")
    assert list(frame.columns) == ["t", "x", "V_x_x"]
    assert len(frame) == 10


def test_singular_information_is_recorded(tmp_path):
    status = main(["fim", "--experiment", "GeneExpression-TP-v0",
                   "--out", str(tmp_path)])
    assert status == 0
    assert read_json(tmp_path / "fim.json")["rank"] == 2
    warnings = read_json(tmp_path / "fim.manifest.json")["warnings"]
    assert any(w.startswith("SingularFimWarning") for w in warnings)


def test_malformed_design_cites_the_key(tmp_path, capsys):
    design = write_json(tmp_path / "design.json", dict(
        regime="TS", times=[1.0, 2.0], observed=["p"], bogus=3))
    status = main(["fim", *GENE_INPUTS, "--design", design,
                   "--out", str(tmp_path / "out")])
    assert status == 2
    error = capsys.readouterr().err
    assert error.startswith("lna-fim: input error:")
    assert "'bogus'" in error


def test_unparseable_design(tmp_path):
    design = tmp_path / "design.json"
    design.write_text("{\"regime\": ")
    assert main(["fim", *GENE_INPUTS, "--design", str(design),
                 "--out", str(tmp_path)]) == 2


def test_missing_inputs(tmp_path):
    assert main(["fim", "--model", "gene_expression.net",
                 "--out", str(tmp_path)]) == 2
    assert main(["fim", *GENE_INPUTS, "--design", "missing.json",
                 "--out", str(tmp_path)]) == 2


def test_sweep_with_a_second_criterion(tmp_path, capsys):
    spec = write_json(tmp_path / "sweep.json", dict(
        design="gene_expression_ts.json", deltas=[0.5, 1.0, 2.0], count=10))
    status = main(["sweep", *GENE_INPUTS, "--spec", spec,
                   "--criterion", "trace_inverse", "--out", str(tmp_path)])
    assert status == 0
    table = pd.read_csv(tmp_path / "sweep.csv")
    assert list(table.columns) == ["delta", "criterion", "value", "status"]
    assert set(table["criterion"]) == {"log_det", "trace_inverse"}
    assert len(table) == 6
    assert "log_det: best delta" in capsys.readouterr().out
    manifest = read_json(tmp_path / "sweep.manifest.json")
    assert os.path.abspath(spec) in manifest["inputs"]


def test_sweep_over_counts(tmp_path):
    spec = write_json(tmp_path / "sweep.json", dict(
        design="gene_expression_ts.json", deltas=[1.0], count=10))
    status = main(["sweep", *GENE_INPUTS, "--spec", spec,
                   "--counts", "2", "4", "--delta", "0.5",
                   "--out", str(tmp_path)])
    assert status == 0
    table = pd.read_csv(tmp_path / "sweep_count.csv")
    assert list(table["count"]) == [2, 4]


def test_sweep_with_an_empty_grid(tmp_path, capsys):
    spec = write_json(tmp_path / "sweep.json", dict(
        design="gene_expression_ts.json", deltas=[], count=10))
    assert main(["sweep", *GENE_INPUTS, "--spec", spec,
                 "--out", str(tmp_path)]) == 2
    assert "empty" in capsys.readouterr().err


def test_ellipse_files(tmp_path):
    status = main(["ellipse", "--experiment", "GeneExpression-TS-v0",
                   "--pair", "k_r", "g_p", "--points", "64",
                   "--out", str(tmp_path)])
    assert status == 0
    frame = pd.read_csv(tmp_path / "ellipse_GeneExpression-TS-v0.csv")
    assert list(frame.columns) == ["log_k_r", "log_g_p"]
    assert len(frame) == 64
    summary = read_json(tmp_path / "ellipse_GeneExpression-TS-v0.json")
    assert summary["pair"] == ["log_k_r", "log_g_p"]
    assert summary["profile"] is True
    assert len(summary["radii"]) == 4


def test_ellipse_is_deterministic(tmp_path):
    arguments = ["ellipse", "--experiment", "GeneExpression-TS-v0",
                 "--pair", "k_r", "g_p"]
    for run in ("first", "second"):
        assert main(arguments + ["--out", str(tmp_path / run)]) == 0
    for suffix in ("csv", "json"):
        name = f"ellipse_GeneExpression-TS-v0.{suffix}"
        assert read_bytes(tmp_path / "first" / name) == \
            read_bytes(tmp_path / "second" / name)


def test_ellipses_of_two_regimes_for_overlay(tmp_path):
    for regime in ("TS", "DT"):
        status = main(["ellipse", "--experiment",
                       f"GenePerturbed-{regime}-v0", "--pair", "k_r", "g_p",
                       "--slice", "--out", str(tmp_path)])
        assert status == 0
    ts = read_json(tmp_path / "ellipse_GenePerturbed-TS-v0.json")
    dt = read_json(tmp_path / "ellipse_GenePerturbed-DT-v0.json")
    assert ts["profile"] is False
    assert ts["semi_axes"] != dt["semi_axes"]


@pytest.mark.parametrize("epsilon", ["0", "-1"])
def test_ellipse_needs_a_positive_level(tmp_path, epsilon):
    assert main(["ellipse", "--experiment", "GeneExpression-TS-v0",
                 "--pair", "k_r", "g_p", "--epsilon", epsilon,
                 "--out", str(tmp_path)]) == 2


def test_compare_regimes(tmp_path):
    status = main(["compare", "--experiment", "GeneExpression-TS-v0",
                   "--regimes", "TS", "DT", "--out", str(tmp_path)])
    assert status == 0
    comparison = read_json(tmp_path / "compare.json")
    assert sorted(comparison["regimes"].values()) == ["DT", "TS"]
    warnings = read_json(tmp_path / "compare.manifest.json")["warnings"]
    assert any(w.startswith("RegimeComparisonWarning") for w in warnings)


def test_compare_needs_a_design(tmp_path):
    assert main(["compare", *GENE_INPUTS, "--out", str(tmp_path)]) == 2


def test_validate_reports_an_unstable_network(tmp_path, capsys,
                                              unstable_files):
    model, params = unstable_files
    status = main(["validate", "--model", model, "--params", params,
                   "--check", "finite_difference",
                   "--out", str(tmp_path / "out")])
    assert status == 3
    error = capsys.readouterr().err
    assert error.startswith("lna-fim: numerical error:")
    assert "no stable stationary LNA" in error


def test_validate_with_finite_differences(tmp_path):
    status = main(["validate", "--experiment", "BirthDeath-TS-v0",
                   "--check", "finite_difference", "--out", str(tmp_path)])
    assert status == 0
    report = read_json(tmp_path / "validate.json")
    assert report["passed"] is True
    assert [c["name"] for c in report["checks"]] == ["finite_difference"]


def test_validation_is_reproducible(tmp_path):
    arguments = ["validate", "--experiment", "BirthDeath-TS-v0",
                 "--check", "ssa_moments", "--check", "score_identity",
                 "--seed", "7", "--trajectories", "1000", "--draws", "500"]
    statuses = [main(arguments + ["--out", str(tmp_path / run)])
                for run in ("first", "second")]
    assert statuses[0] == statuses[1]
    assert statuses[0] in (0, 1)
    assert read_bytes(tmp_path / "first" / "validate.json") == \
        read_bytes(tmp_path / "second" / "validate.json")
    assert read_json(tmp_path / "first" / "validate.manifest.json")[
        "seed"] == 7


def test_simulate(tmp_path):
    status = main(["simulate", "--model", "birth_death.net",
                   "--params", "birth_death.json", "--count", "3",
                   "--trajectories", "50", "--dump-samples",
                   "--out", str(tmp_path)])
    assert status == 0
    summary = read_json(tmp_path / "ssa_summary.json")
    assert summary["count"] == 50
    samples = pd.read_csv(tmp_path / "ssa_samples.csv")
    assert len(samples) == 150
    assert read_json(tmp_path / "ssa_summary.manifest.json")["seed"] == 0


@pytest.mark.slow
def test_p53_fim(tmp_path):
    status = main(["fim", "--model", "p53.net", "--params", "p53.json",
                   "--design", "p53_ts.json", "--out", str(tmp_path)])
    assert status == 0
    report = read_json(tmp_path / "fim.json")
    assert report["fim"]["rows"] == 7
    assert len(report["eigenvalues"]) == 7

import json
import os

import numpy as np
import pytest

from domainsift.cli import main
from domainsift.features import FEATURE_NAMES


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Generated corpora shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    rc = main([
        "generate", "--out", str(root / "gen"), "--seed", "7",
        "--n-legit", "300", "--n-dga", "200",
        "--census-n", "400", "--dga-fraction", "0.1",
    ])
    assert rc == 0
    return root


def test_generate_outputs(workdir):
    gen = workdir / "gen"
    assert (gen / "labeled.csv").exists()
    assert (gen / "census.tsv").exists()
    assert (gen / "census_truth.csv").exists()


def test_extract_writes_feature_csv(workdir):
    out = workdir / "features.csv"
    rc = main(["extract", "--in", str(workdir / "gen" / "labeled.csv"),
               "--out", str(out)])
    assert rc == 0
    header = out.read_text().splitlines()[0]
    assert header == ",".join(FEATURE_NAMES) + ",label"


def test_extract_accepts_plain_domain_list(workdir, tmp_path):
    listing = tmp_path / "domains.txt"
    listing.write_text("google.com\nexample.net\n")
    out = tmp_path / "f.csv"
    rc = main(["extract", "--in", str(listing), "--out", str(out), "--mode", "full"])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3


def test_analyze_outputs(workdir, capsys):
    out = workdir / "analysis"
    rc = main(["analyze", "--in", str(workdir / "gen" / "labeled.csv"),
               "--out", str(out)])
    assert rc == 0
    assert (out / "summary.csv").exists()
    assert (out / "correlation.csv").exists()
    for name in FEATURE_NAMES:
        assert (out / f"hist_{name}.csv").exists()
    assert "uniq_chars" in capsys.readouterr().out


def test_analyze_requires_labels(workdir, tmp_path):
    rc = main(["analyze", "--in", str(workdir / "gen" / "census.tsv"),
               "--out", str(tmp_path / "a")])
    assert rc == 1


def test_train_then_evaluate_and_predict(workdir, capsys):
    labeled = str(workdir / "gen" / "labeled.csv")
    model = str(workdir / "model.dsmodel")
    assert main(["train", "--in", labeled, "--out", model, "--seed", "5"]) == 0
    capsys.readouterr()

    report = workdir / "report.csv"
    assert main(["evaluate", "--in", labeled, "--out", str(report),
                 "--seed", "5"]) == 0
    lines = report.read_text().splitlines()
    assert lines[0] == "classifier,accuracy,precision,recall,f_score"
    names = [line.split(",")[0] for line in lines[1:]]
    assert names == ["c45", "knn", "logreg", "nb", "svm", "ensemble"]
    capsys.readouterr()

    out = workdir / "preds"
    assert main(["predict", "--in", str(workdir / "gen" / "census.tsv"),
                 "--model", model, "--out", str(out), "--mode", "sld"]) == 0
    pred_lines = (out / "predictions.csv").read_text().splitlines()
    assert pred_lines[0].startswith("host,domain,prediction,vote_")
    assert len(pred_lines) == 401
    assert (out / "flagged.txt").exists()


def test_evaluate_existing_model(workdir):
    labeled = str(workdir / "gen" / "labeled.csv")
    model = str(workdir / "model.dsmodel")
    assert main(["evaluate", "--in", labeled, "--model", model, "--seed", "5"]) == 0


def test_evaluate_cv(workdir):
    labeled = str(workdir / "gen" / "labeled.csv")
    out = workdir / "cv.csv"
    assert main(["evaluate", "--in", labeled, "--cv", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("classifier,accuracy_mean,accuracy_std")
    assert len(lines) == 7


def test_train_deterministic_bytes(workdir, tmp_path):
    labeled = str(workdir / "gen" / "labeled.csv")
    a, b = tmp_path / "a.dsmodel", tmp_path / "b.dsmodel"
    assert main(["train", "--in", labeled, "--out", str(a), "--seed", "3"]) == 0
    assert main(["train", "--in", labeled, "--out", str(b), "--seed", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cluster_outputs(workdir, capsys):
    out = workdir / "clusters"
    rc = main(["cluster", "--in", str(workdir / "gen" / "census.tsv"),
               "--out", str(out), "--k", "2", "--seed", "1",
               "--model-out", str(workdir / "km.dsmodel")])
    assert rc == 0
    centroid_lines = (out / "centroids.csv").read_text().splitlines()
    assert centroid_lines[0] == "feature,cluster_1,cluster_2"
    assert (workdir / "km.dsmodel").exists()
    assert "inertia" in capsys.readouterr().out


def test_predict_threads_match_serial(workdir, tmp_path):
    model = str(workdir / "model.dsmodel")
    census = str(workdir / "gen" / "census.tsv")
    serial, threaded = tmp_path / "s", tmp_path / "t"
    assert main(["predict", "--in", census, "--model", model,
                 "--out", str(serial), "--mode", "sld"]) == 0
    assert main(["predict", "--in", census, "--model", model,
                 "--out", str(threaded), "--mode", "sld", "--threads", "4"]) == 0
    assert (serial / "predictions.csv").read_text() == \
        (threaded / "predictions.csv").read_text()


def test_reputation_check(workdir, tmp_path):
    flagged = workdir / "preds" / "flagged.txt"
    badlist = tmp_path / "bad.txt"
    hosts = flagged.read_text().splitlines()
    badlist.write_text("\n".join(hosts[:3]) + "\n")
    out = tmp_path / "rep.csv"
    rc = main(["reputation-check", "--in", str(flagged), "--badlist", str(badlist),
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "domain,score,verdict,provider"
    assert sum(",suspicious," in line for line in lines) == 3


def test_config_file_supplies_defaults(workdir, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 5\nknn_k = 3\n")
    model = tmp_path / "m.dsmodel"
    rc = main(["train", "--in", str(workdir / "gen" / "labeled.csv"),
               "--out", str(model), "--config", str(cfg)])
    assert rc == 0
    doc = json.loads(model.read_text())
    knn = next(m for m in doc["payload"]["state"]["members"] if m["kind"] == "knn")
    assert knn["params"]["k"] == 3


class TestExitCodes:
    def test_no_command_is_usage_error(self):
        assert main([]) == 2

    def test_unknown_flag_is_usage_error(self):
        assert main(["extract", "--bogus"]) == 2

    def test_missing_input_is_data_error(self, tmp_path):
        assert main(["extract", "--in", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "o.csv")]) == 1

    def test_bad_model_file_is_data_error(self, workdir, tmp_path):
        fake = tmp_path / "fake.dsmodel"
        fake.write_text("{}")
        assert main(["predict", "--in", str(workdir / "gen" / "census.tsv"),
                     "--model", str(fake), "--out", str(tmp_path / "p")]) == 1

    def test_bad_config_is_data_error(self, workdir, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nonsense_key = 1\n")
        assert main(["extract", "--in", str(workdir / "gen" / "labeled.csv"),
                     "--out", str(tmp_path / "o.csv"), "--config", str(cfg)]) == 1

    def test_feature_csv_rejected_for_predict(self, workdir, tmp_path):
        features = str(workdir / "features.csv")
        model = str(workdir / "model.dsmodel")
        assert main(["predict", "--in", features, "--model", model,
                     "--out", str(tmp_path / "p")]) == 1


def test_console_script_installed():
    import shutil
    import subprocess

    exe = shutil.which("domainsift")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "extract" in proc.stdout and "reputation-check" in proc.stdout

import json

import numpy as np
import pytest

from cmcorr.core import ConfusionMatrix
from cmcorr.generator import Family
from cmcorr.harness import (
    ExperimentConfig,
    bin_index,
    emit,
    run_experiment,
    score_file,
    score_matrix,
)

from .conftest import DIAG3, HOLLOW3, SKEWED_CM


def test_bin_edges_and_placement():
    edges = np.linspace(-1, 1, 41)
    idx = bin_index(np.array([-1.0, -0.95, 0.0, 0.999, 1.0, 1.0 + 1e-15, -1 - 1e-15]), edges)
    assert list(idx) == [0, 1, 20, 39, 39, 39, 0]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(replicates=0)
    with pytest.raises(ValueError):
        ExperimentConfig(histogram_bins=1)
    with pytest.raises(ValueError):
        ExperimentConfig(rho=1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(metrics=("NOPE",))
    with pytest.raises(ValueError):
        ExperimentConfig(families=(Family.IMBALANCED_32,), k=2)


def test_mass_conservation():
    cfg = ExperimentConfig(replicates=60, master_seed=3)
    for h in run_experiment(cfg):
        assert h.counts.sum() + h.undefined_count == 60
        assert h.bin_edges[0] == -1 and h.bin_edges[-1] == 1
        assert (np.diff(h.bin_edges) > 0).all()


def test_diagonal_family_all_top_bin():
    cfg = ExperimentConfig(families=(Family.DIAGONAL,), replicates=100, master_seed=42)
    for h in run_experiment(cfg):
        assert h.counts[-1] == h.counts.sum(), h.metric


def test_undefined_scores_are_not_binned():
    # K=2 diagonal matrices with an empty class give undefined MPC1
    cfg = ExperimentConfig(families=(Family.DIAGONAL,), replicates=200, k=2, n=2,
                           metrics=("MPC1",), master_seed=1)
    (h,) = run_experiment(cfg)
    assert h.undefined_count > 0
    assert h.counts.sum() + h.undefined_count == 200


def test_workers_do_not_change_results():
    cfg = ExperimentConfig(families=(Family.HOLLOW, Family.NEARLY_UNIFORM), replicates=600, master_seed=11)
    a = emit(run_experiment(cfg, workers=1), "json", config=cfg)
    b = emit(run_experiment(cfg, workers=3), "json", config=cfg)
    assert a == b


def test_golden_run_is_byte_stable(tmp_path):
    cfg = ExperimentConfig(families=(Family.DIAGONAL,), replicates=100, master_seed=42)
    out = tmp_path / "a.csv"
    first = emit(run_experiment(cfg), "csv", out)
    assert out.read_bytes() == first
    assert emit(run_experiment(cfg), "csv") == first


def test_csv_layout():
    cfg = ExperimentConfig(families=(Family.HOLLOW,), replicates=10, metrics=("R_K", "EMCC"))
    lines = emit(run_experiment(cfg), "csv").decode().splitlines()
    assert lines[0] == "family,metric,bin_lo,bin_hi,count"
    assert len(lines) == 1 + 2 * 40
    assert lines[1] == "hollow,R_K,-1,-0.95," + lines[1].rsplit(",", 1)[1]


def test_empty_metric_list_gives_header_only_csv():
    cfg = ExperimentConfig(families=(Family.HOLLOW,), replicates=5, metrics=())
    assert emit(run_experiment(cfg), "csv") == b"family,metric,bin_lo,bin_hi,count\n"


def test_json_layout():
    cfg = ExperimentConfig(families=(Family.HOLLOW,), replicates=20, metrics=("EMCC",))
    doc = json.loads(emit(run_experiment(cfg), "json", config=cfg))
    block = doc["results"]["hollow"]["EMCC"]
    assert set(block) == {"bin_edges", "counts", "summary", "undefined_count"}
    assert set(block["summary"]) == {"min", "max", "mean", "median"}
    assert doc["config"]["replicates"] == 20


def test_score_matrix_skewed_example():
    p = score_matrix(SKEWED_CM, rho=0.9999)
    assert p["A"].value == pytest.approx(0.988, abs=1e-12)
    assert p["Accuracy"].value == pytest.approx(0.994, abs=1e-12)
    for name in ("MCC", "MPC1", "EMPC1"):
        assert p[name].value == pytest.approx(0.246988, abs=1e-6)
    assert p["EMPC1_rho"].value == pytest.approx(-0.36, abs=0.01)


def test_score_matrix_fixtures():
    p = score_matrix(DIAG3)
    for name in ("R_K", "MPC1", "MPC2", "ER_K", "EMPC1", "EMPC2", "EMCC", "A"):
        assert p[name].value == pytest.approx(1.0, abs=1e-12)
    assert "MCC" not in p
    p = score_matrix(HOLLOW3)
    for name in ("R_K", "MPC1", "MPC2"):
        assert p[name].value == pytest.approx(-0.5, abs=1e-12)
    for name in ("ER_K", "EMPC1", "EMPC2", "EMCC", "A"):
        assert p[name].value == pytest.approx(-1.0, abs=1e-12)


def test_score_matrix_weights():
    cm = ConfusionMatrix([[7, 2, 1], [3, 9, 4], [0, 5, 11]])
    p = score_matrix(cm, weights=[0.6, 0.2, 0.2])
    assert p["MPC1"].value != pytest.approx(score_matrix(cm)["MPC1"].value)


def test_score_file_and_panel_json(tmp_path):
    f = tmp_path / "cm.txt"
    f.write_text("# skewed two-class example\n993,3\n3,1\n")
    panel = score_file(f, rho=0.9999)
    doc = json.loads(emit(panel, "json"))
    assert doc["mcc"] == 0.246987951807
    assert doc["a"] == 0.988
    assert doc["defined"]["mcc"] is True
    t = score_file(f, transpose=True)
    assert t["MCC"].value == pytest.approx(panel["MCC"].value)


def test_score_file_errors(tmp_path):
    with pytest.raises(OSError, match="cannot read"):
        score_file(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("1,2\n3\n")
    with pytest.raises(ValueError, match="row 2"):
        score_file(bad)


def test_emit_reports_path_on_write_failure(tmp_path):
    with pytest.raises(OSError, match="cannot write"):
        emit(score_matrix(DIAG3), "json", tmp_path / "no" / "such" / "dir.json")


def test_panel_csv():
    text = emit(score_matrix(SKEWED_CM), "csv").decode()
    assert text.splitlines()[0] == "metric,value,defined"
    assert "MCC,0.246987951807,true" in text


@pytest.mark.parametrize("family", [Family.NEARLY_UNIFORM, Family.HOLLOW])
def test_rk_mpc_close_per_replicate(family):
    from cmcorr.harness import score_replicates

    cfg = ExperimentConfig(families=(family,), replicates=300, metrics=("R_K", "MPC1", "MPC2"), master_seed=8)
    values, defined = score_replicates(cfg, family)
    ok = defined.all(axis=1)
    rk, m1, m2 = values[ok].T
    assert (np.abs(rk) <= np.abs(m2) + 1e-12).all()
    print(f"{family.value}: mean|R_K-MPC1|={np.abs(rk - m1).mean():.4f} "
          f"mean|R_K-MPC2|={np.abs(rk - m2).mean():.4f} mean|MPC1-MPC2|={np.abs(m1 - m2).mean():.4f}")

import numpy as np
import pytest

from inhomgraph.errors import ValidationError
from inhomgraph.experiments import (
    ExperimentConfig,
    correlation_matrix,
    qq_data,
    qq_table,
    run_correlation_experiment,
    run_powerlaw_experiment,
    sample_counts,
    tail_counts,
)
from inhomgraph.graph_core import EdgeProbabilityMatrix, ModelSpec
from inhomgraph.svg import emit_svg


def test_zero_kernel_correlations_undefined():
    cfg = ExperimentConfig(ModelSpec("homogeneous", 5, p=0.0), 50, 1)
    res = run_correlation_experiment(cfg, full_range=True)
    assert not res.defined.any()
    assert res.entry(0, 1) is None
    counts = sample_counts(cfg.kernel, 50, 1)
    assert np.all(counts[:, 0] == 5)


def test_correlation_properties(tmp_path):
    cfg = ExperimentConfig(ModelSpec("m1", 40), 2000, 9, tmp_path)
    res = run_correlation_experiment(cfg)
    assert np.allclose(res.corr, res.corr.T)
    assert np.allclose(np.diag(res.corr), 1.0)
    text = (tmp_path / "corr_m1_n40.csv").read_text()
    assert text.splitlines()[0] == "i,j,corr,se"
    assert text == res.to_csv()


def test_correlation_against_numpy(rng):
    counts = rng.poisson(3.0, size=(500, 4))
    res = correlation_matrix(counts)
    assert np.allclose(res.corr, np.corrcoef(counts.T.astype(float)))


def test_rerun_and_threads_identical(tmp_path):
    a = run_correlation_experiment(ExperimentConfig(ModelSpec("m3", 30), 1500, 4, tmp_path / "a", 1))
    b = run_correlation_experiment(ExperimentConfig(ModelSpec("m3", 30), 1500, 4, tmp_path / "b", 3))
    assert a.to_csv() == b.to_csv()
    assert (tmp_path / "a" / "corr_m3_n30.csv").read_bytes() == (tmp_path / "b" / "corr_m3_n30.csv").read_bytes()


def test_tail_counts_complete_graph():
    n = 7
    full = EdgeProbabilityMatrix(np.ones((n, n)) - np.eye(n))
    degrees = sample_counts(full, 3, 0)
    assert np.all(degrees[:, n - 1] == n)
    table = tail_counts(np.full((1, n), n - 1))
    assert list(table.z) == [n] * (n - 1)


def test_tail_counts_monotone(tmp_path):
    table = run_powerlaw_experiment(ExperimentConfig(ModelSpec("m3", 200), 1, 3, tmp_path))
    assert np.all(np.diff(table.z) <= 0)
    assert (tmp_path / "powerlaw_m3_n200.csv").read_text().startswith("d,Z_d,log10_d,log10_Z\n")


def test_qq_table():
    with pytest.raises(ValidationError):
        qq_table(np.ones(20))
    cfg = ExperimentConfig(ModelSpec("m1", 30), 150, 2)
    assert qq_data(cfg, 0).shape == (150, 2)
    with pytest.raises(ValidationError):
        qq_data(ExperimentConfig(ModelSpec("m1", 30), 50, 2), 0)


def test_qq_synthetic_normals():
    x = np.random.default_rng(8).standard_normal(100_000)
    table = qq_table(x)
    assert np.abs(table[:, 0] - table[:, 1])[100:-100].max() < 0.05


class TestSvg:
    def test_two_marks(self):
        svg = emit_svg([(1, 2), (3, 4)])
        assert svg.count("<circle") == 2

    def test_loglog_labels(self):
        svg = emit_svg([(1, 100), (10, 10), (100, 1)], "d", "Z_d", loglog=True)
        assert "log10(d)" in svg and "log10(Z_d)" in svg

    def test_deterministic(self):
        pts = [(1, 5.0), (2, 3.5), (4, 1.0)]
        assert emit_svg(pts, line=True).encode() == emit_svg(pts, line=True).encode()

    def test_errors(self):
        with pytest.raises(ValidationError):
            emit_svg([])
        with pytest.raises(ValidationError):
            emit_svg([(0, 1)], loglog=True)


@pytest.fixture(scope="module")
def model_runs():
    return {m: run_correlation_experiment(ExperimentConfig(ModelSpec(m, 100), 10_000, 20240517))
            for m in ("m1", "m2", "m3", "m4")}


def test_m1_top_degree_uncorrelated(model_runs):
    res = model_runs["m1"]
    top = len(res.degrees) - 1
    z = np.abs(res.corr[top, :top]) / res.se[top, :top]
    assert np.all(z <= 4.0)


def test_m3_smallest_far_from_diagonal(model_runs):
    # Counts of degrees at least 3 apart; neighbouring counts are negatively
    # correlated in every model, so the comparison excludes them.
    def far_max(res):
        ds = np.array(res.degrees)
        mask = (np.abs(ds[:, None] - ds[None, :]) >= 3) & res.defined
        return float(np.abs(res.corr[mask]).max())

    maxes = {m: far_max(r) for m, r in model_runs.items()}
    assert min(maxes, key=maxes.get) == "m3"

from lna_fim.design import SweepSpec, sweep_delta, sweep_count
from lna_fim.design import refine_optimum, compare_designs
from lna_fim.observations import ObservationDesign
from lna_fim.experiment import Experiment
from lna_fim.resources import get_data_path
from lna_fim.errors import DesignError, RegimeComparisonWarning
from lna_fim.errors import SingularFimWarning, StationaryStateError
from lna_fim.engine import stationary_state
import lna_fim
import numpy as np
import pandas as pd
import warnings
import pytest


pytestmark = pytest.mark.filterwarnings(
    "ignore::lna_fim.errors.SingularFimWarning")


def gene_experiment(regime="TS", count=10, delta=1.0, **kwargs):
    return lna_fim.make(f"GeneExpression-{regime}-v0", design_kwargs=dict(
        count=count, delta=delta, **kwargs))


def fim_at(regime, delta, count):
    return gene_experiment(regime, count=count, delta=delta).fim()


def test_time_point_information_does_not_depend_on_the_interval():
    reference = fim_at("TP", 1.0, 10)
    for delta in (0.1, 10.0):
        np.testing.assert_allclose(fim_at("TP", delta, 10), reference,
                                   rtol=1e-8)


def test_time_point_sweep_is_flat():
    experiment = gene_experiment("TP")
    spec = SweepSpec(experiment.design, [0.1, 1.0, 10.0], 10,
                     criteria=["log_det", "min_eigenvalue"])
    table = sweep_delta(experiment, spec)
    assert list(table.columns) == ["delta", "criterion", "value", "status"]
    assert (table["status"] == "ok").all()
    for criterion in ("log_det", "min_eigenvalue"):
        values = table[table["criterion"] == criterion]["value"].to_numpy()
        assert np.all(values == values[0])


def test_single_measurement_regimes_agree():
    np.testing.assert_array_equal(fim_at("TS", 1.0, 1), fim_at("TP", 1.0, 1))


def test_time_point_information_adds_up():
    single = fim_at("TP", 1.0, 1)
    for count in (2, 5, 20):
        np.testing.assert_allclose(fim_at("TP", 1.0, count), count * single,
                                   rtol=1e-8)


def test_time_series_tends_to_time_point_for_long_intervals():
    experiment = gene_experiment("TS")
    a = experiment.network.jacobian(experiment.trajectory().phi[0],
                                    experiment.point.values)
    delta = 50.0 / np.min(np.abs(np.real(np.linalg.eigvals(a))))
    ts, tp = fim_at("TS", delta, 10), fim_at("TP", delta, 10)
    assert np.max(np.abs(ts - tp)) <= 1e-3 * np.max(np.abs(tp))


def test_time_series_interval_has_an_interior_optimum():
    experiment = lna_fim.make("GeneExpression-TS-v0")
    spec = SweepSpec(experiment.design, np.geomspace(0.01, 100.0, 40), 50)
    table = sweep_delta(experiment, spec)
    deltas, values = table["delta"].to_numpy(), table["value"].to_numpy()
    best = int(np.nanargmax(values))
    assert 0 < best < len(values) - 1
    assert values[best] > values[0] and values[best] > values[-1]

    def nearest(delta):
        return int(np.argmin(np.abs(np.log(deltas / delta))))

    # the global peak near 0.7 is followed by a dip near 1.8 and a lower
    # second peak near 2.3, then the information loses rank
    assert best == nearest(0.7)
    dip, second = nearest(1.8), nearest(2.3)
    assert second == dip + 1
    assert values[dip] < values[dip - 1] and values[dip] < values[second]
    assert values[second] > values[second + 1]
    assert values[second] < values[best] - 1.0
    assert np.all(np.isfinite(values[deltas < 5.0]))
    assert np.all(np.isneginf(values[deltas > 5.5]))

    optimum = refine_optimum(table)
    assert optimum.best_delta == table["delta"][best]
    assert table["delta"][best - 1] < optimum.refined_delta \
        < table["delta"][best + 1]
    assert optimum.refined_value >= optimum.best_value - 1e-9


def test_sweeps_are_reproducible():
    experiment = gene_experiment("TS")
    spec = SweepSpec(experiment.design, [0.5, 1.0, 2.0], 10,
                     criteria=["log_det", "trace_inverse"])
    pd.testing.assert_frame_equal(sweep_delta(experiment, spec),
                                  sweep_delta(experiment, spec))


def test_parallel_sweep_matches_serial_sweep():
    experiment = gene_experiment("TS")
    spec = SweepSpec(experiment.design, [0.5, 1.0, 2.0, 4.0], 10)
    pd.testing.assert_frame_equal(sweep_delta(experiment, spec),
                                  sweep_delta(experiment, spec, workers=2))


def test_failed_design_points_become_row_errors(unstable_network):
    experiment = Experiment(unstable_network, dict(b=2.0, d=1.0),
                            dict(regime="TS", times=[1.0], observed=["x"]))
    spec = SweepSpec(experiment.design, [1.0, 2.0], 3)
    table = sweep_delta(experiment, spec)
    assert table["value"].isna().all()
    assert table["status"].str.startswith("error:").all()
    with pytest.raises(DesignError, match="no finite"):
        refine_optimum(table)


def test_count_sweep():
    experiment = gene_experiment("TS")
    table = sweep_count(experiment, [1, 4, 16], 1.0,
                        criteria=["min_eigenvalue"])
    assert list(table.columns) == ["count", "criterion", "value", "status"]
    assert list(table["count"]) == [1, 4, 16]
    values = table["value"].to_numpy()
    assert np.all(np.diff(values) >= 0.0)
    with pytest.raises(DesignError):
        sweep_count(experiment, [0], 1.0)
    with pytest.raises(DesignError):
        sweep_count(experiment, [1], -1.0)


def test_refined_optimum_of_a_parabola():
    deltas = np.geomspace(0.1, 10.0, 9)
    table = pd.DataFrame(dict(delta=deltas, criterion="log_det",
                              value=-np.log(deltas / 1.3) ** 2,
                              status="ok"))
    optimum = refine_optimum(table)
    assert optimum.refined_delta == pytest.approx(1.3, rel=1e-9)
    assert optimum.refined_value == pytest.approx(0.0, abs=1e-12)


def test_boundary_optimum_is_not_refined():
    deltas = np.array([1.0, 2.0, 4.0])
    table = pd.DataFrame(dict(delta=deltas, criterion="trace_inverse",
                              value=[1.0, 2.0, 3.0], status="ok"))
    optimum = refine_optimum(table, "trace_inverse")
    assert optimum.best_delta == 1.0
    assert optimum.refined_delta == 1.0


@pytest.mark.parametrize("config, message", [
    (dict(design="gene_expression_ts.json", count=5, deltas=[]), "empty"),
    (dict(design="gene_expression_ts.json", count=5, deltas=[-1.0]),
     "positive"),
    (dict(design="gene_expression_ts.json", deltas=[1.0]), "'count'"),
    (dict(design="gene_expression_ts.json", count=5), "'deltas'"),
    (dict(design="gene_expression_ts.json", count=5, deltas=[1.0],
          criteria=["volume"]), "unknown criterion"),
])
def test_malformed_sweeps(config, message):
    with pytest.raises(DesignError, match=message):
        SweepSpec.from_dict(config)


def test_bundled_sweep_specification():
    spec = SweepSpec.from_json(
        get_data_path("gene_expression_sweep.json"))
    assert spec.deltas.size == 40
    assert spec.deltas[0] == pytest.approx(0.01)
    assert spec.deltas[-1] == pytest.approx(100.0)
    assert spec.count == 50
    np.testing.assert_allclose(spec.design_at(2.0).times[:3],
                               [2.0, 4.0, 6.0])


def test_identical_designs_compare_equal():
    experiment = gene_experiment("TS")
    comparison = compare_designs(experiment, [experiment.design,
                                              experiment.design])
    first, second = comparison.names
    assert first != second
    np.testing.assert_array_equal(comparison.eigenvalues[first],
                                  comparison.eigenvalues[second])
    assert comparison.dominates(first, second)


def test_comparison_tables():
    experiment = gene_experiment("TS")
    comparison = compare_designs(experiment, ["TS", "TP"])
    ts, tp = comparison.names
    assert comparison.reports[tp].regime == "TP"
    frame = comparison.to_frame()
    assert frame.shape == (4, 6)
    np.testing.assert_allclose(comparison.regime_normalized[ts].max(), 1.0)
    assert comparison.global_normalized.to_numpy().max() == \
        pytest.approx(1.0)


def test_deterministic_comparison_warns():
    experiment = gene_experiment("TS")
    with pytest.warns(RegimeComparisonWarning):
        comparison = compare_designs(experiment, ["TS", "DT"],
                                     sigma_eps2=2.0)
    dt = comparison.names[1]
    assert comparison.to_dict()["regimes"][dt] == "DT"


def test_designs_must_share_times():
    experiment = gene_experiment("TS")
    other = ObservationDesign("TP", [1.0, 2.0], ["p"])
    with pytest.raises(DesignError, match="does not share"):
        compare_designs(experiment, [experiment.design, other])
    with pytest.raises(DesignError):
        compare_designs(experiment, [])


def p53_comparison(count):
    experiment = lna_fim.make("P53-TS-v0", design_kwargs=dict(count=count))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularFimWarning)
        return compare_designs(experiment, ["TS", "TP"])


def test_short_p53_time_series_dominates_time_point():
    comparison = p53_comparison(10)
    ts, tp = comparison.names
    assert comparison.dominates(ts, tp, tolerance=1e-6)

    # the feedback loop suppresses slow fluctuations, so correlated
    # samples also carry more information on the mean levels
    largest = comparison.eigenvalues.to_numpy()[0]
    assert largest[0] > 1.1 * largest[1]


@pytest.mark.slow
def test_p53_time_series_dominates_time_point():
    comparison = p53_comparison(30)
    ts, tp = comparison.names
    assert comparison.dominates(ts, tp, tolerance=1e-6)
    np.testing.assert_allclose(
        comparison.eigenvalues[ts].to_numpy()[:6],
        [2493.65, 1281.8, 1140.88, 138.608, 59.3942, 11.859], rtol=1e-3)
    np.testing.assert_allclose(
        comparison.eigenvalues[tp].to_numpy()[:5],
        [1908.48, 679.316, 205.025, 107.571, 15.4114], rtol=1e-3)


# p53 points drawn at random need not keep a stable fixed point, so they
# start from an explicit state
P53_TRANSIENT = dict(mode="explicit", phi0=[20.0, 30.0, 30.0],
                     V0=[[20.0, 0.0, 0.0], [0.0, 30.0, 0.0], [0.0, 0.0, 30.0]])


DECAY_INIT = dict(mode="explicit", phi0=[100.0], V0=[[0.0]])


REGISTERED = dict(gene="GeneExpression", p53="P53", birth_death="BirthDeath")


BUNDLED = ["gene", pytest.param("p53", marks=pytest.mark.slow),
           "birth_death", "decay"]


def bundled_experiment(model, regime, count=5, delta=1.0):
    design = dict(regime=regime, count=count, delta=delta)
    if model == "decay":
        return Experiment("decay.net", dict(g=1.0), dict(
            observed=["x"], sigma_eps2=0.0, init=DECAY_INIT, **design))
    if model == "p53":
        design["init"] = P53_TRANSIENT
    return lna_fim.make(f"{REGISTERED[model]}-{regime}-v0",
                        design_kwargs=design)


def random_points(experiment, count=50, seed=0):
    rng = np.random.default_rng(seed)
    base = experiment.point.values
    for _ in range(count):
        yield base * np.exp(rng.uniform(-0.5, 0.5, base.size))


def assert_dominates(larger, smaller):
    first = np.linalg.eigvalsh(larger)
    second = np.linalg.eigvalsh(smaller)
    assert np.all(first - second >= -1e-8 * np.max(np.abs(second)))


@pytest.mark.parametrize("model", BUNDLED)
@pytest.mark.parametrize("regime", ["TS", "TP"])
def test_information_is_positive_semidefinite(model, regime):
    experiment = bundled_experiment(model, regime)
    for theta in random_points(experiment):
        fim = experiment.at(theta).fim()
        np.testing.assert_array_equal(fim, fim.T)
        values = np.linalg.eigvalsh(fim)
        assert values.min() >= -1e-9 * max(values.max(), 1e-300)


@pytest.mark.parametrize("model", BUNDLED)
def test_time_point_information_is_a_sum_over_times(model):
    experiment = bundled_experiment(model, "TP", count=3)
    times = experiment.design.times
    for theta in random_points(experiment):
        moved = experiment.at(theta)
        total = sum(moved.with_design(moved.design.with_times([t])).fim()
                    for t in times)
        np.testing.assert_allclose(moved.fim(), total, rtol=1e-5,
                                   atol=1e-6 * np.max(np.abs(total)))


@pytest.mark.parametrize("model", BUNDLED)
@pytest.mark.parametrize("regime", ["TS", "TP"])
def test_another_observation_never_loses_information(model, regime):
    experiment = bundled_experiment(model, regime, count=4)
    times = experiment.design.times
    for theta in random_points(experiment, seed=1):
        moved = experiment.at(theta)
        longer = moved.with_design(moved.design.with_times(
            np.append(times, times[-1] + 0.5)))
        assert_dominates(longer.fim(), moved.fim())


@pytest.mark.parametrize("model, guess", [
    ("gene", None), pytest.param("p53", [30.0, 45.0, 45.0],
                                 marks=pytest.mark.slow),
    ("birth_death", None)])
def test_time_series_tends_to_time_point_at_random_points(model, guess):
    # decay is left out, its moments vanish before its samples decorrelate
    experiment = bundled_experiment(model, "TS", count=3)
    checked = 0
    for theta in random_points(experiment, seed=2):
        moved = experiment.at(theta)
        try:
            state = stationary_state(moved.network, theta, guess=guess)
        except StationaryStateError:
            continue
        a = moved.network.jacobian(state.phi, theta)
        delta = 50.0 / np.min(np.abs(np.real(np.linalg.eigvals(a))))
        if delta > 5000.0:
            continue
        design = moved.design.with_times(delta * np.arange(1.0, 4.0))
        ts = moved.with_design(design).fim()
        tp = moved.with_design(design.with_regime("TP")).fim()
        assert np.max(np.abs(ts - tp)) <= 1e-3 * np.max(np.abs(tp))
        checked += 1
    assert checked >= 40

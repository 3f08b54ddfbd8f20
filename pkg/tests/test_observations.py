from lna_fim.observations import ObservationDesign, MomentStack
from lna_fim.observations import assemble_moments, mvn_loglik, get_regime
from lna_fim.observations.moment_stack import check_covariance
from lna_fim.engine import InitialCondition, integrate_lna, stationary_state
from lna_fim.errors import DesignError, CovarianceError, JitterWarning
import numpy as np
import json
import pytest


def make_stack(mean, covariance):
    mean = np.asarray(mean, dtype=float)
    covariance = np.asarray(covariance, dtype=float)
    return MomentStack(mean, covariance, np.zeros((mean.size, 1)),
                       np.zeros(covariance.shape + (1,)))


def gene_moments(network, theta, regime, times, observed=("p",),
                 sigma_eps2=0.0):
    design = ObservationDesign(regime, times, observed,
                               sigma_eps2=sigma_eps2)
    trajectory = integrate_lna(network, theta, design.initial, design.times)
    return assemble_moments(trajectory, design)


def test_standard_normal_density():
    stack = make_stack([0.0, 0.0], np.eye(2))
    assert mvn_loglik(stack, [0.0, 0.0]) == pytest.approx(-np.log(2 * np.pi))


def test_one_dimensional_density():
    stack = make_stack([0.0], [[4.0]])
    assert mvn_loglik(stack, [2.0]) == pytest.approx(-2.112085713, abs=1e-9)


def test_batched_density():
    stack = make_stack([0.0], [[4.0]])
    values = mvn_loglik(stack, [[2.0], [0.0]])
    assert values.shape == (2,)
    assert values[0] == pytest.approx(mvn_loglik(stack, [2.0]))
    with pytest.raises(ValueError):
        mvn_loglik(stack, [1.0, 2.0])


def test_density_rejects_indefinite_covariance():
    with pytest.raises(CovarianceError):
        mvn_loglik(make_stack([0.0, 0.0], np.diag([1.0, -1.0])), [0.0, 0.0])
    with pytest.raises(CovarianceError):
        check_covariance(np.diag([1.0, -1.0]), "broken")
    check_covariance(np.diag([1.0, 0.0]), "singular")


def test_time_series_covariance(gene_network, gene_theta):
    stack = gene_moments(gene_network, gene_theta, "TS", [0.0, 1.0])
    state = stationary_state(gene_network, gene_theta)
    e1, e7 = np.exp(-1.0), np.exp(-0.7)
    c = state.v[1, 0] * 4.0 * (e7 - e1) / 0.3 + state.v[1, 1] * e7
    assert c == pytest.approx(135.53, abs=0.05)
    np.testing.assert_allclose(stack.covariance,
                               [[state.v[1, 1], c], [c, state.v[1, 1]]],
                               rtol=1e-9)
    np.testing.assert_allclose(stack.mean, [400.0 / 7.0] * 2, rtol=1e-8)


def test_time_point_covariance_is_block_diagonal(gene_network, gene_theta):
    stack = gene_moments(gene_network, gene_theta, "TP", [1.0, 2.0, 3.0],
                         observed=("r", "p"))
    for i in range(3):
        for j in range(3):
            if i != j:
                block = stack.covariance[2 * i:2 * i + 2, 2 * j:2 * j + 2]
                assert np.all(block == 0.0)
                assert np.all(stack.dcovariance[2 * i:2 * i + 2,
                                                2 * j:2 * j + 2] == 0.0)


def test_deterministic_covariance(gene_network, gene_theta):
    stack = gene_moments(gene_network, gene_theta, "DT", [1.0, 2.0, 3.0],
                         sigma_eps2=0.25)
    np.testing.assert_array_equal(stack.covariance, 0.25 * np.eye(3))
    assert np.all(stack.dcovariance == 0.0)


def test_single_time_series_equals_time_point(gene_network, gene_theta):
    ts = gene_moments(gene_network, gene_theta, "TS", [1.0])
    tp = gene_moments(gene_network, gene_theta, "TP", [1.0])
    np.testing.assert_array_equal(ts.covariance, tp.covariance)
    np.testing.assert_array_equal(ts.dcovariance, tp.dcovariance)


def test_stationary_blocks_depend_on_lag_only(gene_network, gene_theta):
    stack = gene_moments(gene_network, gene_theta, "TS",
                         np.arange(1.0, 7.0))
    for lag in range(1, 5):
        diagonal = np.diag(stack.covariance, k=lag)
        np.testing.assert_allclose(diagonal, diagonal[0], rtol=1e-9)


def test_covariance_derivatives_are_symmetric(gene_network, gene_theta):
    ic = InitialCondition("stationary", mean_scale=5.0, variance_scale=25.0)
    design = ObservationDesign("TS", [1.0, 2.0, 4.0], ["r", "p"],
                               initial=ic)
    trajectory = integrate_lna(gene_network, gene_theta, ic, design.times)
    stack = assemble_moments(trajectory, design)
    np.testing.assert_array_equal(stack.covariance, stack.covariance.T)
    np.testing.assert_array_equal(stack.dcovariance,
                                  stack.dcovariance.transpose(1, 0, 2))
    assert stack.dmean.shape == (6, 4)


def test_measurement_error_and_jitter(gene_network, gene_theta):
    plain = gene_moments(gene_network, gene_theta, "TS", [1.0, 2.0])
    noisy = gene_moments(gene_network, gene_theta, "TS", [1.0, 2.0],
                         sigma_eps2=2.0)
    np.testing.assert_allclose(noisy.covariance - plain.covariance,
                               2.0 * np.eye(2), atol=1e-9)
    design = ObservationDesign("TS", [1.0, 2.0], ["p"], jitter=1e-6)
    trajectory = integrate_lna(gene_network, gene_theta, design.initial,
                               design.times)
    with pytest.warns(JitterWarning):
        jittered = assemble_moments(trajectory, design)
    np.testing.assert_allclose(jittered.covariance - plain.covariance,
                               1e-6 * np.eye(2), atol=1e-9)


def test_missing_sensitivities_leave_zero_derivatives(gene_network,
                                                      gene_theta):
    design = ObservationDesign("TS", [1.0, 2.0], ["p"])
    trajectory = integrate_lna(gene_network, gene_theta, design.initial,
                               design.times, with_sensitivities=False)
    stack = assemble_moments(trajectory, design)
    assert np.all(stack.dmean == 0.0)
    assert np.all(stack.dcovariance == 0.0)


def test_trajectory_must_match_design(gene_network, gene_theta):
    design = ObservationDesign("TS", [1.0, 2.0], ["p"])
    trajectory = integrate_lna(gene_network, gene_theta, design.initial,
                               [1.0, 3.0])
    with pytest.raises(DesignError, match="do not match"):
        assemble_moments(trajectory, design)


def test_design_from_equidistant_grid():
    design = ObservationDesign.from_dict(dict(
        regime="TS", delta=0.5, count=4, observed=["p"], t0=1.0))
    np.testing.assert_allclose(design.times, [1.5, 2.0, 2.5, 3.0])
    assert design.name == "TS-design"
    assert design.with_regime("TP").name == "TS-design-TP"


@pytest.mark.parametrize("config, message", [
    (dict(regime="TS", times=[1.0], observed=["p"], bogus=1), "'bogus'"),
    (dict(times=[1.0], observed=["p"]), "'regime'"),
    (dict(regime="TS", observed=["p"]), "'times'"),
    (dict(regime="TS", times=[1.0], observed="p"), "'observed'"),
    (dict(regime="TS", times=[1.0], observed=["p"], sigma_eps2="x"),
     "'sigma_eps2'"),
    (dict(regime="DT", times=[1.0], observed=["p"]), "sigma_eps2"),
    (dict(regime="XX", times=[1.0], observed=["p"]), "regime"),
    (dict(regime="TS", times=[2.0, 1.0], observed=["p"]), "increasing"),
    (dict(regime="TS", times=[1.0], observed=["p", "p"]), "twice"),
])
def test_malformed_designs(config, message):
    with pytest.raises(DesignError, match=message):
        ObservationDesign.from_dict(config)


def test_design_file_is_named_after_its_stem(tmp_path):
    path = tmp_path / "short_grid.json"
    path.write_text(json.dumps(dict(regime="TP", times=[1.0, 2.0],
                                    observed=["r"])))
    design = ObservationDesign.from_json(str(path))
    assert design.name == "short_grid"
    assert design.to_dict()["regime"] == "TP"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DesignError, match="malformed design file"):
        ObservationDesign.from_json(str(bad))


def test_unknown_observed_species(gene_network):
    design = ObservationDesign("TS", [1.0], ["q"])
    with pytest.raises(DesignError, match="not in the model"):
        design.observed_indices(gene_network.species)
    np.testing.assert_array_equal(
        ObservationDesign("TS", [1.0], ["p"]).projection(
            gene_network.species), [[0.0, 1.0]])


def test_regime_flags():
    assert get_regime("TS").is_correlated
    assert not get_regime("TP").is_correlated
    assert not get_regime("DT").is_stochastic

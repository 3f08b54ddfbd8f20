from lna_fim.analytic import gene_expression_moments, correlation_bound
from lna_fim.analytic import scale_to_correlation
from lna_fim.engine.stationary import stationary_state
from lna_fim.errors import ParameterError
import numpy as np
import pytest


SET_A = dict(k_r=10.0, k_p=4.0, g_r=1.0, g_p=0.7)


def test_gene_expression_moments():
    moments = gene_expression_moments(**SET_A)
    assert moments.r == pytest.approx(10.0)
    assert moments.p == pytest.approx(400.0 / 7.0)
    assert moments.v_rp == pytest.approx(40.0 / 1.7)
    assert moments.v_pp == pytest.approx(191.596639, rel=1e-8)
    assert moments.correlation == pytest.approx(0.5376, abs=1e-4)


def test_closed_form_matches_the_stationary_solver(gene_network):
    moments = gene_expression_moments(**SET_A)
    state = stationary_state(gene_network, list(SET_A.values()))
    np.testing.assert_allclose(state.phi, [moments.r, moments.p],
                               rtol=1e-10)
    np.testing.assert_allclose(state.v, [[moments.v_rr, moments.v_rp],
                                         [moments.v_rp, moments.v_pp]],
                               rtol=1e-8)


def test_scaling_reaches_the_target_correlation():
    for target in (0.3, 0.5, 0.8):
        scaled = scale_to_correlation(SET_A, target)
        moments = gene_expression_moments(**scaled)
        assert moments.correlation == pytest.approx(target, abs=1e-10)
        assert moments.r == pytest.approx(10.0)
        assert moments.p == pytest.approx(400.0 / 7.0)
        assert scaled["k_p"] / scaled["g_p"] == pytest.approx(4.0 / 0.7)


def test_unreachable_correlations():
    bound = correlation_bound(4.0, 0.7)
    assert bound == pytest.approx(np.sqrt((4.0 / 0.7) / (1.0 + 4.0 / 0.7)))
    for target in (0.0, -0.2, bound, 0.99):
        with pytest.raises(ParameterError, match="reachable"):
            scale_to_correlation(SET_A, target)

"""Closed-form stationary moments of the single gene expression model

    0 -> r  @ k_r,   r -> r + p  @ k_p r,   r -> 0  @ g_r r,   p -> 0  @ g_p p

obtained by solving A V + V A^T + S diag(F) S^T = 0 by hand. They serve
as an independent check of the numerical stationary solver and as the
basis for choosing parameter sets with a prescribed RNA-protein
correlation.

"""

from lna_fim.errors import ParameterError
from scipy.optimize import brentq
from collections import namedtuple
import numpy as np


GeneExpressionMoments = namedtuple("GeneExpressionMoments", [
    "r", "p", "v_rr", "v_rp", "v_pp", "correlation"])


def gene_expression_moments(k_r, k_p, g_r, g_p):
    """Stationary means, variances, covariance and RNA-protein correlation
    of the gene expression model under the LNA

    """

    r = k_r / g_r
    p = k_r * k_p / (g_r * g_p)
    v_rr = r
    v_rp = k_p * r / (g_r + g_p)
    v_pp = p * (1.0 + k_p / (g_r + g_p))
    correlation = v_rp / np.sqrt(v_rr * v_pp) if p > 0 else 0.0
    return GeneExpressionMoments(r, p, v_rr, v_rp, v_pp, correlation)


def correlation_bound(k_p, g_p):
    """The supremum sqrt(q / (1 + q)), q = k_p / g_p, of the correlations
    reachable by scaling k_p and g_p by a common factor

    """

    q = k_p / g_p
    return np.sqrt(q / (1.0 + q))


def scale_to_correlation(parameters, correlation):
    """Scale k_p and g_p by a common factor c, which leaves both stationary
    means unchanged, so that the RNA-protein correlation equals a target

    Arguments:

    parameters: Mapping[str, float]
        values of k_r, k_p, g_r and g_p
    correlation: float
        the target correlation, inside (0, sqrt(q / (1 + q)))

    Returns:

    scaled: Dict[str, float]
        the parameter set with k_p and g_p multiplied by c

    """

    k_r, k_p = parameters["k_r"], parameters["k_p"]
    g_r, g_p = parameters["g_r"], parameters["g_p"]
    bound = correlation_bound(k_p, g_p)
    if not 0.0 < correlation < bound:
        raise ParameterError(f"correlation {correlation:g} is outside the "
                             f"reachable range (0, {bound:.6g})")

    # the correlation increases monotonically from 0 to the bound in c
    def gap(log_c):
        c = np.exp(log_c)
        return gene_expression_moments(
            k_r, c * k_p, g_r, c * g_p).correlation - correlation

    low, high = -1.0, 1.0
    while gap(low) > 0.0:
        low *= 2.0
    while gap(high) < 0.0:
        high *= 2.0
    c = np.exp(brentq(gap, low, high, xtol=1e-14, rtol=1e-14))

    scaled = dict(parameters)
    scaled.update(k_p=c * k_p, g_p=c * g_p)
    return scaled

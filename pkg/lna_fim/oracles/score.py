from lna_fim.observations.likelihood import mvn_loglik
from collections import namedtuple
import numpy as np


# Monte Carlo moments of the score at the true parameter point
ScoreCheck = namedtuple("ScoreCheck", [
    "mean", "standard_errors", "covariance",
    "covariance_standard_errors", "fim", "draws"])


def score_check(experiment, draws=10000, seed=0, step=1e-5):
    """Monte Carlo check of the information identity: the score has mean
    zero and covariance equal to the Fisher information

    Arguments:

    experiment: Experiment
        the network, parameter point and design, whose moments define
        the distribution the synthetic observations are drawn from
    draws: int
        the number of synthetic observation vectors
    seed: int
        the seed of numpy.random.default_rng
    step: float
        the central difference step of log-likelihoods in the reporting
        scale

    Returns:

    check: ScoreCheck
        the mean score with its standard errors, the score covariance
        with its standard errors and the Fisher information it estimates

    """

    if int(draws) < 1:
        raise ValueError("empty ensemble")
    stack = experiment.moments()
    rng = np.random.default_rng(seed)
    y = rng.multivariate_normal(stack.mean, stack.covariance,
                                size=int(draws), method="cholesky")

    # d log psi / d theta_k by central differences of whole pipelines
    point = experiment.point
    score = np.empty((int(draws), point.values.size))
    for k in range(point.values.size):
        h = step if point.is_log else step * abs(point.values[k])
        upper = experiment.at(point.perturbed(k, h).values)
        lower = experiment.at(point.perturbed(k, -h).values)
        score[:, k] = (upper.log_likelihood(y)
                       - lower.log_likelihood(y)) / (2.0 * h)

    count = score.shape[0]
    mean = score.mean(axis=0)
    deviations = score - mean
    products = np.einsum("sk,sl->skl", deviations, deviations)
    standard_errors = score.std(axis=0, ddof=1) / np.sqrt(count) \
        if count > 1 else np.full(mean.shape, np.inf)
    covariance_standard_errors = products.std(axis=0, ddof=1) \
        / np.sqrt(count) if count > 1 else np.full(products.shape[1:], np.inf)
    return ScoreCheck(mean, standard_errors,
                      products.sum(axis=0) / max(count - 1, 1),
                      covariance_standard_errors,
                      experiment.fim(), count)

from lna_fim.engine.stationary import stationary_state
from lna_fim.oracles.ssa import ssa_simulate, BLOCK_SIZE
from lna_fim.oracles.finite_difference import fd_fim
from lna_fim.oracles.score import score_check
from lna_fim.errors import NumericalError
from scipy.linalg import expm
from collections import namedtuple
import numpy as np
import abc
import logging


logger = logging.getLogger(__name__)


# the outcome of one oracle check
CheckResult = namedtuple("CheckResult", ["name", "passed", "details"])


def standard_scores(estimate, prediction, standard_errors):
    """|estimate - prediction| in units of Monte Carlo standard errors,
    zero for exact agreement and infinite for a mismatch without noise

    """

    deviation = np.abs(np.asarray(estimate) - np.asarray(prediction))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(standard_errors > 0.0,
                        deviation / standard_errors,
                        np.where(deviation == 0.0, 0.0, np.inf))


class OracleCheck(abc.ABC):
    """An abstract class for independent checks of the LNA pipeline, each
    comparing one of its outputs against a computation that does not
    share its numerical method

    Public Methods:

    name: str
        a short label of the check used in validation reports
    run(Experiment) -> CheckResult:
        evaluate the check on an experiment and report whether the
        pipeline agrees with the oracle

    """

    @property
    @abc.abstractmethod
    def name(self):
        """A short label of the check used in validation reports"""

        raise NotImplementedError

    @abc.abstractmethod
    def run(self, experiment):
        """Evaluate the check on an experiment

        Arguments:

        experiment: Experiment
            the network, parameter point and design under test

        Returns:

        result: CheckResult
            the check name, whether it passed and the numbers behind
            the verdict

        """

        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class SsaMomentCheck(OracleCheck):
    """Stationary means, covariances and lagged covariances of exact
    simulations against the stationary LNA and V Phi(s, s + lag)^T

    """

    name = "ssa_moments"

    def __init__(self, trajectories=100000, seed=0, band=3.0,
                 lags=(0.5, 1.0, 2.0), burn_in=20.0, workers=1,
                 block_size=BLOCK_SIZE):
        """Configure the ensemble behind the check

        Arguments:

        trajectories: int
            the number of simulated trajectories
        seed: int
            the root seed of the ensemble
        band: float
            the accepted deviation in Monte Carlo standard errors
        lags: Sequence[float]
            time lags of the checked autocovariances
        burn_in: float
            the simulated time before sampling, in units of the slowest
            relaxation time 1 / min |Re eig A|
        workers: int
            the number of processes simulating blocks

        """

        self.trajectories = int(trajectories)
        self.seed = int(seed)
        self.band = float(band)
        self.lags = tuple(float(lag) for lag in lags)
        self.burn_in = float(burn_in)
        self.workers = workers
        self.block_size = block_size

    def run(self, experiment):
        network, theta = experiment.network, experiment.point.values
        state = stationary_state(network, theta, config=experiment.config)
        a = network.jacobian(state.phi, theta)

        # start near the fixed point and let the chain forget x0
        slowest = float(np.min(np.abs(np.real(np.linalg.eigvals(a)))))
        start = self.burn_in / slowest
        times = start + np.concatenate([[0.0], self.lags])
        x0 = np.maximum(np.round(state.phi), 0.0)
        logger.info("ssa check with burn-in %.4g", start)
        ensemble = ssa_simulate(network, theta, x0, times,
                                self.trajectories, seed=self.seed,
                                block_size=self.block_size,
                                workers=self.workers)

        mean_z = standard_scores(ensemble.means()[0], state.phi,
                                 ensemble.mean_standard_errors()[0])
        covariance_z = standard_scores(
            ensemble.lag_covariance(0, 0), state.v,
            ensemble.lag_standard_errors(0, 0))
        lag_z = [standard_scores(
            ensemble.lag_covariance(0, i + 1), state.v @ expm(a * lag).T,
            ensemble.lag_standard_errors(0, i + 1))
            for i, lag in enumerate(self.lags)]

        worst = max([float(mean_z.max()), float(covariance_z.max())]
                    + [float(z.max()) for z in lag_z])
        return CheckResult(self.name, bool(worst <= self.band), dict(
            trajectories=self.trajectories, seed=self.seed,
            band=self.band, burn_in=start, lags=list(self.lags),
            mean_scores=mean_z.tolist(),
            covariance_scores=covariance_z.tolist(),
            lag_scores=[z.tolist() for z in lag_z],
            worst_score=worst, summary=ensemble.summary()))


class FiniteDifferenceCheck(OracleCheck):
    """Fisher information from the variational equations against central
    finite differences of re-integrated moments

    """

    name = "finite_difference"

    def __init__(self, step=1e-5, rtol=1e-3, atol=1e-6):
        self.step = float(step)
        self.rtol = float(rtol)
        self.atol = float(atol)

    def run(self, experiment):
        fim = experiment.fim()
        oracle = fd_fim(experiment, step=self.step)
        scale = float(np.max(np.abs(oracle))) if oracle.size else 0.0
        error = np.abs(fim - oracle)
        allowed = self.rtol * np.abs(oracle) + self.atol * scale
        with np.errstate(divide="ignore", invalid="ignore"):
            relative = np.where(np.abs(oracle) > 0.0,
                                error / np.abs(oracle), error)
        return CheckResult(self.name, bool(np.all(error <= allowed)), dict(
            step=self.step, rtol=self.rtol,
            max_relative_error=float(np.max(relative)) if relative.size
            else 0.0, fim=fim.tolist(), oracle=oracle.tolist()))


class ScoreIdentityCheck(OracleCheck):
    """Monte Carlo mean and covariance of the score of synthetic Gaussian
    observations against zero and the Fisher information

    """

    name = "score_identity"

    def __init__(self, draws=10000, seed=0, band=4.0, step=1e-5):
        self.draws = int(draws)
        self.seed = int(seed)
        self.band = float(band)
        self.step = float(step)

    def run(self, experiment):
        check = score_check(experiment, draws=self.draws,
                            seed=self.seed, step=self.step)
        mean_z = standard_scores(check.mean, 0.0, check.standard_errors)
        covariance_z = standard_scores(check.covariance, check.fim,
                                       check.covariance_standard_errors)
        worst = max(float(mean_z.max()), float(covariance_z.max()))
        return CheckResult(self.name, bool(worst <= self.band), dict(
            draws=self.draws, seed=self.seed, band=self.band,
            mean=check.mean.tolist(),
            mean_scores=mean_z.tolist(),
            covariance_scores=covariance_z.tolist(), worst_score=worst))


def default_checks(trajectories=100000, seed=0, band=3.0, draws=10000,
                   workers=1):
    """The full oracle suite run by the validate command"""

    return [SsaMomentCheck(trajectories=trajectories, seed=seed,
                           band=band, workers=workers),
            FiniteDifferenceCheck(),
            ScoreIdentityCheck(draws=draws, seed=seed)]


def run_validation(experiment, checks=None):
    """Run oracle checks in order and collect their results, letting
    numerical failures of the pipeline propagate

    Arguments:

    experiment: Experiment
        the network, parameter point and design under test
    checks: Sequence[OracleCheck]
        the checks to run, the default suite when None

    Returns:

    results: List[CheckResult]
        one result per check in the given order

    """

    results = []
    for check in checks if checks is not None else default_checks():
        logger.info("running oracle check %s", check.name)
        try:
            result = check.run(experiment)
        except NumericalError:
            logger.error("oracle check %s hit a numerical failure",
                         check.name)
            raise
        logger.info("oracle check %s %s", check.name,
                    "passed" if result.passed else "failed")
        results.append(result)
    return results

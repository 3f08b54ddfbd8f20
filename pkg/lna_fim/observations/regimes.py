from lna_fim.errors import DesignError
import abc
import numpy as np


class ObservationRegime(abc.ABC):
    """An abstract class describing how measurements of a reaction network
    relate to one another, which decides the block structure of the
    covariance of the stacked observations:

    Sigma_ij = cov(y(t_i), y(t_j))

    Public Attributes:

    name: str
        the short regime name used in design files, "TS", "TP" or "DT"
    is_stochastic: bool
        whether intrinsic LNA fluctuations enter the covariance
    is_correlated: bool
        whether measurements at different times are correlated

    Public Methods:

    diagonal_block(np.ndarray, np.ndarray, np.ndarray)
            -> Tuple[np.ndarray, np.ndarray]:
        the covariance of the measurement at one time and its derivative
    off_diagonal_block(LnaTrajectory, np.ndarray, int, np.ndarray,
                       np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        the covariance between two times and its derivative

    """

    @property
    @abc.abstractmethod
    def name(self):
        """The short name of the regime used in design files"""

        raise NotImplementedError

    @property
    @abc.abstractmethod
    def is_stochastic(self):
        """Whether the LNA variance contributes to the covariance"""

        raise NotImplementedError

    @property
    @abc.abstractmethod
    def is_correlated(self):
        """Whether blocks between distinct times are nonzero"""

        raise NotImplementedError

    def diagonal_block(self, observed, v, dv):
        """Covariance of the observed species at a single time

        Arguments:

        observed: np.ndarray
            indices of the M observed species
        v: np.ndarray
            the N x N LNA variance at that time
        dv: np.ndarray
            its N x N x L parameter derivative

        Returns:

        block: np.ndarray
            an M x M covariance block
        d_block: np.ndarray
            its M x M x L derivative

        """

        m, l = observed.size, dv.shape[-1]
        if not self.is_stochastic:
            return np.zeros((m, m)), np.zeros((m, m, l))
        return v[np.ix_(observed, observed)], \
            dv[np.ix_(observed, observed, np.arange(l))]

    def off_diagonal_block(self, v, dv, propagator, dpropagator, observed):
        """Covariance between the observations at t_i and t_j for i < j,
        by default zero because the measurements are independent

        Arguments:

        v: np.ndarray
            the N x N LNA variance at t_i
        dv: np.ndarray
            its N x N x L parameter derivative
        propagator: np.ndarray
            the fundamental matrix Phi(t_i, t_j)
        dpropagator: np.ndarray
            its N x N x L parameter derivative
        observed: np.ndarray
            indices of the M observed species

        Returns:

        block: np.ndarray
            an M x M covariance block
        d_block: np.ndarray
            its M x M x L derivative

        """

        m, l = observed.size, dv.shape[-1]
        return np.zeros((m, m)), np.zeros((m, m, l))

    def __repr__(self):
        return f"{type(self).__name__}()"


class TimeSeriesRegime(ObservationRegime):
    """Measurements taken along one trajectory, whose temporal covariance
    is cov(x(t_i), x(t_j)) = V(t_i) Phi(t_i, t_j)^T

    """

    name = "TS"
    is_stochastic = True
    is_correlated = True

    def off_diagonal_block(self, v, dv, propagator, dpropagator, observed):
        block = v @ propagator.T
        d_block = np.einsum("abk,cb->ack", dv, propagator) \
            + np.einsum("ab,cbk->ack", v, dpropagator)
        l = dv.shape[-1]
        return block[np.ix_(observed, observed)], \
            d_block[np.ix_(observed, observed, np.arange(l))]


class TimePointRegime(ObservationRegime):
    """Each measurement taken from a different trajectory started from the
    same initial condition, so distinct times are independent

    """

    name = "TP"
    is_stochastic = True
    is_correlated = False


class DeterministicRegime(ObservationRegime):
    """The macroscopic rate equation observed with Gaussian measurement
    error only

    """

    name = "DT"
    is_stochastic = False
    is_correlated = False


# regimes by their design file names
REGIMES = {regime.name: regime for regime in (
    TimeSeriesRegime, TimePointRegime, DeterministicRegime)}


def get_regime(name):
    """Look up an observation regime by its short name"""

    try:
        return REGIMES[str(name).upper()]()
    except KeyError:
        raise DesignError(f"regime must be one of "
                          f"{', '.join(REGIMES)}, got {name!r}")

from lna_fim.engine.propagators import compose_propagators
from lna_fim.errors import DesignError, CovarianceError, JitterWarning
from dataclasses import dataclass
from typing import Tuple
import numpy as np
import warnings
import logging


logger = logging.getLogger(__name__)


# eigenvalues below -NON_PD_TOLERANCE * trace mark a broken covariance
NON_PD_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class MomentStack(object):
    """The mean and covariance of the stacked observations
    y = (y(t_1), ..., y(t_n)) and their parameter derivatives

    Public Attributes:

    mean: np.ndarray
        the length n M stacked mean
    covariance: np.ndarray
        the n M x n M block covariance
    dmean: np.ndarray
        an n M x L matrix of mean derivatives
    dcovariance: np.ndarray
        an n M x n M x L array of covariance derivatives
    regime: str
        the data regime of the design
    design_name: str
        the label of the design the stack was assembled for
    parameters: Tuple[str]
        the parameter names indexing the last axis of the derivatives

    """

    mean: np.ndarray
    covariance: np.ndarray
    dmean: np.ndarray
    dcovariance: np.ndarray
    regime: str = "TS"
    design_name: str = "design"
    parameters: Tuple[str, ...] = ()

    def __post_init__(self):
        for array in (self.mean, self.covariance,
                      self.dmean, self.dcovariance):
            array.setflags(write=False)

    @property
    def size(self):
        return self.mean.size

    @property
    def num_parameters(self):
        return self.dmean.shape[1]


def check_covariance(covariance, design_name):
    """Raise CovarianceError when a covariance has an eigenvalue below
    -1e-8 times its trace

    """

    scale = max(float(np.trace(covariance)), np.finfo(float).tiny)
    smallest = float(np.linalg.eigvalsh(covariance).min())
    if smallest < -NON_PD_TOLERANCE * scale:
        raise CovarianceError(
            f"covariance of design {design_name} is not positive definite "
            f"(smallest eigenvalue {smallest:.6g})", stage="assemble_moments")


def assemble_moments(trajectory, design):
    """Stack the observation mean and the block covariance of a design,
    with their derivatives by the product rule

    Arguments:

    trajectory: LnaTrajectory
        the LNA solved at exactly the design times, the derivatives
        are zero when it carries no sensitivities
    design: ObservationDesign
        regime, observed species and measurement error of the experiment

    Returns:

    stack: MomentStack
        mean, covariance and their derivatives, where the covariance
        block (i, j) for i < j holds cov(y(t_i), y(t_j))

    """

    if trajectory.times.shape != design.times.shape or not np.allclose(
            trajectory.times, design.times, rtol=1e-12, atol=0.0):
        raise DesignError(f"trajectory times do not match the times of "
                          f"design {design.name}")
    regime = design.regime
    observed = design.observed_indices(trajectory.species)
    n, m = trajectory.num_times, observed.size
    l = len(trajectory.parameters)

    # without sensitivities every derivative is left at zero
    dphi, dv, dpropagators = trajectory.dphi, trajectory.dv, \
        trajectory.dpropagators
    if not trajectory.has_sensitivities:
        dphi = np.zeros(trajectory.phi.shape + (l,))
        dv = np.zeros(trajectory.v.shape + (l,))
        dpropagators = np.zeros(trajectory.propagators.shape + (l,))

    # mu_i = P phi(t_i)
    mean = trajectory.phi[:, observed].reshape(-1)
    dmean = dphi[:, observed, :].reshape(n * m, l)

    covariance = np.zeros((n * m, n * m))
    dcovariance = np.zeros((n * m, n * m, l))
    for i in range(n):
        rows = slice(i * m, (i + 1) * m)
        block, d_block = regime.diagonal_block(
            observed, trajectory.v[i], dv[i])
        covariance[rows, rows] = block
        dcovariance[rows, rows] = d_block
        if not regime.is_correlated:
            continue

        # extend Phi(t_i, t_j) one interval at a time
        propagator = np.eye(len(trajectory.species))
        dpropagator = np.zeros(propagator.shape + (l,))
        for j in range(i + 1, n):
            propagator, dpropagator = compose_propagators(
                [propagator, trajectory.propagators[j - 1]],
                [dpropagator, dpropagators[j - 1]])
            block, d_block = regime.off_diagonal_block(
                trajectory.v[i], dv[i],
                propagator, dpropagator, observed)
            cols = slice(j * m, (j + 1) * m)
            covariance[rows, cols] = block
            covariance[cols, rows] = block.T
            dcovariance[rows, cols] = d_block
            dcovariance[cols, rows] = d_block.transpose(1, 0, 2)

    # measurement error enters every diagonal block in every regime
    covariance += design.sigma_eps2 * np.eye(n * m)
    if design.jitter > 0.0:
        warnings.warn(f"jitter {design.jitter:g} added to the covariance of "
                      f"design {design.name}", JitterWarning)
        covariance += design.jitter * np.eye(n * m)

    check_covariance(covariance, design.name)
    logger.debug("assembled %d x %d covariance for design %s",
                 n * m, n * m, design.name)
    return MomentStack(mean, covariance, dmean, dcovariance,
                       regime=regime.name, design_name=design.name,
                       parameters=tuple(trajectory.parameters))

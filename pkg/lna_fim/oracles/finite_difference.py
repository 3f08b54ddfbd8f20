"""Fisher information from central finite differences of fully
re-integrated moments, an oracle for the variational equations.

Every parameter is moved by +h and -h in the reporting scale, the LNA
is integrated again without sensitivities and the stacked moments are
differenced. The information is then computed from the differenced
derivatives exactly as for the variational ones.

"""

from lna_fim.engine.integrator import integrate_lna
from lna_fim.observations.moment_stack import MomentStack, assemble_moments
from lna_fim.fisher.fisher_information import compute_fim
from lna_fim.errors import InputError
import numpy as np
import logging


logger = logging.getLogger(__name__)


# tolerances of the re-integrations, tighter than the default solver
FD_RTOL = 1e-11
FD_ATOL = 1e-12


def moments_at(experiment, point, config):
    """The stacked mean and covariance at another parameter point"""

    design = experiment.design
    trajectory = integrate_lna(experiment.network, point.values,
                               design.initial, design.times, config,
                               with_sensitivities=False, t0=design.t0)
    return assemble_moments(trajectory, design)


def fd_moment_derivatives(experiment, step=1e-5, config=None):
    """Central differences of the stacked moments in every parameter

    Arguments:

    experiment: Experiment
        the network, parameter point and design to differentiate
    step: float
        the relative step, applied to log(theta_k) on the log scale and
        as step |theta_k| on the natural scale
    config: SolverConfig
        the solver settings of every re-integration

    Returns:

    stack: MomentStack
        the moments at the experiment's point, with the finite
        difference derivatives in the reporting scale

    """

    if not step > 0.0:
        raise InputError("the finite difference step must be positive")
    config = config or experiment.config.with_updates(
        rtol=FD_RTOL, atol=FD_ATOL)
    point = experiment.point
    center = moments_at(experiment, point, config)

    dmean = np.zeros((center.size, point.values.size))
    dcovariance = np.zeros((center.size, center.size, point.values.size))
    for k, name in enumerate(point.names):
        h = step if point.is_log else step * abs(point.values[k])
        logger.debug("differencing parameter %s with step %g", name, h)
        upper = moments_at(experiment, point.perturbed(k, h), config)
        lower = moments_at(experiment, point.perturbed(k, -h), config)
        dmean[:, k] = (upper.mean - lower.mean) / (2.0 * h)
        dcovariance[:, :, k] = (upper.covariance
                                - lower.covariance) / (2.0 * h)

    return MomentStack(center.mean.copy(), center.covariance.copy(),
                       dmean, dcovariance, regime=center.regime,
                       design_name=center.design_name,
                       parameters=center.parameters)


def fd_fim(experiment, step=1e-5, config=None):
    """Fisher information of an experiment in its reporting scale with
    every moment derivative replaced by a central finite difference

    Arguments:

    experiment: Experiment
        the network, parameter point and design to evaluate
    step: float
        the relative finite difference step
    config: SolverConfig
        the solver settings of every re-integration, by default the
        experiment's settings with tolerances rtol 1e-11 and atol 1e-12

    Returns:

    fim: np.ndarray
        the symmetric L x L Fisher information matrix

    """

    # the differences are already taken in the reporting scale
    return compute_fim(fd_moment_derivatives(experiment, step, config))

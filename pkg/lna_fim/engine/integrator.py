from lna_fim.engine.lna_system import AugmentedLnaSystem, lna_terms
from lna_fim.engine.initial_condition import InitialCondition
from lna_fim.engine.solver_config import SolverConfig
from lna_fim.engine.trajectory import LnaTrajectory
from lna_fim.errors import IntegrationError, DesignError
from scipy.integrate import solve_ivp
from scipy.linalg import expm, expm_frechet
import numpy as np
import logging


logger = logging.getLogger(__name__)


# right-hand side evaluations per accepted step of each explicit pair
STAGES = dict(RK45=6, DOP853=12, RK23=3)


def check_times(times, t0):
    times = np.asarray(times, dtype=float).reshape(-1)
    if times.size == 0:
        raise DesignError("at least one observation time is required")
    if not np.all(np.isfinite(times)):
        raise DesignError("observation times must be finite")
    if np.any(np.diff(times) <= 0.0):
        raise DesignError("observation times must be strictly increasing")
    if times[0] < t0:
        raise DesignError(f"observation time {times[0]:g} precedes the "
                          f"initial time {t0:g}")
    return times


def as_initial_condition(ic):
    """Accept an InitialCondition or a bare initial mean vector"""
    if isinstance(ic, InitialCondition):
        return ic
    phi0 = np.asarray(ic, dtype=float)
    return InitialCondition("explicit", phi0=phi0,
                            v0=np.zeros((phi0.size, phi0.size)))


def integrate_mre(network, theta, ic, times, config=None, t0=0.0):
    """Solve the macroscopic rate equation phi' = S F(phi, theta, t)

    Arguments:

    network: ReactionNetwork
        the network whose mean dynamics are integrated
    theta: np.ndarray
        a length L parameter vector in natural scale
    ic: InitialCondition or np.ndarray
        the initial condition, or an explicit initial mean
    times: np.ndarray
        strictly increasing output times not before t0
    config: SolverConfig
        tolerances and step limits of the integrator
    t0: float
        the time at which the initial condition holds

    Returns:

    phi: np.ndarray
        an n x N array holding the mean at every output time

    """

    config = config or SolverConfig()
    theta = np.asarray(theta, dtype=float)
    times = check_times(times, t0)
    phi0 = as_initial_condition(ic).resolve(network, theta, config).phi

    budget = STAGES[config.method] * config.max_steps
    evaluations = [0]

    def rate_equation(t, x):
        evaluations[0] += 1
        if evaluations[0] > budget:
            raise IntegrationError(f"step budget exhausted at t={t:.6g}",
                                   stage="integration")
        return network.stoichiometry @ network.drift(x, theta, t)

    # include t0 in the solve so the initial value is reported exactly
    span = np.concatenate([[t0], times]) if times[0] > t0 else times
    if span.size == 1:
        return phi0[np.newaxis].copy()
    solution = solve_ivp(rate_equation, (span[0], span[-1]), phi0,
                         method=config.method, t_eval=span,
                         rtol=config.rtol, atol=config.atol,
                         max_step=config.max_step)
    if not solution.success:
        raise IntegrationError(solution.message, stage="integration")
    phi = solution.y.T
    return phi[1:] if times[0] > t0 else phi


def stationary_trajectory(network, theta, initial, times,
                          with_sensitivities=True):
    """The LNA of a network started at its stationary state, where the
    moments stay constant and every propagator is exp(A dt)

    """

    n, l = network.num_species, network.num_parameters
    count = times.size
    terms = lna_terms(network, initial.phi, theta,
                      dphi=initial.dphi if with_sensitivities else None)
    a = terms.jacobian

    # interval lengths of equidistant grids differ only in the last bits
    cache = {}
    propagators = np.empty((count - 1, n, n))
    dpropagators = np.empty((count - 1, n, n, l))
    for i, delta in enumerate(np.diff(times)):
        key = round(float(delta), 12)
        if key not in cache:
            derivative = np.zeros((n, n, l))
            if with_sensitivities:
                for k in range(l):
                    derivative[:, :, k] = expm_frechet(
                        a * delta, terms.jacobian_sensitivity[:, :, k]
                        * delta, compute_expm=False)
            cache[key] = (expm(a * delta), derivative)
        propagators[i], derivative = cache[key]
        if with_sensitivities:
            dpropagators[i] = derivative

    def repeat(array):
        return np.repeat(array[np.newaxis], count, axis=0)

    return LnaTrajectory(
        network.species, network.parameters, times,
        repeat(initial.phi), repeat(initial.v), propagators,
        repeat(initial.dphi) if with_sensitivities else None,
        repeat(initial.dv) if with_sensitivities else None,
        dpropagators if with_sensitivities else None)


def integrate_lna(network, theta, ic, times, config=None,
                  with_sensitivities=True, t0=0.0):
    """Integrate the mean, variance and interval propagators of the LNA
    together with their parameter sensitivities

    Arguments:

    network: ReactionNetwork
        the network whose LNA is integrated
    theta: np.ndarray
        a length L parameter vector in natural scale
    ic: InitialCondition or np.ndarray
        the initial condition at t0
    times: np.ndarray
        strictly increasing observation times not before t0
    config: SolverConfig
        tolerances and step limits of the integrator
    with_sensitivities: bool
        whether the variational equations are integrated as well
    t0: float
        the time at which the initial condition holds

    Returns:

    trajectory: LnaTrajectory
        means, variances and propagators at the observation times, the
        propagators restarted at the identity on every interval

    """

    config = config or SolverConfig()
    theta = np.asarray(theta, dtype=float)
    times = check_times(times, t0)
    initial = as_initial_condition(ic).resolve(network, theta, config)

    if initial.is_stationary and network.is_autonomous \
            and config.stationary_shortcut:
        logger.info("stationary start, using matrix exponentials for "
                    "%d intervals", times.size - 1)
        return stationary_trajectory(network, theta, initial, times,
                                     with_sensitivities)

    n, l = network.num_species, network.num_parameters
    system = AugmentedLnaSystem(
        network, theta, with_sensitivities=with_sensitivities,
        max_evaluations=STAGES[config.method] * config.max_steps)

    def advance(y, start, stop):
        if stop <= start:
            return y
        system.evaluations = 0
        solution = solve_ivp(system, (start, stop), y,
                             method=config.method, rtol=config.rtol,
                             atol=config.atol, max_step=config.max_step)
        if not solution.success:
            raise IntegrationError(f"{solution.message} on "
                                   f"[{start:g}, {stop:g}]",
                                   stage="integration")
        return solution.y[:, -1]

    def restart(y):
        phi, v, _, dphi, dv, _ = system.unpack(y)
        return system.pack(phi, v, np.eye(n), dphi, dv, np.zeros((n, n, l)))

    count = times.size
    phi = np.empty((count, n))
    v = np.empty((count, n, n))
    propagators = np.empty((count - 1, n, n))
    dphi = np.empty((count, n, l))
    dv = np.empty((count, n, n, l))
    dpropagators = np.empty((count - 1, n, n, l))

    y = system.pack(initial.phi, initial.v, np.eye(n), initial.dphi,
                    initial.dv, np.zeros((n, n, l)))
    y = advance(y, t0, times[0])
    for i in range(count):

        # every interval propagator starts at Phi(s, s) = I
        if i > 0:
            y = advance(restart(y), times[i - 1], times[i])
        state = system.unpack(y)
        phi[i], v[i] = state[0], state[1]
        if i > 0:
            propagators[i - 1] = state[2]
        if with_sensitivities:
            dphi[i], dv[i] = state[3], state[4]
            if i > 0:
                dpropagators[i - 1] = state[5]

    logger.debug("integrated %d intervals of %s", count, network)
    return LnaTrajectory(
        network.species, network.parameters, times, phi, v, propagators,
        dphi if with_sensitivities else None,
        dv if with_sensitivities else None,
        dpropagators if with_sensitivities else None)

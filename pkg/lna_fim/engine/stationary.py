from lna_fim.engine.lna_system import lna_terms
from lna_fim.engine.solver_config import SolverConfig
from lna_fim.errors import StationaryStateError, NumericalError
from scipy.integrate import solve_ivp
from scipy.linalg import solve_continuous_lyapunov
from scipy import optimize
from collections import namedtuple
import numpy as np
import logging


logger = logging.getLogger(__name__)


# residual of the fixed point relative to the size of the rates
FIXED_POINT_TOLERANCE = 1e-10


# largest accepted Lyapunov residual relative to the diffusion matrix
LYAPUNOV_TOLERANCE = 1e-9


# how long the macroscopic equation is relaxed before retrying a solve
RELAXATION_TIME = 1e3


StationaryState = namedtuple("StationaryState", ["phi", "v", "dphi", "dv"])


def relax(network, theta, guess, config):
    """Integrate the macroscopic rate equation from a guess for a long
    time, moving the guess into the basin of a stable fixed point

    """

    solution = solve_ivp(
        lambda t, x: network.stoichiometry @ network.drift(x, theta, 0.0),
        (0.0, RELAXATION_TIME), guess, method=config.method,
        rtol=config.rtol, atol=config.atol)
    if not solution.success:
        raise StationaryStateError(f"relaxation failed: {solution.message}",
                                   stage="stationary_state")
    return solution.y[:, -1]


def solve_fixed_point(network, theta, guess, config):
    """Find phi with S F(phi, theta) = 0 using a Powell hybrid solver with
    the analytic Jacobian, polished by a few Newton steps

    """

    def residual(x):
        return network.stoichiometry @ network.drift(x, theta, 0.0)

    def jacobian(x):
        return network.jacobian(x, theta, 0.0)

    def attempt(start):
        result = optimize.root(residual, start, jac=jacobian, method="hybr")
        x = result.x

        # a few Newton steps remove the last digits of the residual
        for _ in range(3):
            try:
                step = np.linalg.solve(jacobian(x), residual(x))
            except np.linalg.LinAlgError:
                break
            x = x - step
        return x

    def converged(x):
        rates = network.drift(x, theta, 0.0)
        scale = max(1.0, float(np.max(np.abs(rates))))
        return np.all(np.isfinite(x)) and \
            np.max(np.abs(residual(x))) < FIXED_POINT_TOLERANCE * scale

    guess = np.asarray(guess, dtype=float)
    try:
        x = attempt(guess)
        if converged(x):
            return x
    except NumericalError:
        pass

    # retry from the end of a long relaxation of the rate equation
    logger.info("fixed point solve failed from %s, relaxing the "
                "rate equation first", guess)
    x = attempt(relax(network, theta, guess, config))
    if not converged(x):
        raise StationaryStateError("Newton iteration did not converge to a "
                                   "fixed point", stage="stationary_state")
    return x


def lyapunov(a, q):
    """Solve A X + X A^T + Q = 0 and symmetrize the solution"""
    x = solve_continuous_lyapunov(a, -q)
    return 0.5 * (x + x.T)


def stationary_state(network, theta, guess=None, config=None):
    """Solve for the stationary mean and variance of the LNA and for their
    parameter sensitivities by implicit differentiation

    Arguments:

    network: ReactionNetwork
        an autonomous reaction network
    theta: np.ndarray
        a length L parameter vector in natural scale
    guess: np.ndarray
        a starting point in the basin of a hyperbolic fixed point, by
        default a vector of ones
    config: SolverConfig
        tolerances used when the rate equation must be relaxed first

    Returns:

    state: StationaryState
        phi (N,), v (N, N), dphi (N, L) and dv (N, N, L)

    """

    config = config or SolverConfig()
    theta = np.asarray(theta, dtype=float)
    if guess is None:
        guess = np.ones(network.num_species)

    phi = solve_fixed_point(network, theta, guess, config)
    terms = lna_terms(network, phi, theta)
    a = terms.jacobian

    # the Lyapunov equation is well posed only for a Hurwitz matrix A
    growth = np.max(np.real(np.linalg.eigvals(a)))
    if not growth < 0.0:
        raise StationaryStateError(
            f"no stable stationary LNA (largest real part of an "
            f"eigenvalue of A is {growth:.6g})", stage="stationary_state")

    v = lyapunov(a, terms.diffusion)
    residual = np.max(np.abs(a @ v + v @ a.T + terms.diffusion))
    scale = max(np.max(np.abs(terms.diffusion)), np.finfo(float).tiny)
    if residual > LYAPUNOV_TOLERANCE * scale:
        raise StationaryStateError(f"Lyapunov residual {residual:.3g} is "
                                   f"too large", stage="stationary_state")

    # differentiate S F(phi*) = 0 and the Lyapunov equation in theta
    dphi = -np.linalg.solve(a, terms.parameter_source)
    terms = lna_terms(network, phi, theta, dphi=dphi)
    dv = np.empty(v.shape + (network.num_parameters,))
    for k in range(network.num_parameters):
        a_k = terms.jacobian_sensitivity[:, :, k]
        dv[:, :, k] = lyapunov(a, a_k @ v + v @ a_k.T
                               + terms.diffusion_sensitivity[:, :, k])

    logger.info("stationary state found at phi=%s", phi)
    return StationaryState(phi, v, dphi, dv)

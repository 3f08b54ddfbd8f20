"""Right-hand sides of the linear noise approximation and of its
parameter sensitivities.

The macroscopic rate equation, the fluctuation variance and the
fundamental matrix evolve as

    phi' = S F(phi, theta, t)
    V'   = A V + V A^T + S diag(F) S^T
    Phi' = A Phi

and differentiating every equation in theta_k gives the variational
companions integrated alongside them. The variance is carried as its
packed upper triangle, so it is symmetric by construction.

"""

from lna_fim.networks.reaction_network import clamp_rates
from lna_fim.errors import IntegrationError
from collections import namedtuple
import numpy as np


# the local quantities shared by the ODE and the stationary solver
LnaTerms = namedtuple("LnaTerms", [
    "drift", "jacobian", "diffusion", "parameter_source",
    "jacobian_sensitivity", "diffusion_sensitivity"])


def lna_terms(network, phi, theta, t=0.0, dphi=None):
    """Evaluate the drift, the matrices A and S diag(F) S^T and, when the
    mean sensitivities are given, the total parameter derivatives of
    A and of S diag(F) S^T

    Arguments:

    network: ReactionNetwork
        the reaction network whose rates are evaluated
    phi: np.ndarray
        a length N macroscopic state
    theta: np.ndarray
        a length L parameter vector in natural scale
    t: float
        the time at which rates are evaluated
    dphi: np.ndarray
        an N x L matrix of mean sensitivities d phi / d theta, or None
        to skip the sensitivity terms

    Returns:

    terms: LnaTerms
        drift S F (N,), jacobian A (N, N), diffusion (N, N),
        parameter_source S dF/dtheta (N, L), jacobian_sensitivity
        (N, N, L) and diffusion_sensitivity (N, N, L), the last two
        None when dphi is None

    """

    s = network.stoichiometry.astype(float)
    d = network.rate_derivatives(phi, theta, t, second_order=dphi is not None)
    rates = clamp_rates(d.rates)

    jacobian = s @ d.d_species
    diffusion = (s * rates) @ s.T
    parameter_source = s @ d.d_parameters
    if dphi is None:
        return LnaTerms(s @ d.rates, jacobian, diffusion,
                        parameter_source, None, None)

    # total derivatives follow phi through its own sensitivity
    total_rate = d.d_parameters + d.d_species @ dphi
    mixed = d.d_species_parameters + np.einsum(
        "rnm,mk->rnk", d.d_species_species, dphi)
    jacobian_sensitivity = np.einsum("ir,rnk->ink", s, mixed)
    diffusion_sensitivity = np.einsum("ir,rk,jr->ijk", s, total_rate, s)
    return LnaTerms(s @ d.rates, jacobian, diffusion, parameter_source,
                    jacobian_sensitivity, diffusion_sensitivity)


class AugmentedLnaSystem(object):
    """The right-hand side of the joint ODE for (phi, V, Phi) and, when
    requested, their L parameter sensitivities, flattened into one state
    vector so every component shares a single adaptive time grid

    Public Attributes:

    network: ReactionNetwork
        the network whose LNA is integrated
    theta: np.ndarray
        a length L parameter vector in natural scale
    with_sensitivities: bool
        whether the variational companions are part of the state
    evaluations: int
        the number of right-hand side evaluations made so far

    Public Methods:

    pack(...) -> np.ndarray:
        flattens the state matrices into a vector
    unpack(np.ndarray) -> Tuple[np.ndarray]:
        rebuilds the state matrices from a vector
    __call__(float, np.ndarray) -> np.ndarray:
        the time derivative consumed by scipy.integrate.solve_ivp

    """

    def __init__(self, network, theta, with_sensitivities=True,
                 max_evaluations=None):
        self.network = network
        self.theta = np.asarray(theta, dtype=float)
        self.with_sensitivities = with_sensitivities
        self.max_evaluations = max_evaluations
        self.evaluations = 0

        n, l = network.num_species, network.num_parameters
        self.upper = np.triu_indices(n)
        self.lower = (self.upper[1], self.upper[0])
        packed = len(self.upper[0])

        # sizes of the consecutive blocks of the flat state
        sizes = [n, packed, n * n]
        if with_sensitivities:
            sizes += [n * l, packed * l, n * n * l]
        self.offsets = np.cumsum([0] + sizes)

    @property
    def size(self):
        return int(self.offsets[-1])

    def symmetric(self, packed, extra=()):
        n = self.network.num_species
        matrix = np.zeros((n, n) + tuple(extra))
        matrix[self.upper] = packed
        matrix[self.lower] = packed
        return matrix

    def pack(self, phi, v, propagator, dphi=None, dv=None, dpropagator=None):
        blocks = [phi, v[self.upper], propagator]
        if self.with_sensitivities:
            blocks += [dphi, dv[self.upper], dpropagator]
        return np.concatenate([np.ravel(b) for b in blocks])

    def unpack(self, y):
        n, l = self.network.num_species, self.network.num_parameters
        b = [y[self.offsets[i]:self.offsets[i + 1]]
             for i in range(len(self.offsets) - 1)]
        phi = b[0]
        v = self.symmetric(b[1])
        propagator = b[2].reshape(n, n)
        if not self.with_sensitivities:
            return phi, v, propagator, None, None, None
        dphi = b[3].reshape(n, l)
        dv = self.symmetric(b[4].reshape(-1, l), extra=(l,))
        dpropagator = b[5].reshape(n, n, l)
        return phi, v, propagator, dphi, dv, dpropagator

    def __call__(self, t, y):
        self.evaluations += 1
        if self.max_evaluations is not None \
                and self.evaluations > self.max_evaluations:
            raise IntegrationError(f"step budget exhausted at t={t:.6g}",
                                   stage="integration")

        phi, v, propagator, dphi, dv, dpropagator = self.unpack(y)
        terms = lna_terms(self.network, phi, self.theta, t, dphi=dphi)
        a = terms.jacobian

        # the macroscopic rate equation and fluctuation-dissipation relation
        d_phi = terms.drift
        d_v = a @ v + v @ a.T + terms.diffusion
        d_propagator = a @ propagator
        if not self.with_sensitivities:
            return self.pack(d_phi, d_v, d_propagator)

        # variational equations obtained by differentiating in theta
        a_tilde = terms.jacobian_sensitivity
        d_dphi = a @ dphi + terms.parameter_source
        x = np.einsum("ij,jmk->imk", a, dv) \
            + np.einsum("ijk,jm->imk", a_tilde, v)
        d_dv = x + x.transpose(1, 0, 2) + terms.diffusion_sensitivity
        d_dpropagator = np.einsum("ij,jmk->imk", a, dpropagator) \
            + np.einsum("ijk,jm->imk", a_tilde, propagator)
        return self.pack(d_phi, d_v, d_propagator,
                         d_dphi, d_dv, d_dpropagator)

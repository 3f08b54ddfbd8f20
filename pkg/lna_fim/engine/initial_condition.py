from lna_fim.engine.stationary import stationary_state
from lna_fim.errors import DesignError
from collections import namedtuple
import numpy as np


# initial values of the LNA state and of its parameter sensitivities
ResolvedInitialCondition = namedtuple("ResolvedInitialCondition", [
    "phi", "v", "dphi", "dv", "is_stationary"])


INITIAL_MODES = ("explicit", "stationary")


class InitialCondition(object):
    """The state of the LNA at the first time of an experiment, either
    given explicitly or taken from the stationary solution, optionally
    with the stationary mean and variance scaled by constant factors

    Public Attributes:

    mode: str
        "explicit" or "stationary"
    phi0: np.ndarray
        the explicit initial mean (copy numbers), None when stationary
    v0: np.ndarray
        the explicit initial variance, None when stationary
    mean_scale: float
        a factor applied to the stationary mean
    variance_scale: float
        a factor applied to the stationary variance
    guess: np.ndarray
        a starting point for the stationary solver, or None

    Public Methods:

    resolve(ReactionNetwork, np.ndarray, SolverConfig)
            -> ResolvedInitialCondition:
        computes the initial mean and variance at a parameter point,
        with their sensitivities

    """

    def __init__(self, mode="stationary", phi0=None, v0=None,
                 mean_scale=1.0, variance_scale=1.0, guess=None):
        if mode not in INITIAL_MODES:
            raise DesignError(f"init.mode must be one of "
                              f"{', '.join(INITIAL_MODES)}, got {mode!r}")

        self.mode = mode
        self.mean_scale = float(mean_scale)
        self.variance_scale = float(variance_scale)
        self.guess = None if guess is None \
            else np.asarray(guess, dtype=float)
        self.phi0 = None if phi0 is None else np.asarray(phi0, dtype=float)
        self.v0 = None if v0 is None else np.asarray(v0, dtype=float)

        if mode == "explicit":
            self.validate_explicit()
        elif self.mean_scale <= 0.0 or self.variance_scale < 0.0:
            raise DesignError("init.mean_scale must be positive and "
                              "init.variance_scale nonnegative")

    def validate_explicit(self):
        if self.phi0 is None:
            raise DesignError("init.phi0 is required in explicit mode")
        if self.v0 is None:
            raise DesignError("init.V0 is required in explicit mode")
        n = self.phi0.size
        if self.phi0.ndim != 1 or self.v0.shape != (n, n):
            raise DesignError(f"init.V0 must be a {n} x {n} matrix")
        if not np.allclose(self.v0, self.v0.T, rtol=0.0, atol=1e-12):
            raise DesignError("init.V0 must be symmetric")
        if np.linalg.eigvalsh(self.v0).min() < \
                -1e-12 * max(1.0, np.trace(self.v0)):
            raise DesignError("init.V0 must be positive semidefinite")

    @property
    def is_stationary(self):
        """True for the unscaled stationary state, along which the LNA
        moments do not change in time

        """

        return self.mode == "stationary" and self.mean_scale == 1.0 \
            and self.variance_scale == 1.0

    @classmethod
    def from_dict(cls, config):
        """Build an initial condition from the 'init' object of a design
        file, citing the offending key on errors

        """

        if not isinstance(config, dict):
            raise DesignError("init must be an object")
        known = {"mode", "phi0", "V0", "mean_scale",
                 "variance_scale", "guess"}
        unknown = sorted(set(config) - known)
        if unknown:
            raise DesignError(f"unknown key init.{unknown[0]}")
        try:
            return cls(mode=config.get("mode", "stationary"),
                       phi0=config.get("phi0"), v0=config.get("V0"),
                       mean_scale=config.get("mean_scale", 1.0),
                       variance_scale=config.get("variance_scale", 1.0),
                       guess=config.get("guess"))
        except (TypeError, ValueError) as error:
            if isinstance(error, DesignError):
                raise
            raise DesignError(f"malformed init: {error}")

    def to_dict(self):
        config = dict(mode=self.mode)
        if self.mode == "explicit":
            config.update(phi0=self.phi0.tolist(), V0=self.v0.tolist())
        else:
            config.update(mean_scale=self.mean_scale,
                          variance_scale=self.variance_scale)
        if self.guess is not None:
            config["guess"] = self.guess.tolist()
        return config

    def resolve(self, network, theta, config=None):
        """Initial mean and variance at a parameter point

        Arguments:

        network: ReactionNetwork
            the network the initial condition belongs to
        theta: np.ndarray
            a length L parameter vector in natural scale
        config: SolverConfig
            solver settings for the stationary solve

        Returns:

        initial: ResolvedInitialCondition
            phi (N,), v (N, N), dphi (N, L), dv (N, N, L) and a flag that
            is true for the unscaled stationary state

        """

        n, l = network.num_species, network.num_parameters
        if self.mode == "explicit":
            if self.phi0.size != n:
                raise DesignError(f"init.phi0 has {self.phi0.size} entries "
                                  f"but the model has {n} species")

            # explicit values do not depend on the parameters
            return ResolvedInitialCondition(
                self.phi0.copy(), self.v0.copy(),
                np.zeros((n, l)), np.zeros((n, n, l)), False)

        state = stationary_state(network, theta, guess=self.guess,
                                 config=config)
        return ResolvedInitialCondition(
            self.mean_scale * state.phi, self.variance_scale * state.v,
            self.mean_scale * state.dphi, self.variance_scale * state.dv,
            self.is_stationary)

    def __repr__(self):
        return f"InitialCondition({self.to_dict()})"

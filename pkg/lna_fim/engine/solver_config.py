from lna_fim.errors import InputError
from dataclasses import dataclass, asdict, replace
import numpy as np


# explicit embedded Runge-Kutta schemes accepted by scipy.integrate.solve_ivp
EXPLICIT_METHODS = ("RK45", "DOP853", "RK23")


@dataclass(frozen=True)
class SolverConfig(object):
    """Tolerances and limits for every ODE solve in the pipeline

    Public Attributes:

    rtol: float
        relative tolerance of the adaptive step control
    atol: float
        absolute tolerance of the adaptive step control
    max_step: float
        the largest step the integrator may take, in model time units
    max_steps: int
        the step budget of a single integration segment, exceeding it
        raises IntegrationError
    method: str
        the explicit embedded Runge-Kutta pair used by solve_ivp
    stationary_shortcut: bool
        whether stationary initial conditions of autonomous networks use
        matrix exponentials instead of integrating the propagators

    """

    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: float = np.inf
    max_steps: int = 100000
    method: str = "RK45"
    stationary_shortcut: bool = True

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise InputError("solver tolerances must be positive")
        if not self.max_step > 0:
            raise InputError("max_step must be positive")
        if int(self.max_steps) < 1:
            raise InputError("max_steps must be at least one")
        if self.method not in EXPLICIT_METHODS:
            raise InputError(f"unsupported integration method "
                             f"{self.method!r} (choose from "
                             f"{', '.join(EXPLICIT_METHODS)})")

    def tightened(self, factor):
        """A copy with both tolerances divided by factor"""
        return replace(self, rtol=self.rtol / factor,
                       atol=self.atol / factor)

    def with_updates(self, **kwargs):
        return replace(self, **kwargs)

    def to_dict(self):
        config = asdict(self)
        config["max_step"] = None if np.isinf(self.max_step) \
            else float(self.max_step)
        return config

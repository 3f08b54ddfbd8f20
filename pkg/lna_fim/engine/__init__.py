from .solver_config import SolverConfig
from .initial_condition import InitialCondition
from .stationary import stationary_state, StationaryState
from .integrator import integrate_mre, integrate_lna
from .propagators import compose_propagators
from .trajectory import LnaTrajectory

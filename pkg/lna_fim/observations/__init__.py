from .regimes import ObservationRegime, TimeSeriesRegime
from .regimes import TimePointRegime, DeterministicRegime, get_regime
from .observation_design import ObservationDesign
from .moment_stack import MomentStack, assemble_moments
from .likelihood import mvn_loglik

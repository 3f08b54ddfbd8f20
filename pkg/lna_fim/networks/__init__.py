from .expressions import Expr, eval_expr, differentiate
from .reaction_network import ReactionNetwork, RateDerivatives
from .parameter_point import ParameterPoint
from .parser import parse_model, format_model

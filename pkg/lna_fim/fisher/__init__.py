from .fisher_information import compute_fim
from .analysis import eigen_analysis, sensitivity_coefficients
from .analysis import identifiability_rank, cramer_rao, optimality_scalars
from .neutral_space import neutral_ellipse, NeutralEllipse
from .fim_report import FimReport

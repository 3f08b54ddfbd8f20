from .ssa import SsaEnsemble, ssa_simulate
from .finite_difference import fd_fim, fd_moment_derivatives
from .score import score_check
from .oracle_check import OracleCheck, SsaMomentCheck, FiniteDifferenceCheck
from .oracle_check import ScoreIdentityCheck, CheckResult
from .oracle_check import default_checks, run_validation

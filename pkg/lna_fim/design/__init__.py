from .sweep import SweepSpec, sweep_delta, sweep_count, refine_optimum
from .comparison import DesignComparison, compare_designs

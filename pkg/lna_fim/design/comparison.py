from lna_fim.observations.observation_design import ObservationDesign
from lna_fim.errors import DesignError, RegimeComparisonWarning
import numpy as np
import pandas as pd
import warnings
import logging


logger = logging.getLogger(__name__)


class DesignComparison(object):
    """Fisher information reports of several designs evaluated at the same
    parameter point with the same number of measurements, with their
    eigenvalue spectra aligned and normalized

    Public Attributes:

    names: List[str]
        the design labels in the order they were compared
    reports: Dict[str, FimReport]
        the report of each design
    regime_normalized: pd.DataFrame
        eigenvalues of each design divided by its own largest eigenvalue
    global_normalized: pd.DataFrame
        eigenvalues of each design divided by the largest eigenvalue
        over every design

    """

    def __init__(self, names, reports):
        self.names = list(names)
        self.reports = dict(zip(self.names, reports))
        self.eigenvalues = pd.DataFrame(
            {name: self.reports[name].eigenvalues for name in self.names},
            index=pd.RangeIndex(1, len(reports[0].eigenvalues) + 1,
                                name="index"))

        def normalize(values, scale):
            return values / scale if scale > 0.0 else values * 0.0

        self.regime_normalized = pd.DataFrame(
            {name: normalize(self.eigenvalues[name],
                             self.eigenvalues[name].max())
             for name in self.names})
        largest = float(self.eigenvalues.to_numpy().max())
        self.global_normalized = self.eigenvalues.apply(
            lambda column: normalize(column, largest))

    def dominates(self, first, second, tolerance=0.0):
        """Whether every sorted eigenvalue of the first design is at least
        the matching eigenvalue of the second

        """

        difference = self.eigenvalues[first] - self.eigenvalues[second]
        scale = max(float(self.eigenvalues[second].max()), 0.0)
        return bool(np.all(difference >= -tolerance * scale))

    def to_frame(self):
        """One row per eigenvalue index with raw and normalized columns"""

        columns = {}
        for name in self.names:
            columns[f"{name}"] = self.eigenvalues[name]
            columns[f"{name}_regime"] = self.regime_normalized[name]
            columns[f"{name}_global"] = self.global_normalized[name]
        return pd.DataFrame(columns, index=self.eigenvalues.index)

    def to_dict(self):
        return dict(
            designs=self.names,
            parameters=list(self.reports[self.names[0]].parameters),
            regimes={name: self.reports[name].regime for name in self.names},
            eigenvalues={name: self.eigenvalues[name].tolist()
                         for name in self.names},
            regime_normalized={name: self.regime_normalized[name].tolist()
                               for name in self.names},
            global_normalized={name: self.global_normalized[name].tolist()
                               for name in self.names},
            reports={name: self.reports[name].to_dict()
                     for name in self.names})


def compare_designs(experiment, designs, sigma_eps2=1.0):
    """Evaluate several designs on one network at one parameter point

    Arguments:

    experiment: Experiment
        the network, parameter point and solver settings
    designs: Sequence[Union[ObservationDesign, str]]
        designs, or regime names applied to the experiment's own design
    sigma_eps2: float
        measurement error used when a regime name turns a stochastic
        design into a deterministic one without measurement error

    Returns:

    comparison: DesignComparison
        aligned reports and eigenvalue tables

    """

    if len(designs) == 0:
        raise DesignError("at least one design is required")

    experiments = []
    for design in designs:
        if isinstance(design, ObservationDesign):
            experiments.append(experiment.with_design(design))
            continue
        regime = str(design).upper()
        noise = experiment.design.sigma_eps2
        if regime == "DT" and noise <= 0.0:
            noise = sigma_eps2
        experiments.append(experiment.with_regime(regime, noise))

    # comparisons are only meaningful for the same sampling times
    times = experiments[0].design.times
    for other in experiments[1:]:
        if other.design.times.shape != times.shape \
                or not np.allclose(other.design.times, times):
            raise DesignError(f"design {other.design.name} does not share "
                              f"the times of {experiments[0].design.name}")

    stochastic = {e.design.regime.is_stochastic for e in experiments}
    if len(stochastic) > 1:
        warnings.warn("absolute DT information depends on sigma_eps2 and "
                      "cannot be compared directly with TS or TP",
                      RegimeComparisonWarning)

    names, reports = [], []
    for index, other in enumerate(experiments):
        name = other.design.name
        if name in names:
            name = f"{name}-{index}"
        logger.info("evaluating design %s", name)
        names.append(name)
        reports.append(other.report())
    return DesignComparison(names, reports)

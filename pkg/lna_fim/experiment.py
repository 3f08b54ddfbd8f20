from lna_fim.networks.parser import parse_model
from lna_fim.networks.reaction_network import ReactionNetwork
from lna_fim.networks.parameter_point import ParameterPoint
from lna_fim.engine.solver_config import SolverConfig
from lna_fim.engine.integrator import integrate_lna
from lna_fim.observations.observation_design import ObservationDesign
from lna_fim.observations.moment_stack import assemble_moments
from lna_fim.observations.likelihood import mvn_loglik
from lna_fim.fisher.fisher_information import compute_fim
from lna_fim.fisher.fim_report import FimReport
from lna_fim.fisher.neutral_space import neutral_ellipse
from lna_fim.fisher.analysis import RANK_TOLERANCE
from lna_fim.resources import ModelResource
from lna_fim.errors import InputError
import numpy as np


def load_network(model):
    """Accept a ReactionNetwork, or a path or bundled name of model source"""

    if isinstance(model, ReactionNetwork):
        return model
    if isinstance(model, str):
        resource = ModelResource.locate(model)
        if not resource.is_available:
            raise InputError(f"model file {model} not found")
        return parse_model(resource.read_text())
    raise InputError("model could not be loaded")


def load_point(network, parameters, scale="log"):
    """Accept a ParameterPoint, a name to value mapping, or a path or
    bundled name of a parameter file

    """

    if isinstance(parameters, ParameterPoint):
        return parameters.with_scale(scale)
    if isinstance(parameters, dict):
        return ParameterPoint.from_mapping(network, parameters, scale=scale)
    if isinstance(parameters, str):
        resource = ModelResource.locate(parameters)
        if not resource.is_available:
            raise InputError(f"parameter file {parameters} not found")
        return ParameterPoint.from_json(network, resource.path, scale=scale)
    raise InputError("parameters could not be loaded")


def load_design(design):
    """Accept an ObservationDesign, a design object, or a path or bundled
    name of a design file

    """

    if isinstance(design, ObservationDesign):
        return design
    if isinstance(design, dict):
        return ObservationDesign.from_dict(design)
    if isinstance(design, str):
        resource = ModelResource.locate(design)
        if not resource.is_available:
            raise InputError(f"design file {design} not found")
        return ObservationDesign.from_json(resource.path)
    raise InputError("design could not be loaded")


class Experiment(object):
    """A container pairing a reaction network at a parameter point with an
    observation design, which runs the pipeline

    trajectory -> moments -> Fisher information -> report

    and caches every stage

    Public Attributes:

    network: ReactionNetwork
        the reaction network whose LNA is analysed
    point: ParameterPoint
        the parameter values and the reporting scale
    design: ObservationDesign
        the regime, times, observed species and initial condition
    config: SolverConfig
        tolerances of every ODE solve
    rank_tolerance: float
        the relative threshold of the identifiability rank
    name: str
        a label for reports, the registered name when made from the registry

    Public Methods:

    trajectory() -> LnaTrajectory:
        the LNA solved at the design times with sensitivities
    moments() -> MomentStack:
        the stacked observation mean and covariance
    fim() -> np.ndarray:
        the Fisher information in the reporting scale
    report() -> FimReport:
        every analysis of the Fisher information
    ellipse(float, Tuple[int, int], bool) -> NeutralEllipse:
        a two-parameter cross-section of the neutral space
    log_likelihood(np.ndarray) -> float:
        the Gaussian log density of observations under the design
    at(np.ndarray) -> Experiment:
        the same experiment at different natural parameter values

    """

    def __init__(self, model, parameters, design, config=None,
                 scale="log", rank_tolerance=RANK_TOLERANCE, name=None):
        """Compose an experiment from its parts

        Arguments:

        model: Union[ReactionNetwork, str]
            a network, or the path or bundled name of its model source
        parameters: Union[ParameterPoint, dict, str]
            a parameter point, a name to value mapping, or the path or
            bundled name of a parameter file
        design: Union[ObservationDesign, dict, str]
            a design, a design object, or the path or bundled name of a
            design file
        config: Union[SolverConfig, dict]
            solver settings, or keyword arguments for SolverConfig
        scale: str
            "log" or "natural" reporting scale, ignored when a parameter
            point is given since it carries its own scale
        rank_tolerance: float
            the relative threshold of the identifiability rank
        name: str
            a label for reports

        """

        self.network = load_network(model)
        if isinstance(parameters, ParameterPoint):
            scale = parameters.scale
        self.point = load_point(self.network, parameters, scale=scale)
        self.design = load_design(design)
        self.config = config if isinstance(config, SolverConfig) \
            else SolverConfig(**(config or {}))
        self.rank_tolerance = float(rank_tolerance)
        self.name = name or self.design.name

        # fail early when the design observes unknown species
        self.design.observed_indices(self.network.species)
        self._trajectory = None
        self._moments = None
        self._fim = None

    @property
    def regime(self):
        return self.design.regime.name

    def trajectory(self):
        if self._trajectory is None:
            self._trajectory = integrate_lna(
                self.network, self.point.values, self.design.initial,
                self.design.times, self.config, with_sensitivities=True,
                t0=self.design.t0)
        return self._trajectory

    def moments(self):
        if self._moments is None:
            self._moments = assemble_moments(self.trajectory(), self.design)
        return self._moments

    def fim(self):
        if self._fim is None:
            self._fim = compute_fim(self.moments(), self.point)
        return self._fim

    def report(self):
        return FimReport.from_fim(self.fim(), self.network.parameters,
                                  scale=self.point.scale,
                                  rank_tolerance=self.rank_tolerance,
                                  regime=self.regime)

    def ellipse(self, epsilon, pair, profile=True, points=256):
        """Neutral space cross-section for a pair of parameter indices or
        names, in the coordinates of the reporting scale

        """

        pair = tuple(self.network.parameters.index(p)
                     if isinstance(p, str) else int(p) for p in pair)
        prefix = "log_" if self.point.is_log else ""
        names = tuple(prefix + self.network.parameters[i] for i in pair)
        return neutral_ellipse(self.fim(), self.point.coordinates(),
                               epsilon, pair, names=names,
                               profile=profile, points=points)

    def log_likelihood(self, y):
        return mvn_loglik(self.moments(), y)

    def copy(self, **kwargs):
        fields = dict(model=self.network, parameters=self.point,
                      design=self.design, config=self.config,
                      rank_tolerance=self.rank_tolerance, name=self.name)
        fields.update(kwargs)
        return Experiment(**fields)

    def at(self, values):
        """The same experiment at other natural-scale parameter values"""
        return self.copy(parameters=self.point.with_values(
            np.asarray(values, dtype=float)))

    def with_design(self, design):
        design = load_design(design)
        return self.copy(design=design, name=design.name)

    def with_regime(self, regime, sigma_eps2=None):
        return self.with_design(self.design.with_regime(regime, sigma_eps2))

    def with_config(self, **kwargs):
        return self.copy(config=self.config.with_updates(**kwargs))

    def __repr__(self):
        return f"Experiment({self.name!r}, {self.network!r}, " \
               f"{self.point!r}, regime={self.regime!r})"

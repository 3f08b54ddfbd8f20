from lna_fim.experiment import Experiment
from lna_fim.observations.observation_design import ObservationDesign
from lna_fim.engine.solver_config import SolverConfig
from dataclasses import dataclass, field
import re


# registered experiments are named Model-Design-vN
EXPERIMENT_PATTERN = re.compile(r'(\w+)-(\w+)-v(\d+)$')


def parse_name(experiment_name):
    """Split an experiment name into its model and design parts"""
    match = EXPERIMENT_PATTERN.search(experiment_name)
    if not match:
        raise ValueError(f"malformed experiment name {experiment_name}, "
                         f"names must match {EXPERIMENT_PATTERN.pattern}")
    return match.group(1), match.group(2)


@dataclass(frozen=True, eq=False)
class ExperimentSpecification:
    """A named recipe for an Experiment: a model, a parameter point and the
    keyword arguments of its design and of its integrator

    """

    experiment_name: str
    model: str
    parameters: object
    design_kwargs: dict = field(default_factory=dict)
    solver_kwargs: dict = field(default_factory=dict)
    scale: str = "log"

    def __post_init__(self):
        parse_name(self.experiment_name)

    @property
    def model_name(self):
        return parse_name(self.experiment_name)[0]

    @property
    def design_name(self):
        return parse_name(self.experiment_name)[1]

    def make(self, design_kwargs=None, solver_kwargs=None, **kwargs):
        """Build the experiment, with design keys and solver settings
        updated by the given overrides

        Arguments:

        design_kwargs: dict
            design keys that override the registered design object
        solver_kwargs: dict
            solver settings that override the registered ones
        **kwargs: dict
            further keyword arguments for Experiment, such as parameters,
            scale or rank_tolerance

        Returns:

        experiment: Experiment
            the experiment named by experiment_name

        """

        design = {**self.design_kwargs, **(design_kwargs or {})}
        solver = {**self.solver_kwargs, **(solver_kwargs or {})}
        kwargs.setdefault("parameters", self.parameters)
        kwargs.setdefault("scale", self.scale)
        return Experiment(
            self.model, design=ObservationDesign.from_dict(
                design, name=self.experiment_name),
            config=SolverConfig(**solver),
            name=self.experiment_name, **kwargs)


class ExperimentRegistry(object):
    """Experiments registered by name, so that a benchmark design can be
    rebuilt later from its name alone

    """

    def __init__(self):
        self.experiment_specs = {}

    def all(self):
        return self.experiment_specs.values()

    def register(self, experiment_name, model, parameters,
                 design_kwargs=None, solver_kwargs=None, scale="log"):
        if experiment_name in self.experiment_specs:
            raise ValueError(f"Cannot re-register id: {experiment_name}")
        self.experiment_specs[experiment_name] = ExperimentSpecification(
            experiment_name, model, parameters,
            design_kwargs=dict(design_kwargs or {}),
            solver_kwargs=dict(solver_kwargs or {}), scale=scale)

    def spec(self, experiment_name):
        """Look up a registered specification, naming the experiments of
        the same model when the name is unknown

        """

        model_name, _ = parse_name(experiment_name)
        if experiment_name in self.experiment_specs:
            return self.experiment_specs[experiment_name]
        similar = sorted(name for name, spec in self.experiment_specs.items()
                         if spec.model_name == model_name)
        message = f"No registered experiment with name: {experiment_name}"
        if similar:
            message += f" (model {model_name} registers {similar})"
        raise ValueError(message)

    def make(self, experiment_name,
             design_kwargs=None, solver_kwargs=None, **kwargs):
        return self.spec(experiment_name).make(
            design_kwargs=design_kwargs,
            solver_kwargs=solver_kwargs, **kwargs)


# create a global experiment registry
registry = ExperimentRegistry()


register = registry.register
make = registry.make
spec = registry.spec

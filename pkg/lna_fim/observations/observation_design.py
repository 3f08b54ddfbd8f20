from lna_fim.observations.regimes import get_regime
from lna_fim.engine.initial_condition import InitialCondition
from lna_fim.errors import DesignError
import numpy as np
import json
import os


# keys accepted at the top level of a design file
DESIGN_KEYS = {"name", "regime", "times", "delta", "count", "observed",
               "sigma_eps2", "init", "t0", "jitter"}


class ObservationDesign(object):
    """An experimental design: which species are measured, when, under
    which data regime, with which measurement error, starting from which
    initial condition

    Public Attributes:

    regime: ObservationRegime
        the TS, TP or DT regime of the measurements
    times: np.ndarray
        n strictly increasing observation times
    observed: Tuple[str]
        names of the M observed species
    sigma_eps2: float
        variance of the additive Gaussian measurement error
    initial: InitialCondition
        the state of the LNA at t0
    t0: float
        the time at which the initial condition holds
    jitter: float
        an explicit diagonal regularization added to the covariance
    name: str
        a label used in error messages and reports

    Public Methods:

    projection(Sequence[str]) -> np.ndarray:
        the M x N matrix selecting the observed species
    observed_indices(Sequence[str]) -> np.ndarray:
        indices of the observed species in the network species order
    with_times(np.ndarray) -> ObservationDesign:
        a copy observing at different times
    with_regime(str) -> ObservationDesign:
        a copy under a different data regime

    """

    def __init__(self, regime, times, observed, sigma_eps2=0.0,
                 initial=None, t0=0.0, jitter=0.0, name=None):
        self.regime = get_regime(regime) if isinstance(regime, str) \
            else regime
        self.times = np.array(times, dtype=float).reshape(-1)
        self.times.setflags(write=False)
        self.observed = tuple(observed)
        self.sigma_eps2 = float(sigma_eps2)
        self.initial = initial if initial is not None \
            else InitialCondition("stationary")
        self.t0 = float(t0)
        self.jitter = float(jitter)
        self.name = name or f"{self.regime.name}-design"

        if self.times.size == 0:
            raise DesignError("times must not be empty")
        if np.any(np.diff(self.times) <= 0.0):
            raise DesignError("times must be strictly increasing")
        if self.times[0] < self.t0:
            raise DesignError("times must not precede t0")
        if not self.observed:
            raise DesignError("observed must name at least one species")
        if len(set(self.observed)) != len(self.observed):
            raise DesignError("observed must not list a species twice")
        if self.sigma_eps2 < 0.0:
            raise DesignError("sigma_eps2 must be nonnegative")
        if self.jitter < 0.0:
            raise DesignError("jitter must be nonnegative")

        # without measurement error the deterministic covariance vanishes
        if not self.regime.is_stochastic and self.sigma_eps2 <= 0.0:
            raise DesignError("sigma_eps2 must be positive for the "
                              "DT regime")

    @classmethod
    def from_dict(cls, config, name=None):
        """Build a design from the JSON object of a design file, citing
        the offending key when the object is malformed

        Arguments:

        config: dict
            an object with keys regime, times (or delta and count),
            observed, sigma_eps2, init, t0 and jitter
        name: str
            a label for the design, by default config["name"]

        Returns:

        design: ObservationDesign
            the validated design

        """

        if not isinstance(config, dict):
            raise DesignError("a design must be a JSON object")
        unknown = sorted(set(config) - DESIGN_KEYS)
        if unknown:
            raise DesignError(f"unknown design key '{unknown[0]}'")
        for key in ("regime", "observed"):
            if key not in config:
                raise DesignError(f"missing design key '{key}'")

        # an equidistant grid t0 + i * delta, i = 1, ..., count
        t0 = config.get("t0", 0.0)
        if "times" in config:
            times = config["times"]
        elif "delta" in config and "count" in config:
            try:
                delta, count = float(config["delta"]), int(config["count"])
            except (TypeError, ValueError):
                raise DesignError("design keys 'delta' and 'count' must "
                                  "be numbers")
            if delta <= 0 or count < 1:
                raise DesignError("design key 'delta' must be positive and "
                                  "'count' at least one")
            times = float(t0) + delta * np.arange(1, count + 1)
        else:
            raise DesignError("missing design key 'times'")

        if not isinstance(config["observed"], list) \
                or not all(isinstance(s, str) for s in config["observed"]):
            raise DesignError("design key 'observed' must be a list "
                              "of species names")

        try:
            times = np.asarray(times, dtype=float)
        except (TypeError, ValueError):
            raise DesignError("design key 'times' must be a list of numbers")

        for key in ("sigma_eps2", "t0", "jitter"):
            if key in config and not isinstance(config[key], (int, float)):
                raise DesignError(f"design key '{key}' must be a number")

        return cls(config["regime"], times, config["observed"],
                   sigma_eps2=config.get("sigma_eps2", 0.0),
                   initial=InitialCondition.from_dict(
                       config.get("init", {"mode": "stationary"})),
                   t0=t0, jitter=config.get("jitter", 0.0),
                   name=name or config.get("name"))

    @classmethod
    def from_json(cls, path):
        """Load a design file, naming the design after the file"""

        with open(path, "r") as f:
            try:
                config = json.load(f)
            except json.JSONDecodeError as error:
                raise DesignError(f"malformed design file {path}: {error}")
        name = config.get("name") if isinstance(config, dict) else None
        return cls.from_dict(config, name=name or os.path.splitext(
            os.path.basename(path))[0])

    def to_dict(self):
        return dict(name=self.name, regime=self.regime.name,
                    times=self.times.tolist(), observed=list(self.observed),
                    sigma_eps2=self.sigma_eps2, init=self.initial.to_dict(),
                    t0=self.t0, jitter=self.jitter)

    def observed_indices(self, species):
        species = tuple(species)
        missing = [s for s in self.observed if s not in species]
        if missing:
            raise DesignError(f"observed species {missing[0]} is not in "
                              f"the model")
        return np.array([species.index(s) for s in self.observed], dtype=int)

    def projection(self, species):
        """The M x N 0/1 matrix whose rows select the observed species"""

        indices = self.observed_indices(species)
        projection = np.zeros((indices.size, len(tuple(species))))
        projection[np.arange(indices.size), indices] = 1.0
        return projection

    def copy(self, **kwargs):
        fields = dict(regime=self.regime, times=self.times,
                      observed=self.observed, sigma_eps2=self.sigma_eps2,
                      initial=self.initial, t0=self.t0, jitter=self.jitter,
                      name=self.name)
        fields.update(kwargs)
        return ObservationDesign(**fields)

    def with_times(self, times):
        return self.copy(times=times)

    def with_regime(self, regime, sigma_eps2=None):
        regime = get_regime(regime) if isinstance(regime, str) else regime
        return self.copy(
            regime=regime, name=f"{self.name}-{regime.name}",
            sigma_eps2=self.sigma_eps2 if sigma_eps2 is None else sigma_eps2)

    def __repr__(self):
        return f"ObservationDesign({self.to_dict()})"

from lna_fim.errors import ParameterError
import numpy as np
import json


# the parameter scales in which information is reported
SCALES = ("log", "natural")


class ParameterPoint(object):
    """A point in the parameter space of a reaction network together with
    the scale (natural or logarithmic) in which analyses are reported

    Public Attributes:

    names: Tuple[str]
        parameter names in the order declared by the network
    values: np.ndarray
        a read-only length L vector of natural-scale parameter values
    scale: str
        "log" when information is reported per log-parameter, else
        "natural"

    """

    def __init__(self, names, values, scale="log"):
        """Create a validated parameter point

        Arguments:

        names: Sequence[str]
            parameter names in network order
        values: Sequence[float]
            natural-scale parameter values
        scale: str
            "log" or "natural"

        """

        self.names = tuple(names)
        self.values = np.array(values, dtype=float).reshape(-1)
        self.values.setflags(write=False)
        self.scale = scale

        if scale not in SCALES:
            raise ParameterError(f"unknown parameter scale {scale!r}")
        if len(self.names) != self.values.size:
            raise ParameterError(
                f"{self.values.size} values given for "
                f"{len(self.names)} parameters")
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("parameter values must be finite")

        # logarithms are only defined for strictly positive values
        if scale == "log" and np.any(self.values <= 0.0):
            bad = self.names[int(np.argmin(self.values))]
            raise ParameterError(f"parameter {bad} must be strictly "
                                 f"positive on the log scale")

    @classmethod
    def from_mapping(cls, network, mapping, scale="log"):
        """Build a parameter point from a name to value mapping, which must
        name exactly the parameters of the network

        """

        missing = [p for p in network.parameters if p not in mapping]
        extra = sorted(set(mapping) - set(network.parameters))
        if missing:
            raise ParameterError(f"missing value for parameter {missing[0]}")
        if extra:
            raise ParameterError(f"unknown parameter {extra[0]}")
        try:
            values = [float(mapping[p]) for p in network.parameters]
        except (TypeError, ValueError):
            raise ParameterError("parameter values must be numbers")
        return cls(network.parameters, values, scale=scale)

    @classmethod
    def from_json(cls, network, path, scale="log"):
        """Load a parameter file holding a JSON object name -> value"""

        with open(path, "r") as f:
            try:
                mapping = json.load(f)
            except json.JSONDecodeError as error:
                raise ParameterError(f"malformed parameter file "
                                     f"{path}: {error}")
        if not isinstance(mapping, dict):
            raise ParameterError(f"parameter file {path} must hold an object")
        return cls.from_mapping(network, mapping, scale=scale)

    @property
    def is_log(self):
        return self.scale == "log"

    def with_values(self, values):
        return ParameterPoint(self.names, values, scale=self.scale)

    def with_scale(self, scale):
        return ParameterPoint(self.names, self.values, scale=scale)

    def coordinates(self):
        """Values in the reporting scale, log(theta) or theta"""
        return np.log(self.values) if self.is_log else self.values.copy()

    def perturbed(self, index, step):
        """A copy with one parameter moved by a step in reporting scale,
        multiplicatively on the log scale and additively otherwise

        """

        values = self.values.copy()
        if self.is_log:
            values[index] *= np.exp(step)
        else:
            values[index] += step
        return self.with_values(values)

    def to_dict(self):
        return {name: float(v) for name, v in zip(self.names, self.values)}

    def __eq__(self, other):
        return isinstance(other, ParameterPoint) \
            and self.names == other.names and self.scale == other.scale \
            and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"ParameterPoint({self.to_dict()}, scale={self.scale!r})"

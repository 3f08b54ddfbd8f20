from lna_fim.engine.propagators import compose_propagators
from dataclasses import dataclass
from typing import Optional, Tuple
import numpy as np
import pandas as pd


@dataclass(frozen=True, eq=False)
class LnaTrajectory(object):
    """The LNA solution sampled at observation times

    Public Attributes:

    species: Tuple[str]
        species names of the network
    parameters: Tuple[str]
        parameter names of the network
    times: np.ndarray
        n strictly increasing observation times
    phi: np.ndarray
        an n x N array of macroscopic means
    v: np.ndarray
        an n x N x N array of fluctuation variances
    propagators: np.ndarray
        an (n - 1) x N x N array of interval propagators Phi(t_i, t_i+1)
    dphi: np.ndarray
        an n x N x L array of mean sensitivities, or None
    dv: np.ndarray
        an n x N x N x L array of variance sensitivities, or None
    dpropagators: np.ndarray
        an (n - 1) x N x N x L array of propagator sensitivities, or None

    """

    species: Tuple[str, ...]
    parameters: Tuple[str, ...]
    times: np.ndarray
    phi: np.ndarray
    v: np.ndarray
    propagators: np.ndarray
    dphi: Optional[np.ndarray] = None
    dv: Optional[np.ndarray] = None
    dpropagators: Optional[np.ndarray] = None

    def __post_init__(self):
        for array in (self.times, self.phi, self.v, self.propagators,
                      self.dphi, self.dv, self.dpropagators):
            if array is not None:
                array.setflags(write=False)

    @property
    def has_sensitivities(self):
        return self.dphi is not None

    @property
    def num_times(self):
        return len(self.times)

    def propagator(self, i, j):
        """Phi(t_i, t_j) and its derivative for i <= j"""

        n, l = len(self.species), len(self.parameters)
        if i == j:
            return np.eye(n), np.zeros((n, n, l))
        if self.has_sensitivities:
            return compose_propagators(self.propagators[i:j],
                                       self.dpropagators[i:j])
        return compose_propagators(self.propagators[i:j]), None

    def to_frame(self):
        """A table with one row per time holding t, the means and the
        packed upper triangle of the variance

        """

        columns = {"t": self.times}
        for i, name in enumerate(self.species):
            columns[name] = self.phi[:, i]
        rows, cols = np.triu_indices(len(self.species))
        for i, j in zip(rows, cols):
            columns[f"V_{self.species[i]}_{self.species[j]}"] = \
                self.v[:, i, j]
        return pd.DataFrame(columns)

from lna_fim.fisher.analysis import eigen_analysis, sensitivity_coefficients
from lna_fim.fisher.analysis import identifiability_rank, cramer_rao
from lna_fim.fisher.analysis import optimality_scalars, RANK_TOLERANCE
from lna_fim.errors import SingularFimWarning
from dataclasses import dataclass
from typing import Optional, Tuple
import numpy as np
import warnings


def matrix_to_dict(matrix):
    """A row-major matrix with its dimension header"""
    matrix = np.asarray(matrix, dtype=float)
    return dict(rows=int(matrix.shape[0]), cols=int(matrix.shape[1]),
                data=matrix.reshape(-1).tolist())


def marker(value):
    """JSON has no infinities, singular criteria are written as strings"""
    if np.isposinf(value):
        return "inf"
    if np.isneginf(value):
        return "-inf"
    return float(value)


@dataclass(frozen=True, eq=False)
class FimReport(object):
    """Every analysis derived from one Fisher information matrix

    Public Attributes:

    fim: np.ndarray
        the L x L information matrix
    parameters: Tuple[str]
        parameter names indexing the rows and columns
    scale: str
        "log" when the information is per log-parameter
    eigenvalues: np.ndarray
        eigenvalues lambda_1 >= ... >= lambda_L
    directions: np.ndarray
        the matrix C whose rows are the principal directions
    sensitivities: np.ndarray
        the squared sensitivities S_j^2
    normalized: np.ndarray
        the shares T_j, None when the information vanishes
    contributions: np.ndarray
        the L x L matrix C_ij^2 of parameter weights per direction
    rank: int
        the number of identifiable directions
    rank_tolerance: float
        the relative threshold used for the rank
    cr_bounds: np.ndarray
        Cramer-Rao lower bounds, None when the information is singular
    log_det: float
        the D-optimality criterion, -inf when singular
    trace_inverse: float
        the A-optimality criterion, inf when singular
    regime: str
        the data regime the information was computed for

    """

    fim: np.ndarray
    parameters: Tuple[str, ...]
    scale: str
    eigenvalues: np.ndarray
    directions: np.ndarray
    sensitivities: np.ndarray
    normalized: Optional[np.ndarray]
    contributions: np.ndarray
    rank: int
    rank_tolerance: float
    cr_bounds: Optional[np.ndarray]
    log_det: float
    trace_inverse: float
    regime: Optional[str] = None

    @classmethod
    def from_fim(cls, fim, parameters, scale="log",
                 rank_tolerance=RANK_TOLERANCE, regime=None):
        """Run every analysis on an information matrix, warning when the
        matrix is rank deficient

        """

        fim = np.asarray(fim, dtype=float)
        eigen = eigen_analysis(fim)
        coefficients = sensitivity_coefficients(*eigen)
        rank = identifiability_rank(eigen.eigenvalues, rank_tolerance)
        bounds = cramer_rao(fim, rank_tolerance)
        scalars = optimality_scalars(fim, rank_tolerance)
        if rank < fim.shape[0]:
            warnings.warn(f"{regime or 'the'} information matrix has rank "
                          f"{rank} of {fim.shape[0]}", SingularFimWarning)
        return cls(fim, tuple(parameters), scale, eigen.eigenvalues,
                   eigen.directions, coefficients.squared,
                   coefficients.normalized, eigen.directions ** 2, rank,
                   rank_tolerance, bounds.bounds, scalars.log_det,
                   scalars.trace_inverse, regime)

    @property
    def diagonal(self):
        return np.diag(self.fim).copy()

    @property
    def is_full_rank(self):
        return self.rank == len(self.parameters)

    def criterion(self, name):
        """The value of a named design criterion"""

        if name == "log_det":
            return self.log_det
        if name == "trace_inverse":
            return self.trace_inverse
        if name == "min_eigenvalue":
            return float(self.eigenvalues[-1])
        raise ValueError(f"unknown criterion {name!r}")

    def to_dict(self):
        return dict(
            parameters=list(self.parameters), scale=self.scale,
            regime=self.regime, fim=matrix_to_dict(self.fim),
            diagonal=self.diagonal.tolist(),
            eigenvalues=self.eigenvalues.tolist(),
            eigenvectors=matrix_to_dict(self.directions),
            contributions=matrix_to_dict(self.contributions),
            sensitivities=self.sensitivities.tolist(),
            normalized_sensitivities=None if self.normalized is None
            else self.normalized.tolist(),
            rank=self.rank, rank_tolerance=self.rank_tolerance,
            cr_bounds="singular" if self.cr_bounds is None
            else self.cr_bounds.tolist(),
            log_det=marker(self.log_det),
            trace_inverse=marker(self.trace_inverse))

    def summary(self):
        """A plain text summary of rank, bounds and sensitivities"""

        unit = "log-parameter" if self.scale == "log" else "parameter"
        lines = [f"regime: {self.regime or '-'}",
                 f"scale: {self.scale}",
                 f"rank: {self.rank} of {len(self.parameters)} "
                 f"(threshold {self.rank_tolerance:g} * lambda_1)",
                 f"log_det: {marker(self.log_det)}",
                 f"trace_inverse: {marker(self.trace_inverse)}",
                 "",
                 f"{'parameter':<12}{'S^2':>14}{'T':>10}"
                 f"{'CR bound (' + unit + ' variance)':>36}"]
        for j, name in enumerate(self.parameters):
            share = "-" if self.normalized is None \
                else f"{self.normalized[j]:.4f}"
            bound = "singular" if self.cr_bounds is None \
                else f"{self.cr_bounds[j]:.6g}"
            lines.append(f"{name:<12}{self.sensitivities[j]:>14.6g}"
                         f"{share:>10}{bound:>36}")
        lines += ["", "eigenvalues: " + " ".join(
            f"{value:.6g}" for value in self.eigenvalues)]
        return "\n".join(lines) + "\n"

from scipy.linalg import cho_factor, cho_solve, LinAlgError
from collections import namedtuple
import numpy as np


# eigenvalues within this fraction of the largest one are exactly zero
CLAMP_TOLERANCE = 1e-12


# the default relative threshold for counting identifiable directions
RANK_TOLERANCE = 1e-8


EigenAnalysis = namedtuple("EigenAnalysis", ["eigenvalues", "directions"])
SensitivityCoefficients = namedtuple("SensitivityCoefficients",
                                     ["squared", "normalized"])
CramerRaoBounds = namedtuple("CramerRaoBounds", ["bounds", "rank"])
OptimalityScalars = namedtuple("OptimalityScalars",
                               ["log_det", "trace_inverse"])


def eigen_analysis(fim):
    """Symmetric eigendecomposition of a Fisher information matrix

    Arguments:

    fim: np.ndarray
        a symmetric L x L matrix

    Returns:

    analysis: EigenAnalysis
        eigenvalues sorted in decreasing order, with values within
        1e-12 lambda_1 of zero set to zero, and an L x L matrix C whose
        rows are the matching unit eigenvectors, each signed so that its
        largest magnitude entry (the first one on ties) is positive

    """

    fim = np.asarray(fim, dtype=float)
    values, vectors = np.linalg.eigh(0.5 * (fim + fim.T))
    order = np.argsort(values)[::-1]
    values, directions = values[order], vectors[:, order].T.copy()

    largest = max(values[0], 0.0) if values.size else 0.0
    values[np.abs(values) <= CLAMP_TOLERANCE * largest] = 0.0

    for row in directions:
        magnitude = np.abs(row)
        pivot = int(np.argmax(magnitude >= magnitude.max() - 1e-12))
        if row[pivot] < 0.0:
            row *= -1.0
    return EigenAnalysis(values, directions)


def sensitivity_coefficients(eigenvalues, directions):
    """Squared sensitivities S_j^2 = sum_i lambda_i C_ij^2 and their
    normalized shares T_j = S_j^2 / sum_i S_i^2, T is None when the
    information vanishes

    """

    eigenvalues = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    squared = np.sum(eigenvalues[:, np.newaxis]
                     * np.asarray(directions) ** 2, axis=0)
    total = squared.sum()
    normalized = squared / total if total > 0.0 else None
    return SensitivityCoefficients(squared, normalized)


def identifiability_rank(eigenvalues, tolerance=RANK_TOLERANCE):
    """The number of eigenvalues above tolerance * lambda_1, which is the
    number of locally identifiable parameter combinations

    """

    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if eigenvalues.size == 0 or eigenvalues[0] <= 0.0:
        return 0
    return int(np.sum(eigenvalues > tolerance * eigenvalues[0]))


def cramer_rao(fim, tolerance=RANK_TOLERANCE):
    """Lower bounds on the variances of unbiased parameter estimates, the
    diagonal of the inverse information, with bounds None when the
    information is rank deficient

    """

    fim = np.asarray(fim, dtype=float)
    rank = identifiability_rank(eigen_analysis(fim).eigenvalues, tolerance)
    if rank < fim.shape[0]:
        return CramerRaoBounds(None, rank)
    try:
        factor = cho_factor(fim, lower=True)
    except LinAlgError:
        return CramerRaoBounds(None, rank)
    inverse = cho_solve(factor, np.eye(fim.shape[0]))
    return CramerRaoBounds(np.diag(inverse).copy(), rank)


def optimality_scalars(fim, tolerance=RANK_TOLERANCE):
    """The D-optimality criterion log det I and the A-optimality criterion
    trace I^-1, or (-inf, inf) when the information is singular

    """

    fim = np.asarray(fim, dtype=float)
    rank = identifiability_rank(eigen_analysis(fim).eigenvalues, tolerance)
    if rank < fim.shape[0]:
        return OptimalityScalars(-np.inf, np.inf)
    try:
        factor = cho_factor(fim, lower=True)
    except LinAlgError:
        return OptimalityScalars(-np.inf, np.inf)

    # the determinant itself overflows for long designs
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    trace_inverse = float(np.trace(cho_solve(factor, np.eye(fim.shape[0]))))
    return OptimalityScalars(log_det, trace_inverse)

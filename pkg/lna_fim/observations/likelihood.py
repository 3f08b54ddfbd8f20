from lna_fim.errors import CovarianceError
from scipy.linalg import cho_factor, cho_solve, LinAlgError
import numpy as np


def factorize(covariance, label="covariance"):
    """Cholesky factor of a covariance, raising CovarianceError when it is
    not positive definite

    """

    try:
        return cho_factor(covariance, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as error:
        raise CovarianceError(f"{label} is not positive definite: {error}",
                              stage="factorization")


def mvn_loglik(stack, y):
    """Exact multivariate normal log density of observations under the
    stacked moments

    Arguments:

    stack: MomentStack
        the stacked mean and covariance of a design
    y: np.ndarray
        one observation vector of length n M, or a B x n M batch

    Returns:

    log_density: float or np.ndarray
        log N(y; mu, Sigma) for each observation vector

    """

    y = np.asarray(y, dtype=float)
    factor = factorize(stack.covariance,
                       f"covariance of design {stack.design_name}")
    residual = np.atleast_2d(y) - stack.mean
    if residual.shape[1] != stack.size:
        raise ValueError(f"observations have length {residual.shape[1]} "
                         f"but the design stacks {stack.size} values")

    # log det Sigma from the diagonal of the triangular factor
    log_det = 2.0 * np.sum(np.log(np.diag(factor[0])))
    quadratic = np.einsum("bi,ib->b", residual,
                          cho_solve(factor, residual.T))
    log_density = -0.5 * (stack.size * np.log(2.0 * np.pi)
                          + log_det + quadratic)
    return float(log_density[0]) if y.ndim == 1 else log_density

from lna_fim.observations.likelihood import factorize
from scipy.linalg import cho_solve
import numpy as np


def compute_fim(stack, point=None):
    """Fisher information of a multivariate normal observation model

    I_kl = dmu_k^T Sigma^-1 dmu_l
           + 1/2 trace(Sigma^-1 dSigma_k Sigma^-1 dSigma_l)

    Arguments:

    stack: MomentStack
        the stacked mean and covariance with their parameter derivatives
    point: ParameterPoint
        the parameter point the stack was assembled at; on the log
        scale the information is reported per log-parameter using
        I_log = J I J with J = diag(theta), natural scale when None

    Returns:

    fim: np.ndarray
        the symmetric L x L Fisher information matrix

    """

    factor = factorize(stack.covariance,
                       f"covariance of design {stack.design_name}")
    size, l = stack.size, stack.num_parameters

    # the mean term needs Sigma^-1 dmu for every parameter at once
    fim = stack.dmean.T @ cho_solve(factor, stack.dmean)

    # W_k = Sigma^-1 dSigma_k for all k by one multi column solve
    if np.any(stack.dcovariance):
        w = cho_solve(factor, stack.dcovariance.reshape(size, size * l))
        w = w.reshape(size, size, l)
        fim = fim + 0.5 * np.einsum("ijk,jil->kl", w, w)

    if point is not None and point.is_log:
        fim = fim * np.outer(point.values, point.values)
    return 0.5 * (fim + fim.T)

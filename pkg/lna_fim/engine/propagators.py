import numpy as np


def compose_propagators(propagators, sensitivities=None):
    """Compose consecutive interval propagators into the fundamental
    matrix between the first and the last observation time

    Arguments:

    propagators: Sequence[np.ndarray]
        N x N propagators Phi_i, ..., Phi_{j-1} in time order
    sensitivities: Sequence[np.ndarray]
        the matching N x N x L derivatives of each propagator, or None

    Returns:

    propagator: np.ndarray
        the product Phi_{j-1} ... Phi_i, equal to Phi(t_i, t_j)
    sensitivity: np.ndarray
        its N x N x L derivative by the product rule, only returned
        when sensitivities are given

    """

    if len(propagators) == 0:
        raise ValueError("at least one propagator is required")

    # Phi(s, u) = Phi(t, u) Phi(s, t) so later intervals multiply on the left
    total = np.array(propagators[0], dtype=float)
    if sensitivities is None:
        for step in propagators[1:]:
            total = step @ total
        return total

    d_total = np.array(sensitivities[0], dtype=float)
    for step, d_step in zip(propagators[1:], sensitivities[1:]):
        d_total = np.einsum("ijk,jm->imk", d_step, total) \
            + np.einsum("ij,jmk->imk", step, d_total)
        total = step @ total
    return total, d_total

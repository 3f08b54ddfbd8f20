from lna_fim.errors import NeutralSpaceError, InputError
from dataclasses import dataclass
from typing import Tuple
import numpy as np
import pandas as pd


# directions whose curvature is below this fraction of the largest
# eigenvalue of the information are treated as flat
FLAT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class NeutralEllipse(object):
    """A two-dimensional cross-section of the neutral space
    {theta : (theta - theta*)^T I (theta - theta*) < epsilon}

    Public Attributes:

    pair: Tuple[int, int]
        indices of the two parameters spanning the cross-section
    names: Tuple[str, str]
        column labels of the two coordinates
    center: np.ndarray
        the two coordinates of theta*
    points: np.ndarray
        a P x 2 boundary polyline, counterclockwise from angle 0
    semi_axes: np.ndarray
        the two semi-axis lengths of the ellipse
    axes: np.ndarray
        a 2 x 2 matrix whose rows are the matching unit axis directions
    radii: np.ndarray
        the full-dimensional equatorial radii sqrt(epsilon / lambda_i),
        infinite for flat directions
    profile: bool
        True when the remaining parameters were profiled out, False for
        a slice through theta*

    """

    pair: Tuple[int, int]
    names: Tuple[str, str]
    center: np.ndarray
    points: np.ndarray
    semi_axes: np.ndarray
    axes: np.ndarray
    radii: np.ndarray
    profile: bool = True

    def to_frame(self):
        """The boundary as a two-column table for plotting"""
        return pd.DataFrame(self.points, columns=list(self.names))


def pair_matrix(fim, pair, profile):
    """The 2 x 2 quadratic form of the cross-section, the Schur complement
    of the remaining block when profiling, the plain submatrix otherwise

    """

    keep = list(pair)
    rest = [i for i in range(fim.shape[0]) if i not in keep]
    block = fim[np.ix_(keep, keep)]
    if not profile or not rest:
        return block

    # minimizing the quadratic form over the remaining coordinates
    coupling = fim[np.ix_(keep, rest)]
    return block - coupling @ np.linalg.pinv(
        fim[np.ix_(rest, rest)], rcond=1e-12, hermitian=True) @ coupling.T


def neutral_ellipse(fim, center, epsilon, pair, names=None,
                    profile=True, points=256):
    """Boundary of a two-parameter cross-section of the neutral space

    Arguments:

    fim: np.ndarray
        the L x L information at theta*, in the coordinates of center
    center: np.ndarray
        the length L point theta* (log parameters on the log scale)
    epsilon: float
        the positive level of the expected log-likelihood drop
    pair: Tuple[int, int]
        indices (j, k) of the two parameters of the cross-section
    names: Tuple[str, str]
        labels of the two coordinates
    profile: bool
        profile the remaining parameters out rather than slicing
    points: int
        the number of boundary points

    Returns:

    ellipse: NeutralEllipse
        the discretized boundary with its axes and the full-dimensional
        radii

    """

    fim = np.asarray(fim, dtype=float)
    center = np.asarray(center, dtype=float)
    j, k = (int(i) for i in pair)
    if not epsilon > 0.0:
        raise InputError("epsilon must be positive")
    if j == k or not (0 <= j < fim.shape[0] and 0 <= k < fim.shape[0]):
        raise InputError(f"invalid parameter pair ({j}, {k})")

    values = np.linalg.eigvalsh(0.5 * (fim + fim.T))
    largest = max(float(values.max()), 0.0)
    flat = FLAT_TOLERANCE * largest
    with np.errstate(divide="ignore"):
        radii = np.where(values[::-1] > flat,
                         np.sqrt(epsilon / np.abs(values[::-1])), np.inf)

    curvature, axes = np.linalg.eigh(pair_matrix(fim, (j, k), profile))
    if largest <= 0.0 or np.any(curvature <= flat):
        raise NeutralSpaceError(
            f"unbounded direction in the ({j}, {k}) cross-section "
            f"(curvatures {curvature[0]:.3g}, {curvature[1]:.3g})",
            stage="neutral_ellipse")
    axes = axes * np.where(axes[np.argmax(np.abs(axes), axis=0),
                                [0, 1]] < 0.0, -1.0, 1.0)

    # x = center + sqrt(eps) U diag(lambda^-1/2) (cos a, sin a)
    semi_axes = np.sqrt(epsilon / curvature)
    angles = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    circle = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    boundary = center[[j, k]] + (circle * semi_axes) @ axes.T

    names = tuple(names) if names is not None else (f"theta_{j}",
                                                    f"theta_{k}")
    return NeutralEllipse((j, k), names, center[[j, k]], boundary,
                          semi_axes, axes.T.copy(), radii, profile)

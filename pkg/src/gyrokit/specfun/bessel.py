"""Closed-form Bessel functions of order -1/2."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class BesselHalfValue:
    """J and Y of order -1/2 at a positive argument."""

    x: float
    j_val: float
    y_val: float


def bessel_half(x):
    """Evaluate J_{-1/2}(x) = sqrt(2/(pi x)) cos x and Y_{-1/2}(x) = sqrt(2/(pi x)) sin x.

    Parameters
    ----------
    x : float or ndarray
        Strictly positive argument.

    Returns
    -------
    BesselHalfValue
    """
    xa = np.asarray(x, float)
    if np.any(~np.isfinite(xa)) or np.any(xa <= 0):
        raise DomainError("bessel_half needs x > 0")
    amp = np.sqrt(2.0 / (np.pi * xa))
    j = amp * np.cos(xa)
    y = amp * np.sin(xa)
    if xa.ndim == 0:
        return BesselHalfValue(float(xa), float(j), float(y))
    return BesselHalfValue(xa, j, y)

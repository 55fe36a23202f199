"""Special functions: Carlson and Legendre elliptic integrals, Jacobi
functions, Gauss/Appell/Lauricella hypergeometric functions and the
order -1/2 Bessel pair.

All elliptic routines take the modulus ``k``, not the parameter ``k**2``.
"""

from .bessel import BesselHalfValue, bessel_half
from .carlson import rc, rf, rj
from .elliptic import ellip_F, ellip_K, ellip_Pi, jacobi_am_sn_cn_dn
from .hypergeometric import (HypergeometricSpec, appell_f1, hyp2f1, lauricella,
                             lauricella_fd)

__all__ = [
    "BesselHalfValue", "HypergeometricSpec", "appell_f1", "bessel_half", "ellip_F",
    "ellip_K", "ellip_Pi", "hyp2f1", "jacobi_am_sn_cn_dn", "lauricella", "lauricella_fd",
    "rc", "rf", "rj",
]

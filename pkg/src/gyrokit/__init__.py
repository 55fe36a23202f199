"""Closed-form rigid-body rotation about a fixed point.

Modules
-------
specfun     elliptic, Jacobi, hypergeometric and half-order Bessel functions
integrals   the cubic-radical integrals I1..I7 in several closed forms
lagrange    heavy symmetric top
poinsot     torque-free asymmetric body
herpolhode  polar equation of the herpolhode
viscous     symmetric top under viscous drag
oracle      independent numerical integration of the governing equations
verify      randomised closed-form versus oracle checks
"""

__version__ = "0.1.0"

from .errors import AssumptionError, DomainError, GyrokitError, SingularityError

__all__ = ["AssumptionError", "DomainError", "GyrokitError", "SingularityError", "__version__"]

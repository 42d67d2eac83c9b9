"""Numerical checks for extremals of the Caffarelli-Kohn-Nirenberg inequalities.

Submodules
----------
params        exponent algebra and regime classification
jets          truncated Taylor jets (order <= 3)
geometry      the conformal metric, its Ricci tensor and weighted operators
fields        test fields and the extremal family
identities    pointwise Bochner-type identities
extremals     kappa constancy, normalisation, cone Neumann checks
integrals     growth estimates along the extremal
spectral      Neumann eigenvalues of arcs and caps
emden_fowler  cylinder coordinates and the soliton profile
rayleigh      radial versus free minimisation on the cylinder
acceptance    the acceptance criteria
cli           command-line front end
"""

from .cones import ConeSpec
from .errors import CKNError, InadmissibleParams
from .fields import ExtremalSpec
from .params import CknParams, DerivedParams, RegimeReport, classify, derive

__version__ = "0.1.0"

__all__ = [
    "CKNError",
    "CknParams",
    "ConeSpec",
    "DerivedParams",
    "ExtremalSpec",
    "InadmissibleParams",
    "RegimeReport",
    "classify",
    "derive",
]

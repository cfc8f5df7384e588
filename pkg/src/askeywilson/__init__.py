"""Exact computations with the Askey-Wilson algebra aw(3) and its realizations.

Submodules: ring (Laurent polynomials), ncalg (rewriting), quantum (U_q(sl2)
tensor products), reflection, weyl (W(D4)), skein, daha, racah (classical
limit), cli.
"""

from .ncalg import AW, NcPoly, casimir_omega, normalize
from .report import SCHEMA, VerificationReport
from .ring import QH, LaurentPoly

__all__ = ["AW", "NcPoly", "casimir_omega", "normalize", "SCHEMA", "VerificationReport", "QH", "LaurentPoly"]
__version__ = "0.1.0"

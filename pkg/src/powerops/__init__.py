"""Power operations, Hecke operators and the Dyer-Lashof algebra at height 2."""

from .errors import (ModelError, NonUnitError, ParseError, PowerOpsError, PrecisionError,
                     ReconstructionError, RewriteBudgetExceeded, VerificationError)
from .rings import ExtElement, ExtRing, HRing, HSeries, iwasawa_log
from .power_ops import PsiData, WData, apply_psi, derive_psi_h, individual_Q, phi
from .hecke import ell, t1, t2, weighted_t1
from .dyer_lashof import DyerLashofAlgebra, GammaElement
from .modelfile import load, load_builtin

__version__ = "0.1.0"

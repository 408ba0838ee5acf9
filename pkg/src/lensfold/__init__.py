"""lensfold: fold flat lens tessellations into certified 3D states."""

from ._kernels import BACKEND
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (ConfigError, FoldDepthInfeasible, InfeasiblePattern,
                     InvalidPattern, InvalidProfile, LensfoldError,
                     QuadratureDiverged, SingularHeight, TrapezoidInfeasible)
from .folding import (KiteModule, TiledFolding, build_kite_module,
                      integrate_theta, section, sweep_vstar, tile)
from .pattern import LensTessellation
from .profiles import (CircularArcProfile, PolyProfile, SineProfile,
                       TabulatedProfile, make_profile, profile_from_spec)
from .verify import FoldReport, run_all_checks

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "Tolerances", "DEFAULT_TOLERANCES",
    "LensfoldError", "ConfigError", "InvalidProfile", "InvalidPattern",
    "InfeasiblePattern", "TrapezoidInfeasible", "FoldDepthInfeasible",
    "SingularHeight", "QuadratureDiverged",
    "SineProfile", "CircularArcProfile", "PolyProfile", "TabulatedProfile",
    "make_profile", "profile_from_spec",
    "LensTessellation",
    "section", "integrate_theta", "build_kite_module", "KiteModule",
    "tile", "TiledFolding", "sweep_vstar",
    "run_all_checks", "FoldReport",
]

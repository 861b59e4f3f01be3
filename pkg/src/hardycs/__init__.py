"""Composition operators on the Hardy space H^2 of the disk, and the norm
obstruction to complex symmetry for order-3 elliptic symbols."""
from .errors import HardyError
from .moebius import OMEGA, MoebiusMap, build_elliptic, classify, involution, rotation
from .obstruction import ObstructionReport, SymmetryVerdict, VerdictKind, run, verdict
from .series import RationalMap, TruncatedSeries

__version__ = "0.1.0"

"""Design kit for asymmetric LUTs (DSLUTs).

Harvest practical functions from AIG netlists, generate an SRAM-bit
assignment under a budget, match functions against it, optimize the MUX
tree, model area/delay, and evaluate by depth-oriented mapping.
"""

from .boolfn import TruthTable, NpnTransform, npn_canonical, npn_enum_class, count_npn_classes
from .errors import DslutError, UsageError, ParseError, InternalError

__all__ = [
    "TruthTable",
    "NpnTransform",
    "npn_canonical",
    "npn_enum_class",
    "count_npn_classes",
    "DslutError",
    "UsageError",
    "ParseError",
    "InternalError",
]

__version__ = "0.1.0"

"""Z/2-cohomology of symmetric products of non-orientable surfaces.

Closed forms for zero-divisor cup lengths, gaps and sequential topological
complexity bounds of SP^n(N_g), checked against an exhaustive search over
zero-divisor products in the tensor powers of the cohomology ring.
"""

from .closed_forms import gap_closed, zcl_closed
from .combinatorics import gap_p2n
from .ring_core import Monomial, RingContext
from .search_oracle import max_ell, search_zcl, verify_grid
from .tc_invariants import tc_bounds, tcgen_polynomial
from .tensor_ring import TensorContext

__version__ = "0.1.0"

__all__ = [
    "Monomial",
    "RingContext",
    "TensorContext",
    "gap_closed",
    "gap_p2n",
    "max_ell",
    "search_zcl",
    "tc_bounds",
    "tcgen_polynomial",
    "verify_grid",
    "zcl_closed",
]

"""Exact computations for twisted affine-Virasoro superalgebras.

The main entry points:

* :func:`build_algebra` / :func:`load_algebra` validate input data,
* :func:`h2_summary` and :func:`build_extension` compute the central extension,
* :func:`truncate`, :func:`jacobi_check`, :func:`oracle_h2` work on finite windows,
* :mod:`twistvir.loopmodules` builds and checks loop modules.
"""

from .centralext import build_extension, h2_summary
from .exactfield import field, parse_scalar, render_scalar
from .loopreal import jacobi_check, oracle_h2, truncate
from .superalgebra import ValidationError, build_algebra, load_algebra

__version__ = "0.1.0"

__all__ = [
    "ValidationError",
    "build_algebra",
    "build_extension",
    "field",
    "h2_summary",
    "jacobi_check",
    "load_algebra",
    "oracle_h2",
    "parse_scalar",
    "render_scalar",
    "truncate",
]

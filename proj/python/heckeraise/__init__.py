"""Weight-2 modular symbols for Gamma_0(M) and constructive level raising.

Thin wrapper around the C++ core; certificates travel as canonical JSON
strings so they can be stored and re-verified byte for byte.
"""

from ._core import (
    certify,
    eigensystems,
    genus,
    search,
    space_summary,
    sturm_bound,
    verify,
)

__all__ = [
    "certify",
    "eigensystems",
    "genus",
    "search",
    "space_summary",
    "sturm_bound",
    "verify",
]

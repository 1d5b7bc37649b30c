"""Certify cover hypotheses that make every boundary slope virtually embedded.

Covers are built symbolically for punctured-torus bundles (a nine-fold
Z/3 x Z/3 cover) and two-bridge knot exteriors (dihedral covers); their
boundary tori and homology are computed exactly.
"""

__version__ = "0.1.0"

from .certify import Certificate, certify_ptb, certify_twobridge, check_conditions
from .ptbundle import Monodromy
from .twobridge import TwoBridgePair

__all__ = [
    "Certificate",
    "Monodromy",
    "TwoBridgePair",
    "certify_ptb",
    "certify_twobridge",
    "check_conditions",
]

"""Exact-arithmetic checks for Malcev, alternative and post-structures."""

from .scalar import Scalar, parse
from .algebra import Algebra, StructureTensor, apply, associator, jacobian, commutator_algebra
from .identities import check_identity, CheckReport, REGISTRY
from .corpus import load, save
from .suite import run_suite, RunReport

__version__ = "0.1.0"

"""Entropy power inequality toolkit for bosonic quantum systems.

Thin re-export of the compiled extension: exact Gaussian phase-space
calculus, a truncated Fock-space engine, the quantum diffusion semigroup,
divergence-based Fisher information, and the entropy power inequality
checks built on them.
"""

from qepi._core import *  # noqa: F401,F403
from qepi._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = __doc__ or _core_doc

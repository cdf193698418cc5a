"""finsix: desk-scale six-functor calculus over exact coefficient fields.

Two fully computable instances (sheaves on finite posets, representations of
finite groupoids), a kernel/convolution layer with adjunction and duality
certificates, and a seeded axiom harness.  All arithmetic is exact.
"""

from .fields import FieldSpec, QQ, F2, F3
from .matrices import Matrix

__version__ = "0.1.0"

__all__ = ["FieldSpec", "QQ", "F2", "F3", "Matrix", "__version__"]

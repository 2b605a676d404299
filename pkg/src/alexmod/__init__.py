"""alexmod: exact Alexander modules, thickened complexes and arrangement
Hodge reports over Q[t, t^-1].
"""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]

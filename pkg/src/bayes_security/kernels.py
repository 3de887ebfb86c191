"""Backend selection for the pairwise tv kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``BAYES_SECURITY_PURE=1`` is set, the numpy fallback
is used. ``BACKEND`` names the active one.
"""

import os

from . import _kernels_py

if os.environ.get("BAYES_SECURITY_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

max_pairwise_tv = _impl.max_pairwise_tv
first_pair_at_least = _impl.first_pair_at_least
pruned_max_tv = _impl.pruned_max_tv

__all__ = ["BACKEND", "max_pairwise_tv", "first_pair_at_least", "pruned_max_tv"]

"""Hot numeric kernels, bound to the backend chosen at import time."""

from ._backend import BACKEND

if BACKEND == "numba":
    from ._kernels_numba import (  # noqa: F401
        jacobi_svd,
        kp_prefix_sq_norms,
        log_rank_rows,
        log_ratio_rows,
        row_pnorms,
        sign_average,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        jacobi_svd,
        kp_prefix_sq_norms,
        log_rank_rows,
        log_ratio_rows,
        row_pnorms,
        sign_average,
    )

__all__ = [
    "BACKEND",
    "jacobi_svd",
    "kp_prefix_sq_norms",
    "log_rank_rows",
    "log_ratio_rows",
    "row_pnorms",
    "sign_average",
]

"""Hot numeric kernels: numba fast path with a pure-numpy fallback.

The active path is chosen at import time.  Setting the environment variable
``SUBPLANCK_NO_NUMBA`` to anything other than ``0``/``false``/empty forces
the numpy fallback; otherwise numba is used when importable.  Both paths
implement identical signatures and are compared against each other by the
test suite and ``benchmarks/bench_backends.py``.

Kernel surface
  hermite_series_pair(z1, z2, n, clogmag, cphase) -> (acc, logscale)
      sum_l c_l H_{n-l}(z1) H_{n-l}(z2); value = acc * exp(logscale).
  hermite_series_single(z, n, clogmag, cphase) -> (acc, logscale)
      the z2 = conj(z1) case, i.e. sum_l c_l |H_{n-l}(z)|^2.
  displacement_overlaps(bra, ket, betas, mask_bra, mask_ket) -> complex[M]
      <bra|D(beta_j)|ket> for every beta_j.
"""

import os


def _numba_disabled() -> bool:
    flag = os.environ.get("SUBPLANCK_NO_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


ACTIVE = "numpy"
if not _numba_disabled():
    try:
        from . import _numba_impl as _impl

        ACTIVE = "numba"
    except ImportError:  # pragma: no cover - depends on install
        from . import _numpy_impl as _impl
else:
    from . import _numpy_impl as _impl

hermite_series_pair = _impl.hermite_series_pair
hermite_series_single = _impl.hermite_series_single
displacement_overlaps = _impl.displacement_overlaps
moment_table_field = _impl.moment_table_field


def set_threads(count: int) -> None:
    """Set worker-thread count for the numba path (no-op for numpy)."""
    if ACTIVE == "numba":
        import numba

        numba.set_num_threads(max(1, int(count)))

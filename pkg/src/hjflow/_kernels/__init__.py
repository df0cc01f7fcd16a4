"""Hot-kernel backend selection.

The compiled Cython core is used when present; otherwise the numpy fallback.
Set ``HJFLOW_BACKEND=python`` to force the fallback.
"""

import os

import numpy as np

from . import _fallback

try:
    from . import _core
except ImportError:  # pragma: no cover - depends on build environment
    _core = None

if _core is not None and os.environ.get("HJFLOW_BACKEND", "") != "python":
    _impl = _core
    BACKEND = "compiled"
else:
    _impl = _fallback
    BACKEND = "python"


def conv1d(values, weights):
    return _impl.conv1d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
    )


def conv_axis(values, weights, axis):
    return _impl.conv_axis(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
        axis,
    )


def shift_max_1d(values, offsets, penalties):
    return _impl.shift_max_1d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.int64),
        np.ascontiguousarray(penalties, dtype=np.float64),
    )


def shift_interp_max_1d(values, offsets, fracs, penalties):
    return _impl.shift_interp_max_1d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.int64),
        np.ascontiguousarray(fracs, dtype=np.float64),
        np.ascontiguousarray(penalties, dtype=np.float64),
    )


def shift_interp_max_2d(values, row_offsets, col_offsets, row_fracs, col_fracs, penalties):
    return _impl.shift_interp_max_2d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(row_offsets, dtype=np.int64),
        np.ascontiguousarray(col_offsets, dtype=np.int64),
        np.ascontiguousarray(row_fracs, dtype=np.float64),
        np.ascontiguousarray(col_fracs, dtype=np.float64),
        np.ascontiguousarray(penalties, dtype=np.float64),
    )


def shift_max_2d(values, row_offsets, col_offsets, penalties):
    return _impl.shift_max_2d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(row_offsets, dtype=np.int64),
        np.ascontiguousarray(col_offsets, dtype=np.int64),
        np.ascontiguousarray(penalties, dtype=np.float64),
    )

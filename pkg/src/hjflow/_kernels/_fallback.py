"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable.  Both backends perform the
same direct summations in the same order, so results agree to rounding.
"""

import numpy as np
from scipy.ndimage import correlate1d


def conv1d(values, weights):
    """Windowed weighted sum with zero extension outside the array.

    ``weights`` has odd length and is centered: out[i] = sum_k w[k] * v[i+k-J]
    with J = len(w)//2 and v taken as 0 out of range.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return correlate1d(values, weights, mode="constant", cval=0.0)


def conv_axis(values, weights, axis):
    """Apply :func:`conv1d` along one axis of a 2-d array."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return correlate1d(values, weights, axis=axis, mode="constant", cval=0.0)


def shift_max_1d(values, offsets, penalties):
    """out[i] = max_j (v[i + offsets[j]] - penalties[j]), v zero-extended."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    out = np.full(n, -np.inf)
    buf = np.empty(n)
    for off, pen in zip(offsets, penalties):
        off = int(off)
        buf.fill(0.0)
        if off >= 0:
            if off < n:
                buf[: n - off] = values[off:]
        else:
            if -off < n:
                buf[-off:] = values[: n + off]
        np.maximum(out, buf - pen, out=out)
    return out


def _shifted_1d(values, off, buf):
    """buf[i] = v[i + off] with zero fill; returns buf."""
    n = values.shape[0]
    buf.fill(0.0)
    if off >= 0:
        if off < n:
            buf[: n - off] = values[off:]
    else:
        if -off < n:
            buf[-off:] = values[: n + off]
    return buf


def shift_interp_max_1d(values, offsets, fracs, penalties):
    """out[i] = max_j ((1-frac_j) v[i+k_j] + frac_j v[i+k_j+1] - pen_j).

    v is zero-extended; each candidate is a convex combination of two
    integer translates, so monotonicity and contraction are preserved
    exactly.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    out = np.full(n, -np.inf)
    lo = np.empty(n)
    hi = np.empty(n)
    for off, frac, pen in zip(offsets, fracs, penalties):
        off = int(off)
        _shifted_1d(values, off, lo)
        if frac == 0.0:
            np.maximum(out, lo - pen, out=out)
            continue
        _shifted_1d(values, off + 1, hi)
        np.maximum(out, (1.0 - frac) * lo + frac * hi - pen, out=out)
    return out


def _shifted_2d(values, orow, ocol, buf):
    nr, nc = values.shape
    buf.fill(0.0)
    rs_dst = slice(max(0, -orow), min(nr, nr - orow))
    rs_src = slice(max(0, orow), min(nr, nr + orow))
    cs_dst = slice(max(0, -ocol), min(nc, nc - ocol))
    cs_src = slice(max(0, ocol), min(nc, nc + ocol))
    if rs_dst.start < rs_dst.stop and cs_dst.start < cs_dst.stop:
        buf[rs_dst, cs_dst] = values[rs_src, cs_src]
    return buf


def shift_interp_max_2d(values, row_offsets, col_offsets, row_fracs, col_fracs, penalties):
    """Bilinear-interpolated 2-d shift max; v zero-extended."""
    values = np.asarray(values, dtype=np.float64)
    nr, nc = values.shape
    out = np.full((nr, nc), -np.inf)
    c00 = np.empty((nr, nc))
    c10 = np.empty((nr, nc))
    c01 = np.empty((nr, nc))
    c11 = np.empty((nr, nc))
    for orow, ocol, fr, fc, pen in zip(row_offsets, col_offsets, row_fracs, col_fracs, penalties):
        orow, ocol = int(orow), int(ocol)
        _shifted_2d(values, orow, ocol, c00)
        cand = (1.0 - fr) * (1.0 - fc) * c00
        if fr != 0.0:
            _shifted_2d(values, orow + 1, ocol, c10)
            cand += fr * (1.0 - fc) * c10
        if fc != 0.0:
            _shifted_2d(values, orow, ocol + 1, c01)
            cand += (1.0 - fr) * fc * c01
        if fr != 0.0 and fc != 0.0:
            _shifted_2d(values, orow + 1, ocol + 1, c11)
            cand += fr * fc * c11
        np.maximum(out, cand - pen, out=out)
    return out


def shift_max_2d(values, row_offsets, col_offsets, penalties):
    """2-d analogue of :func:`shift_max_1d` with per-axis integer offsets."""
    values = np.asarray(values, dtype=np.float64)
    nr, nc = values.shape
    out = np.full((nr, nc), -np.inf)
    buf = np.empty((nr, nc))
    for orow, ocol, pen in zip(row_offsets, col_offsets, penalties):
        orow, ocol = int(orow), int(ocol)
        buf.fill(0.0)
        rs_dst = slice(max(0, -orow), min(nr, nr - orow))
        rs_src = slice(max(0, orow), min(nr, nr + orow))
        cs_dst = slice(max(0, -ocol), min(nc, nc - ocol))
        cs_src = slice(max(0, ocol), min(nc, nc + ocol))
        if rs_dst.start < rs_dst.stop and cs_dst.start < cs_dst.stop:
            buf[rs_dst, cs_dst] = values[rs_src, cs_src]
        np.maximum(out, buf - pen, out=out)
    return out

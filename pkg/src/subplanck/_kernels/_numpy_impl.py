"""Pure-numpy fallback for the hot kernels.

Same signatures and same math as the numba path, vectorized over grid
points; recurrences run as python loops over the (small) polynomial /
diagonal index with O(npoints) array work per step.
"""

import math

import numpy as np

_NEG_INF = -1.0e308
_RESCALE_HI = 1.0e150
_RESCALE_LO = 1.0e-150


def _hermite_logs_vec(z, n):
    """log|H_k(z_j)| and arg H_k(z_j) for k = 0..n, all points at once."""
    npts = z.shape[0]
    logmag = np.full((n + 1, npts), _NEG_INF)
    phase = np.zeros((n + 1, npts))
    logmag[0] = 0.0
    if n == 0:
        return logmag, phase
    scale = np.zeros(npts)
    hm1 = np.ones(npts, np.complex128)
    h = 2.0 * z.astype(np.complex128)
    m = np.abs(h)
    pos = m > 0.0
    logmag[1, pos] = scale[pos] + np.log(m[pos])
    phase[1] = np.angle(h)
    for k in range(1, n):
        hp1 = 2.0 * z * h - 2.0 * k * hm1
        m = np.abs(hp1)
        pos = m > 0.0
        logmag[k + 1, pos] = scale[pos] + np.log(m[pos])
        phase[k + 1] = np.angle(hp1)
        hm1 = h
        h = hp1
        t = np.maximum(np.abs(h), np.abs(hm1))
        bad = (t > _RESCALE_HI) | ((t > 0.0) & (t < _RESCALE_LO))
        if np.any(bad):
            s = np.zeros(npts)
            s[bad] = np.log(t[bad])
            f = np.exp(-s)
            h = h * f
            hm1 = hm1 * f
            scale = scale + s
    return logmag, phase


def _series_from_logs(n, clogmag, cphase, termlog, termphase):
    """Kahan-compensated ascending-l sum of exp(termlog - max)*e^{i termphase}."""
    mx = np.max(termlog, axis=0)
    dead = mx <= 0.5 * _NEG_INF
    mx = np.where(dead, 0.0, mx)
    sre = np.zeros(mx.shape)
    cre = np.zeros(mx.shape)
    sim = np.zeros(mx.shape)
    cim = np.zeros(mx.shape)
    for l in range(n + 1):
        lm = termlog[l]
        w = np.where(lm <= 0.5 * _NEG_INF, 0.0, np.exp(np.minimum(lm - mx, 0.0)))
        ph = termphase[l]
        tre = w * np.cos(ph)
        tim = w * np.sin(ph)
        y = tre - cre
        t = sre + y
        cre = (t - sre) - y
        sre = t
        y = tim - cim
        t = sim + y
        cim = (t - sim) - y
        sim = t
    acc = sre + 1j * sim
    acc[dead] = 0.0
    return acc, mx


def hermite_series_pair(z1, z2, n, clogmag, cphase):
    h1l, h1p = _hermite_logs_vec(z1, n)
    h2l, h2p = _hermite_logs_vec(z2, n)
    ls = np.arange(n + 1)
    termlog = clogmag[:, None] + h1l[n - ls] + h2l[n - ls]
    termphase = cphase[:, None] + h1p[n - ls] + h2p[n - ls]
    return _series_from_logs(n, clogmag, cphase, termlog, termphase)


def hermite_series_single(z, n, clogmag, cphase):
    hl, _hp = _hermite_logs_vec(z, n)
    ls = np.arange(n + 1)
    termlog = clogmag[:, None] + 2.0 * hl[n - ls]
    termphase = np.broadcast_to(cphase[:, None], termlog.shape)
    return _series_from_logs(n, clogmag, cphase, termlog, termphase)


def _diag_bounds(mask_bra, mask_ket):
    ncut = mask_bra.shape[0]
    nmax = np.full(ncut, -1, np.int64)
    for d in range(ncut):
        pair = (mask_bra[d:] & mask_ket[: ncut - d]) | (mask_ket[d:] & mask_bra[: ncut - d])
        idx = np.nonzero(pair)[0]
        if idx.size:
            nmax[d] = idx[-1]
    return nmax


def displacement_overlaps(bra, ket, betas, mask_bra, mask_ket):
    ncut = bra.shape[0]
    npts = betas.shape[0]
    nmax = _diag_bounds(mask_bra, mask_ket)
    x = np.abs(betas) ** 2
    zero = x == 0.0
    safe_beta = np.where(zero, 1.0, betas)
    lnb = 0.5 * np.log(np.where(zero, 1.0, x))
    argb = np.angle(safe_beta)
    rho = -np.conj(safe_beta) / safe_beta
    rho_pow = np.ones(npts, np.complex128)

    ere = np.zeros(npts)
    ecre = np.zeros(npts)
    eim = np.zeros(npts)
    ecim = np.zeros(npts)

    def _kahan_add(term):
        nonlocal ere, ecre, eim, ecim
        y = term.real - ecre
        t = ere + y
        ecre = (t - ere) - y
        ere = t
        y = term.imag - ecim
        t = eim + y
        ecim = (t - eim) - y
        eim = t

    for d in range(ncut):
        hi = nmax[d]
        if hi >= 0:
            lt0 = d * lnb - 0.5 * math.lgamma(d + 1.0) - 0.5 * x
            tprev = np.exp(lt0) * np.exp(1j * d * argb)  # T_0
            tcur = tprev
            for ni in range(hi + 1):
                if ni == 1:
                    tcur = (1.0 + d - x) * math.sqrt(1.0 / (1.0 + d)) * tprev
                elif ni >= 2:
                    c1 = math.sqrt(ni / (ni + d))
                    c2 = math.sqrt(ni * (ni - 1.0) * (ni + d - 1.0) / (ni + d))
                    tnew = ((2.0 * ni - 1.0 + d - x) * c1 * tcur - c2 * tprev) / ni
                    tprev = tcur
                    tcur = tnew
                if mask_bra[ni + d] and mask_ket[ni]:
                    _kahan_add(np.conj(bra[ni + d]) * tcur * ket[ni])
                if d > 0 and mask_bra[ni] and mask_ket[ni + d]:
                    _kahan_add(np.conj(bra[ni]) * (tcur * rho_pow) * ket[ni + d])
        rho_pow = rho_pow * rho

    out = ere + 1j * eim
    if np.any(zero):
        both = mask_bra & mask_ket
        out[zero] = np.sum(np.conj(bra[both]) * ket[both])
    return out


def moment_table_field(a_s, a_t, c_s, d_t, e_st, n):
    """Per-point F(n,n) of the mixed-derivative moment table (see numba impl)."""
    npts = c_s.shape[0]
    if n == 0:
        return np.ones(npts, np.complex128), np.zeros(npts)
    colm2 = np.zeros((n + 1, npts), np.complex128)
    colm1 = np.zeros((n + 1, npts), np.complex128)
    colm1[0] = 1.0
    colm1[1] = c_s
    for m in range(2, n + 1):
        colm1[m] = c_s * colm1[m - 1] + 2.0 * a_s * (m - 1) * colm1[m - 2]
    scale = np.zeros(npts)
    ms = np.arange(1, n + 1)[:, None]
    for k in range(1, n + 1):
        cur = d_t * colm1 + 2.0 * a_t * (k - 1) * colm2
        cur[1:] += e_st * ms * colm1[:-1]
        colm2 = colm1
        colm1 = cur
        mx = np.abs(colm1).max(axis=0)
        bad = (mx > 1e100) | ((mx > 0.0) & (mx < 1e-100))
        if np.any(bad):
            s = np.where(bad, np.log(np.where(mx > 0.0, mx, 1.0)), 0.0)
            f = np.exp(-s)
            colm1 = colm1 * f
            colm2 = colm2 * f
            scale = scale + s
    return colm1[n], scale

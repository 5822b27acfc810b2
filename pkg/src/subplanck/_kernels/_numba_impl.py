"""Numba fast path for the hot kernels.

Grid points are independent (``prange``); every per-point reduction is
sequential in a fixed order, so results do not depend on the thread count.
"""

import math

import numpy as np
from numba import njit, prange

# Stand-in for log(0); large enough negative that exp() underflows to 0.0
# and max-scans can still compare it.
_NEG_INF = -1.0e308
_RESCALE_HI = 1.0e150
_RESCALE_LO = 1.0e-150


@njit(cache=True)
def _hermite_logs(z, n, logmag, phase):
    """Fill logmag/phase with log|H_k(z)| and arg H_k(z) for k = 0..n.

    Three-term recurrence H_{k+1} = 2 z H_k - 2 k H_{k-1} on rescaled
    mantissas; the running exponent keeps every mantissa inside
    [1e-150, 1e150].
    """
    logmag[0] = 0.0
    phase[0] = 0.0
    if n == 0:
        return
    scale = 0.0
    hm1 = 1.0 + 0.0j  # H_0 / e^scale
    h = 2.0 * z       # H_1 / e^scale
    m = abs(h)
    if m > 0.0:
        logmag[1] = scale + math.log(m)
        phase[1] = math.atan2(h.imag, h.real)
    else:
        logmag[1] = _NEG_INF
        phase[1] = 0.0
    for k in range(1, n):
        hp1 = 2.0 * z * h - 2.0 * k * hm1
        m = abs(hp1)
        if m > 0.0:
            logmag[k + 1] = scale + math.log(m)
            phase[k + 1] = math.atan2(hp1.imag, hp1.real)
        else:
            logmag[k + 1] = _NEG_INF
            phase[k + 1] = 0.0
        hm1 = h
        h = hp1
        t = abs(h)
        tm = abs(hm1)
        if tm > t:
            t = tm
        if t > _RESCALE_HI or (0.0 < t < _RESCALE_LO):
            s = math.log(t)
            f = math.exp(-s)
            h *= f
            hm1 *= f
            scale += s


@njit(cache=True)
def _series_pair_point(n, clogmag, cphase, h1l, h1p, h2l, h2p):
    """sum_l c_l * H_{n-l}(z1) * H_{n-l}(z2) from per-argument logs.

    Returns (re, im, logscale); the value is (re + i*im) * exp(logscale).
    Terms are accumulated in ascending l with Kahan compensation after
    rescaling by the largest log magnitude.
    """
    mx = _NEG_INF
    for l in range(n + 1):
        lm = clogmag[l] + h1l[n - l] + h2l[n - l]
        if lm > mx:
            mx = lm
    if mx <= 0.5 * _NEG_INF:
        return 0.0, 0.0, 0.0
    sre = 0.0
    cre = 0.0
    sim = 0.0
    cim = 0.0
    for l in range(n + 1):
        lm = clogmag[l] + h1l[n - l] + h2l[n - l]
        if lm <= 0.5 * _NEG_INF:
            continue
        w = math.exp(lm - mx)
        ph = cphase[l] + h1p[n - l] + h2p[n - l]
        tre = w * math.cos(ph)
        tim = w * math.sin(ph)
        y = tre - cre
        t = sre + y
        cre = (t - sre) - y
        sre = t
        y = tim - cim
        t = sim + y
        cim = (t - sim) - y
        sim = t
    return sre, sim, mx


@njit(cache=True)
def _series_single_point(n, clogmag, cphase, hl):
    """sum_l c_l * |H_{n-l}(z)|^2: the conjugate-pair case, phases cancel."""
    mx = _NEG_INF
    for l in range(n + 1):
        lm = clogmag[l] + 2.0 * hl[n - l]
        if lm > mx:
            mx = lm
    if mx <= 0.5 * _NEG_INF:
        return 0.0, 0.0, 0.0
    sre = 0.0
    cre = 0.0
    sim = 0.0
    cim = 0.0
    for l in range(n + 1):
        lm = clogmag[l] + 2.0 * hl[n - l]
        if lm <= 0.5 * _NEG_INF:
            continue
        w = math.exp(lm - mx)
        ph = cphase[l]
        tre = w * math.cos(ph)
        tim = w * math.sin(ph)
        y = tre - cre
        t = sre + y
        cre = (t - sre) - y
        sre = t
        y = tim - cim
        t = sim + y
        cim = (t - sim) - y
        sim = t
    return sre, sim, mx


@njit(cache=True, parallel=True)
def hermite_series_pair(z1, z2, n, clogmag, cphase):
    npts = z1.shape[0]
    acc = np.empty(npts, np.complex128)
    logscale = np.empty(npts, np.float64)
    for j in prange(npts):
        h1l = np.empty(n + 1, np.float64)
        h1p = np.empty(n + 1, np.float64)
        h2l = np.empty(n + 1, np.float64)
        h2p = np.empty(n + 1, np.float64)
        _hermite_logs(z1[j], n, h1l, h1p)
        _hermite_logs(z2[j], n, h2l, h2p)
        re, im, mx = _series_pair_point(n, clogmag, cphase, h1l, h1p, h2l, h2p)
        acc[j] = complex(re, im)
        logscale[j] = mx
    return acc, logscale


@njit(cache=True, parallel=True)
def hermite_series_single(z, n, clogmag, cphase):
    npts = z.shape[0]
    acc = np.empty(npts, np.complex128)
    logscale = np.empty(npts, np.float64)
    for j in prange(npts):
        hl = np.empty(n + 1, np.float64)
        hp = np.empty(n + 1, np.float64)
        _hermite_logs(z[j], n, hl, hp)
        re, im, mx = _series_single_point(n, clogmag, cphase, hl)
        acc[j] = complex(re, im)
        logscale[j] = mx
    return acc, logscale


@njit(cache=True)
def _diag_bounds(mask_bra, mask_ket):
    """nmax[d] of the last needed recurrence index on each diagonal.

    Upper diagonal d holds pairs (row n+d, col n); the lower one mirrors it.
    nmax[d] = -1 marks a diagonal with no populated pair at all.
    """
    ncut = mask_bra.shape[0]
    nmax = np.full(ncut, -1, np.int64)
    for d in range(ncut):
        hi = -1
        for ni in range(ncut - d):
            if (mask_bra[ni + d] and mask_ket[ni]) or (mask_ket[ni + d] and mask_bra[ni]):
                hi = ni
        nmax[d] = hi
    return nmax


@njit(cache=True, parallel=True)
def displacement_overlaps(bra, ket, betas, mask_bra, mask_ket):
    """e[j] = sum_{k,n} conj(bra[k]) <k|D(beta_j)|n> ket[n].

    Matrix elements come from the scaled associated-Laguerre recurrence,
    T_n = <n+d|D|n>, which keeps every intermediate bounded by 1 in
    magnitude (they are entries of a unitary matrix).
    """
    ncut = bra.shape[0]
    npts = betas.shape[0]
    nmax = _diag_bounds(mask_bra, mask_ket)
    out = np.empty(npts, np.complex128)
    for j in prange(npts):
        beta = betas[j]
        x = beta.real * beta.real + beta.imag * beta.imag
        if x == 0.0:
            e = 0.0 + 0.0j
            for ni in range(ncut):
                if mask_bra[ni] and mask_ket[ni]:
                    e += np.conj(bra[ni]) * ket[ni]
            out[j] = e
            continue
        lnb = 0.5 * math.log(x)
        argb = math.atan2(beta.imag, beta.real)
        rho = -np.conj(beta) / beta
        rho_pow = 1.0 + 0.0j
        ere = 0.0
        ecre = 0.0
        eim = 0.0
        ecim = 0.0
        for d in range(ncut):
            hi = nmax[d]
            if hi >= 0:
                lt0 = d * lnb - 0.5 * math.lgamma(d + 1.0) - 0.5 * x
                mag = math.exp(lt0)
                ph = d * argb
                tprev = complex(mag * math.cos(ph), mag * math.sin(ph))  # T_0
                tcur = tprev
                for ni in range(hi + 1):
                    if ni == 1:
                        tcur = (1.0 + d - x) * math.sqrt(1.0 / (1.0 + d)) * tprev
                    elif ni >= 2:
                        c1 = (2.0 * ni - 1.0 + d - x) * math.sqrt(ni / (ni + d))
                        c2 = math.sqrt(ni * (ni - 1.0) * (ni + d - 1.0) / (ni + d))
                        tnew = (c1 * tcur - c2 * tprev) / ni
                        tprev = tcur
                        tcur = tnew
                    term = 0.0 + 0.0j
                    if mask_bra[ni + d] and mask_ket[ni]:
                        term += np.conj(bra[ni + d]) * tcur * ket[ni]
                    if d > 0 and mask_bra[ni] and mask_ket[ni + d]:
                        term += np.conj(bra[ni]) * (tcur * rho_pow) * ket[ni + d]
                    if term.real != 0.0 or term.imag != 0.0:
                        y = term.real - ecre
                        t = ere + y
                        ecre = (t - ere) - y
                        ere = t
                        y = term.imag - ecim
                        t = eim + y
                        ecim = (t - eim) - y
                        eim = t
            rho_pow *= rho
        out[j] = complex(ere, eim)
    return out


@njit(cache=True)
def _moment_nn_point(a_s, a_t, c_s, d_t, e_st, n):
    """F(n,n) with F(m,k) = d^m/ds^m d^k/dt^k exp(a_s s^2 + a_t t^2 + c_s s + d_t t + e_st s t)|_0.

    Column-by-column in k:
      F(m,k) = d_t F(m,k-1) + 2 a_t (k-1) F(m,k-2) + e_st m F(m-1,k-1)
    with the k=0 column from F(m,0) = c_s F(m-1,0) + 2 a_s (m-2... ) recurrence.
    Intermediates are (rescaled) displaced-parity matrix elements between
    photon-varied states, so their magnitudes stay physically bounded and the
    recurrence avoids the cancellation of the alternating Hermite sums.
    Returns (value, logscale): F(n,n) = value * exp(logscale).
    """
    if n == 0:
        return 1.0 + 0.0j, 0.0
    colm2 = np.zeros(n + 1, np.complex128)
    colm1 = np.empty(n + 1, np.complex128)
    cur = np.empty(n + 1, np.complex128)
    colm1[0] = 1.0
    colm1[1] = c_s
    for m in range(2, n + 1):
        colm1[m] = c_s * colm1[m - 1] + 2.0 * a_s * (m - 1) * colm1[m - 2]
    scale = 0.0
    for k in range(1, n + 1):
        cur[0] = d_t * colm1[0] + 2.0 * a_t * (k - 1) * colm2[0]
        for m in range(1, n + 1):
            cur[m] = (
                d_t * colm1[m]
                + 2.0 * a_t * (k - 1) * colm2[m]
                + e_st * m * colm1[m - 1]
            )
        tmp = colm2
        colm2 = colm1
        colm1 = cur
        cur = tmp
        mx = 0.0
        for m in range(n + 1):
            a = abs(colm1[m])
            if a > mx:
                mx = a
        if mx > 1e100 or (0.0 < mx < 1e-100):
            s = math.log(mx)
            f = math.exp(-s)
            for m in range(n + 1):
                colm1[m] *= f
                colm2[m] *= f
            scale += s
    return colm1[n], scale


@njit(cache=True, parallel=True)
def moment_table_field(a_s, a_t, c_s, d_t, e_st, n):
    """Per-point F(n,n) for arrays of linear coefficients c_s, d_t."""
    npts = c_s.shape[0]
    val = np.empty(npts, np.complex128)
    logscale = np.empty(npts, np.float64)
    for j in prange(npts):
        v, s = _moment_nn_point(a_s, a_t, c_s[j], d_t[j], e_st, n)
        val[j] = v
        logscale[j] = s
    return val, logscale

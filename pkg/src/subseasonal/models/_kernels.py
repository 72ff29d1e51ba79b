"""Compiled inner loops: smoothing recursions and the simplex optimizer.

Everything here is deterministic: fixed starting simplex, no randomness, no
fastmath reassociation, so identical inputs give bit-identical fits.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# trend codes
TREND_NONE = 0
TREND_ADD = 1
TREND_DAMPED = 2
# seasonal codes
SEAS_NONE = 0
SEAS_ADD = 1
SEAS_MULT = 2

# objective kinds for the shared minimizer
KIND_ETS = 0
KIND_DSHW = 1

ALPHA_LO = 1e-4
ALPHA_HI = 0.9999
PHI_LO = 0.8
PHI_HI = 0.98
AR_LO = -0.9999
AR_HI = 0.9999

_STATE_CAP = 1e18


@njit(cache=True)
def _expit_box(z, lo, hi):
    """Overflow-safe logistic map of the real line onto (lo, hi)."""
    if z >= 0.0:
        sig = 1.0 / (1.0 + np.exp(-z))
    else:
        ez = np.exp(z)
        sig = ez / (1.0 + ez)
    return lo + (hi - lo) * sig


def logit_box(p: float, lo: float, hi: float) -> float:
    """Inverse of the logistic box map, used to seed starting values."""
    frac = (p - lo) / (hi - lo)
    frac = min(max(frac, 1e-12), 1.0 - 1e-12)
    return float(np.log(frac / (1.0 - frac)))


@njit(cache=True)
def _ets_sse(y, p, trend, seas, alpha, beta, gamma, phi, l0, b0, s):
    """One-step in-sample sum of squared errors of an additive-error model.

    ``s`` is a work buffer of length ``p`` that gets mutated.
    """
    n = y.shape[0]
    l = l0
    b = b0
    sse = 0.0
    for i in range(n):
        if trend == TREND_ADD:
            bc = b
        elif trend == TREND_DAMPED:
            bc = phi * b
        else:
            bc = 0.0
        mu = l + bc
        j = i % p
        if seas == SEAS_ADD:
            yhat = mu + s[j]
        elif seas == SEAS_MULT:
            yhat = mu * s[j]
        else:
            yhat = mu
        e = y[i] - yhat
        if seas == SEAS_MULT:
            sj = s[j]
            if abs(sj) < 1e-12 or abs(mu) < 1e-12:
                return np.inf
            l = mu + alpha * e / sj
            if trend != TREND_NONE:
                b = bc + beta * e / sj
            s[j] = sj + gamma * e / mu
        else:
            l = mu + alpha * e
            if trend != TREND_NONE:
                b = bc + beta * e
            if seas == SEAS_ADD:
                s[j] = s[j] + gamma * e
        sse += e * e
        if not np.isfinite(l) or abs(l) > _STATE_CAP:
            return np.inf
    return sse


@njit(cache=True)
def _ets_filter(y, p, trend, seas, alpha, beta, gamma, phi, l0, b0, s_init, residuals):
    """Full filtering pass; fills ``residuals`` and returns (sse, l, b, s)."""
    n = y.shape[0]
    l = l0
    b = b0
    s = s_init.copy()
    sse = 0.0
    for i in range(n):
        if trend == TREND_ADD:
            bc = b
        elif trend == TREND_DAMPED:
            bc = phi * b
        else:
            bc = 0.0
        mu = l + bc
        j = i % p
        if seas == SEAS_ADD:
            yhat = mu + s[j]
        elif seas == SEAS_MULT:
            yhat = mu * s[j]
        else:
            yhat = mu
        e = y[i] - yhat
        residuals[i] = e
        if seas == SEAS_MULT:
            sj = s[j]
            l = mu + alpha * e / sj
            if trend != TREND_NONE:
                b = bc + beta * e / sj
            s[j] = sj + gamma * e / mu
        else:
            l = mu + alpha * e
            if trend != TREND_NONE:
                b = bc + beta * e
            if seas == SEAS_ADD:
                s[j] = s[j] + gamma * e
        sse += e * e
    return sse, l, b, s


@njit(cache=True)
def _ets_path(h, p, n_obs, trend, seas, phi, l, b, s):
    """Mean forecast path from final states."""
    out = np.empty(h)
    bsum = 0.0
    phij = 1.0
    for t in range(1, h + 1):
        if trend == TREND_ADD:
            bsum = t * b
        elif trend == TREND_DAMPED:
            phij *= phi
            bsum += phij * b
        mu = l + bsum
        j = (n_obs + t - 1) % p
        if seas == SEAS_ADD:
            out[t - 1] = mu + s[j]
        elif seas == SEAS_MULT:
            out[t - 1] = mu * s[j]
        else:
            out[t - 1] = mu
    return out


@njit(cache=True)
def _ets_sse_z(z, y, icfg, scratch):
    """Decode an unconstrained optimizer vector and evaluate the SSE.

    Layout: alpha, [beta-share], [gamma-share], [phi], level, [trend],
    [p-1 free seasonal states]. Shares keep beta < alpha and gamma < 1 - alpha;
    the last seasonal state is pinned by the sum-to-zero / mean-one constraint.
    ``scratch`` (length >= p) holds the seasonal work buffer.
    """
    p = icfg[0]
    trend = icfg[1]
    seas = icfg[2]
    k = 0
    alpha = _expit_box(z[k], ALPHA_LO, ALPHA_HI)
    k += 1
    beta = 0.0
    if trend != TREND_NONE:
        beta = alpha * _expit_box(z[k], ALPHA_LO, ALPHA_HI)
        k += 1
    gamma = 0.0
    if seas != SEAS_NONE:
        gamma = (1.0 - alpha) * _expit_box(z[k], ALPHA_LO, ALPHA_HI)
        k += 1
    phi = 1.0
    if trend == TREND_DAMPED:
        phi = _expit_box(z[k], PHI_LO, PHI_HI)
        k += 1
    l0 = z[k]
    k += 1
    b0 = 0.0
    if trend != TREND_NONE:
        b0 = z[k]
        k += 1
    s = scratch[:p]
    if seas != SEAS_NONE:
        tot = 0.0
        for j in range(p - 1):
            s[j] = z[k + j]
            tot += z[k + j]
        if seas == SEAS_ADD:
            s[p - 1] = -tot
        else:
            s[p - 1] = p - tot
            for j in range(p):
                if s[j] < 1e-8:
                    return np.inf
    else:
        for j in range(p):
            s[j] = 0.0
    return _ets_sse(y, p, trend, seas, alpha, beta, gamma, phi, l0, b0, s)


@njit(cache=True)
def _dshw_sse(y, s1, s2, alpha, gam, delta, omega, lam, use_ar, level0, trend0, d, w):
    """One-step SSE of the multiplicative double-seasonal recursion.

    ``d`` (length s1) and ``w`` (length s2) are work buffers that get mutated.
    """
    n = y.shape[0]
    lvl = level0
    tr = trend0
    e_prev = 0.0
    sse = 0.0
    for t in range(n):
        i1 = t % s1
        i2 = t % s2
        dd = d[i1]
        ww = w[i2]
        den = dd * ww
        if abs(den) < 1e-12:
            return np.inf
        yhat = (lvl + tr) * den
        if use_ar == 1:
            yhat += lam * e_prev
        e = y[t] - yhat
        lvl_new = alpha * y[t] / den + (1.0 - alpha) * (lvl + tr)
        tr_new = gam * (lvl_new - lvl) + (1.0 - gam) * tr
        if abs(lvl_new * ww) < 1e-12 or abs(lvl_new * dd) < 1e-12:
            return np.inf
        d[i1] = delta * y[t] / (lvl_new * ww) + (1.0 - delta) * dd
        w[i2] = omega * y[t] / (lvl_new * dd) + (1.0 - omega) * ww
        lvl = lvl_new
        tr = tr_new
        e_prev = e
        sse += e * e
        if not np.isfinite(lvl) or abs(lvl) > _STATE_CAP:
            return np.inf
    return sse


@njit(cache=True)
def _dshw_filter(y, s1, s2, alpha, gam, delta, omega, lam, use_ar, level0, trend0,
                 d_init, w_init, residuals):
    """Full double-seasonal pass; fills ``residuals``, returns final states."""
    n = y.shape[0]
    d = d_init.copy()
    w = w_init.copy()
    lvl = level0
    tr = trend0
    e_prev = 0.0
    sse = 0.0
    for t in range(n):
        i1 = t % s1
        i2 = t % s2
        dd = d[i1]
        ww = w[i2]
        yhat = (lvl + tr) * dd * ww
        if use_ar == 1:
            yhat += lam * e_prev
        e = y[t] - yhat
        residuals[t] = e
        lvl_new = alpha * y[t] / (dd * ww) + (1.0 - alpha) * (lvl + tr)
        tr_new = gam * (lvl_new - lvl) + (1.0 - gam) * tr
        d[i1] = delta * y[t] / (lvl_new * ww) + (1.0 - delta) * dd
        w[i2] = omega * y[t] / (lvl_new * dd) + (1.0 - omega) * ww
        lvl = lvl_new
        tr = tr_new
        e_prev = e
        sse += e * e
    return sse, lvl, tr, d, w, e_prev


@njit(cache=True)
def _dshw_sse_z(z, y, icfg, fcfg, scratch):
    """Decode smoothing parameters; initial states ride along in ``fcfg``."""
    s1 = icfg[0]
    s2 = icfg[1]
    use_ar = icfg[2]
    alpha = _expit_box(z[0], ALPHA_LO, ALPHA_HI)
    gam = _expit_box(z[1], ALPHA_LO, ALPHA_HI)
    delta = _expit_box(z[2], ALPHA_LO, ALPHA_HI)
    omega = _expit_box(z[3], ALPHA_LO, ALPHA_HI)
    lam = 0.0
    if use_ar == 1:
        lam = _expit_box(z[4], AR_LO, AR_HI)
    level0 = fcfg[0]
    trend0 = fcfg[1]
    d = scratch[:s1]
    w = scratch[s1:s1 + s2]
    for j in range(s1):
        d[j] = fcfg[2 + j]
    for j in range(s2):
        w[j] = fcfg[2 + s1 + j]
    return _dshw_sse(y, s1, s2, alpha, gam, delta, omega, lam, use_ar,
                     level0, trend0, d, w)


@njit(cache=True)
def _objective(kind, z, y, icfg, fcfg, scratch):
    if kind == KIND_ETS:
        return _ets_sse_z(z, y, icfg, scratch)
    return _dshw_sse_z(z, y, icfg, fcfg, scratch)


@njit(cache=True)
def nm_minimize(kind, z0, y, icfg, fcfg, maxfev, ftol):
    """Nelder-Mead simplex from a fixed start; box constraints live in the decode.

    Standard coefficients (reflection 1, expansion 2, contraction 0.5,
    shrink 0.5) with the conventional 5% / 0.00025 initial perturbations.
    Stops when the simplex function spread falls below ``ftol * (1 + |best|)``
    or after ``maxfev`` objective evaluations. Returns (z_best, f_best, nfev).
    """
    ndim = z0.shape[0]
    npts = ndim + 1
    if kind == KIND_ETS:
        scratch = np.empty(max(icfg[0], 1))
    else:
        scratch = np.empty(icfg[0] + icfg[1])
    sim = np.empty((npts, ndim))
    fvals = np.empty(npts)
    sim[0] = z0
    fvals[0] = _objective(kind, z0, y, icfg, fcfg, scratch)
    nfev = 1
    for i in range(ndim):
        sim[i + 1] = z0
        if z0[i] != 0.0:
            sim[i + 1, i] = z0[i] * 1.05
        else:
            sim[i + 1, i] = 0.00025
        fvals[i + 1] = _objective(kind, sim[i + 1], y, icfg, fcfg, scratch)
        nfev += 1

    xbar = np.empty(ndim)
    xtry = np.empty(ndim)
    while nfev < maxfev:
        # Track best / worst / second-worst without re-sorting the simplex.
        i_best = 0
        i_worst = 0
        for i in range(1, npts):
            if fvals[i] < fvals[i_best]:
                i_best = i
            if fvals[i] > fvals[i_worst]:
                i_worst = i
        f_second = -np.inf
        for i in range(npts):
            if i != i_worst and fvals[i] > f_second:
                f_second = fvals[i]
        if fvals[i_worst] - fvals[i_best] <= ftol * (1.0 + abs(fvals[i_best])):
            break

        for j in range(ndim):
            acc = 0.0
            for i in range(npts):
                if i != i_worst:
                    acc += sim[i, j]
            xbar[j] = acc / (npts - 1)

        for j in range(ndim):
            xtry[j] = xbar[j] + 1.0 * (xbar[j] - sim[i_worst, j])
        fr = _objective(kind, xtry, y, icfg, fcfg, scratch)
        nfev += 1
        shrink = False
        if fr < fvals[i_best]:
            # expansion
            fr_keep = fr
            for j in range(ndim):
                xbar[j] = xbar[j] + 2.0 * (xbar[j] - sim[i_worst, j])  # reuse as xe
            fe = _objective(kind, xbar, y, icfg, fcfg, scratch)
            nfev += 1
            if fe < fr_keep:
                sim[i_worst] = xbar
                fvals[i_worst] = fe
            else:
                sim[i_worst] = xtry
                fvals[i_worst] = fr_keep
        elif fr < f_second:
            sim[i_worst] = xtry
            fvals[i_worst] = fr
        elif fr < fvals[i_worst]:
            # outside contraction
            for j in range(ndim):
                xtry[j] = xbar[j] + 0.5 * (xbar[j] - sim[i_worst, j])
            fc = _objective(kind, xtry, y, icfg, fcfg, scratch)
            nfev += 1
            if fc <= fr:
                sim[i_worst] = xtry
                fvals[i_worst] = fc
            else:
                shrink = True
        else:
            # inside contraction
            for j in range(ndim):
                xtry[j] = xbar[j] - 0.5 * (xbar[j] - sim[i_worst, j])
            fcc = _objective(kind, xtry, y, icfg, fcfg, scratch)
            nfev += 1
            if fcc < fvals[i_worst]:
                sim[i_worst] = xtry
                fvals[i_worst] = fcc
            else:
                shrink = True
        if shrink:
            for i in range(npts):
                if i == i_best:
                    continue
                for j in range(ndim):
                    sim[i, j] = sim[i_best, j] + 0.5 * (sim[i, j] - sim[i_best, j])
                fvals[i] = _objective(kind, sim[i], y, icfg, fcfg, scratch)
                nfev += 1

    best = int(np.argmin(fvals))
    return sim[best].copy(), fvals[best], nfev

"""Pure-numpy implementations of the hot numerical kernels.

These are the reference lane; `rhd2d._kernels` (Cython) mirrors the same
signatures and is preferred at import time when available.  All state arrays
are float64 with the component axis last: conserved (D, mx, my, E) and
primitive (rho, u, v, p), units with c = 1.
"""

import numpy as np

BACKEND_NAME = "numpy"

_TINY = 1e-300


def _flux(cons, prim, axis):
    """Physical flux along `axis` (0 = x, 1 = y) for matched state pairs."""
    un = prim[..., 1 + axis]
    p = prim[..., 3]
    out = np.empty_like(cons)
    out[..., 0] = cons[..., 0] * un
    out[..., 1] = cons[..., 1] * un
    out[..., 2] = cons[..., 2] * un
    out[..., 1 + axis] += p
    out[..., 3] = (cons[..., 3] + p) * un
    return out


def _eigen_range(prim, gamma, axis):
    """Smallest/largest characteristic speeds along `axis`."""
    rho = prim[..., 0]
    u = prim[..., 1]
    v = prim[..., 2]
    p = prim[..., 3]
    un = prim[..., 1 + axis]
    v2 = u * u + v * v
    h = 1.0 + gamma * p / ((gamma - 1.0) * rho)
    cs2 = gamma * p / (rho * h)
    cs = np.sqrt(cs2)
    ginv = np.sqrt(1.0 - v2)
    disc = np.sqrt(1.0 - un * un - cs2 * (v2 - un * un))
    den = 1.0 - cs2 * v2
    lam1 = (un * (1.0 - cs2) - cs * ginv * disc) / den
    lam4 = (un * (1.0 - cs2) + cs * ginv * disc) / den
    return lam1, lam4


def recover_primitive(cons, gamma, tol, max_iter):
    """Invert the conserved->primitive map by solving the pressure equation.

    `cons` has shape (m, 4) and must be admissible.  Returns (prim, bad)
    where `bad` counts entries that did not converge within `max_iter`.
    Safeguarded Newton on p with the analytic bracket
    (max(0,|m|-E), (Gamma-1)E); a Newton iterate leaving the bracket falls
    back to bisection.
    """
    D0 = cons[:, 0]
    mx = cons[:, 1]
    my = cons[:, 2]
    E0 = cons[:, 3]
    M2_0 = mx * mx + my * my
    gm1 = gamma - 1.0
    eps = np.finfo(float).eps

    lo = np.maximum(0.0, np.sqrt(M2_0) - E0) * (1.0 + 1e-13) + _TINY
    hi = gm1 * E0
    p_out = 0.5 * (lo + hi)

    # compressed active set: most states converge in a few Newton sweeps,
    # stragglers keep iterating without dragging the whole array along
    idx = np.arange(p_out.shape[0])
    D, E, M2 = D0, E0, M2_0
    p = p_out.copy()
    dxold = hi - lo

    for _ in range(max_iter):
        W2 = E + p
        s2 = W2 * W2 - M2
        s = np.sqrt(s2)
        g = W2 / s  # Lorentz factor at this pressure iterate
        f = D * g + gamma / gm1 * p * g * g - E - p
        resid_ok = np.abs(f) <= tol * E
        # maintain the bracket: f < 0 below the root, f > 0 above
        pos = f > 0.0
        hi = np.where(pos, p, hi)
        lo = np.where(pos, lo, p)
        dgdp = -M2 / (s2 * s)
        df = D * dgdp + gamma / gm1 * (g * g - 2.0 * p * W2 * M2 / (s2 * s2)) - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            p_newton = p - f / df
        # bisect when Newton leaves the bracket or fails to halve the step;
        # this kills two-cycles at roundoff level and guarantees collapse
        bad_step = (~np.isfinite(p_newton) | (p_newton <= lo) | (p_newton >= hi)
                    | (np.abs(2.0 * f) > np.abs(dxold * df)))
        p_next = np.where(bad_step, 0.5 * (lo + hi), p_newton)
        dxold = np.abs(p_next - p)
        # converged once the residual is small and p itself has settled
        # (tiny step, or the bracket cannot be narrowed further in float64)
        settled = (dxold <= 1e-14 * p_next + _TINY) | (hi - lo <= 4.0 * eps * hi)
        done = resid_ok & settled
        p_out[idx] = np.where(done, p, p_next)
        if done.all():
            idx = idx[:0]
            break
        keep = ~done
        idx = idx[keep]
        D, E, M2 = D[keep], E[keep], M2[keep]
        p, lo, hi, dxold = p_next[keep], lo[keep], hi[keep], dxold[keep]

    bad = int(idx.shape[0])
    p = p_out
    W2 = E0 + p
    prim = np.empty_like(cons)
    prim[:, 1] = mx / W2
    prim[:, 2] = my / W2
    prim[:, 0] = D0 * np.sqrt(np.maximum(W2 * W2 - M2_0, 0.0)) / W2
    prim[:, 3] = p
    return prim, bad


def weno5_multi(stencils, cmat, dvec, eps):
    """Fifth-order WENO evaluation at several reference nodes per stencil.

    stencils : (m, 5) cell averages, cells i-2..i+2
    cmat     : (P, 3, 5) candidate-quadratic evaluation coefficients per node
    dvec     : (P, 3) ideal weights per node
    Returns (m, P).  The Jiang-Shu smoothness indicators are shared by all
    target nodes of a stencil.
    """
    s0 = stencils[:, 0]
    s1 = stencils[:, 1]
    s2 = stencils[:, 2]
    s3 = stencils[:, 3]
    s4 = stencils[:, 4]
    b0 = 13.0 / 12.0 * (s0 - 2.0 * s1 + s2) ** 2 + 0.25 * (s0 - 4.0 * s1 + 3.0 * s2) ** 2
    b1 = 13.0 / 12.0 * (s1 - 2.0 * s2 + s3) ** 2 + 0.25 * (s1 - s3) ** 2
    b2 = 13.0 / 12.0 * (s2 - 2.0 * s3 + s4) ** 2 + 0.25 * (3.0 * s2 - 4.0 * s3 + s4) ** 2
    beta = np.stack([b0, b1, b2], axis=-1)  # (m, 3)
    p = cmat.shape[0]
    q = (stencils @ cmat.reshape(p * 3, 5).T).reshape(-1, p, 3)  # (m, P, 3)
    alpha = dvec[None, :, :] / (eps + beta[:, None, :]) ** 2
    w = alpha / alpha.sum(axis=-1, keepdims=True)
    return (w * q).sum(axis=-1)


def pair_speeds(prim_l, prim_r, gamma, axis, alpha):
    """Extreme wave speeds of a two-state fan, amplified by `alpha`."""
    l1l, l4l = _eigen_range(prim_l, gamma, axis)
    l1r, l4r = _eigen_range(prim_r, gamma, axis)
    return alpha * np.minimum(l1l, l1r), alpha * np.maximum(l4l, l4r)


def hll1d_flux(cons_l, prim_l, cons_r, prim_r, gamma, axis, alpha):
    """Single-state HLL flux along `axis` with sign-clipped speeds.

    Returns (flux, s_min, s_max).  The clipped form reduces to the pure
    upwind flux automatically when both speeds share a sign.
    """
    s_min, s_max = pair_speeds(prim_l, prim_r, gamma, axis, alpha)
    fl = _flux(cons_l, prim_l, axis)
    fr = _flux(cons_r, prim_r, axis)
    bm = np.minimum(s_min, 0.0)[..., None]
    bp = np.maximum(s_max, 0.0)[..., None]
    flux = (bp * fl - bm * fr + bp * bm * (cons_r - cons_l)) / (bp - bm)
    return flux, s_min, s_max


def corner_fluxes(cons_ld, prim_ld, cons_lu, prim_lu, cons_rd, prim_rd,
                  cons_ru, prim_ru, gamma, alpha):
    """Corner-coupled HLL fluxes fed by the four quadrant states.

    Returns (fstar, gstar, s_l_m, s_r_p, s_d_m, s_u_p, n_degenerate) where
    the speeds are the sign-clipped fan extremes shared by the adjacent edge
    assemblies and `n_degenerate` counts fans that are one-signed in x or y.
    """
    l1, l4 = _eigen_range(prim_ld, gamma, 0)
    s_l, s_r = l1, l4
    for pq in (prim_lu, prim_rd, prim_ru):
        a1, a4 = _eigen_range(pq, gamma, 0)
        s_l = np.minimum(s_l, a1)
        s_r = np.maximum(s_r, a4)
    b1, b4 = _eigen_range(prim_ld, gamma, 1)
    s_d, s_u = b1, b4
    for pq in (prim_lu, prim_rd, prim_ru):
        a1, a4 = _eigen_range(pq, gamma, 1)
        s_d = np.minimum(s_d, a1)
        s_u = np.maximum(s_u, a4)
    s_l = alpha * s_l
    s_r = alpha * s_r
    s_d = alpha * s_d
    s_u = alpha * s_u

    degen = (s_l >= 0.0) | (s_r <= 0.0) | (s_d >= 0.0) | (s_u <= 0.0)
    n_degenerate = int(np.count_nonzero(degen))

    slm = np.minimum(s_l, 0.0)[..., None]
    srp = np.maximum(s_r, 0.0)[..., None]
    sdm = np.minimum(s_d, 0.0)[..., None]
    sup = np.maximum(s_u, 0.0)[..., None]

    f_ld = _flux(cons_ld, prim_ld, 0)
    f_lu = _flux(cons_lu, prim_lu, 0)
    f_rd = _flux(cons_rd, prim_rd, 0)
    f_ru = _flux(cons_ru, prim_ru, 0)
    g_ld = _flux(cons_ld, prim_ld, 1)
    g_lu = _flux(cons_lu, prim_lu, 1)
    g_rd = _flux(cons_rd, prim_rd, 1)
    g_ru = _flux(cons_ru, prim_ru, 1)

    dx_inv = 1.0 / (srp - slm)
    dy_inv = 1.0 / (sup - sdm)
    fu = (srp * f_lu - slm * f_ru + slm * srp * (cons_ru - cons_lu)) * dx_inv
    fd = (srp * f_ld - slm * f_rd + slm * srp * (cons_rd - cons_ld)) * dx_inv
    gr = (sup * g_rd - sdm * g_ru + sdm * sup * (cons_ru - cons_rd)) * dy_inv
    gl = (sup * g_ld - sdm * g_lu + sdm * sup * (cons_lu - cons_ld)) * dy_inv

    dg = g_ru - g_rd - g_lu + g_ld
    df = f_ru - f_rd - f_lu + f_ld
    fstar = (sup * fu - sdm * fd - 2.0 * slm * srp * dx_inv * dg) * dy_inv
    gstar = (srp * gr - slm * gl - 2.0 * sdm * sup * dy_inv * df) * dx_inv

    return (fstar, gstar, slm[..., 0], srp[..., 0], sdm[..., 0], sup[..., 0],
            n_degenerate)

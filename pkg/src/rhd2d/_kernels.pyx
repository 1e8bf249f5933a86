# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot numerical kernels.

Mirrors rhd2d._kernels_np; see that module for the contracts.  State
layout: conserved (D, mx, my, E), primitive (rho, u, v, p), shape (m, 4).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isfinite, sqrt

cnp.import_array()

BACKEND_NAME = "cython"

cdef double _TINY = 1e-300
cdef double _EPS = 2.220446049250313e-16


cdef inline void _eig_range(double rho, double un, double ut, double p,
                            double gamma, double* l1, double* l4) nogil:
    cdef double v2 = un * un + ut * ut
    cdef double h = 1.0 + gamma * p / ((gamma - 1.0) * rho)
    cdef double cs2 = gamma * p / (rho * h)
    cdef double cs = sqrt(cs2)
    cdef double ginv = sqrt(1.0 - v2)
    cdef double disc = sqrt(1.0 - un * un - cs2 * (v2 - un * un))
    cdef double den = 1.0 - cs2 * v2
    l1[0] = (un * (1.0 - cs2) - cs * ginv * disc) / den
    l4[0] = (un * (1.0 - cs2) + cs * ginv * disc) / den


cdef inline void _flux(const double* u, const double* v, int axis, double* out) nogil:
    cdef double un = v[1 + axis]
    cdef double p = v[3]
    out[0] = u[0] * un
    out[1] = u[1] * un
    out[2] = u[2] * un
    out[1 + axis] += p
    out[3] = (u[3] + p) * un


def recover_primitive(double[:, ::1] cons, double gamma, double tol, int max_iter):
    cdef Py_ssize_t m = cons.shape[0]
    prim_arr = np.empty((m, 4))
    cdef double[:, ::1] prim = prim_arr
    cdef Py_ssize_t i
    cdef int bad = 0, it, ok
    cdef double D, mx, my, E, M2, gm1, lo, hi, p, dxold, W2, s2, s, g, f
    cdef double dgdp, df, p_newton, p_next, step
    gm1 = gamma - 1.0
    with nogil:
        for i in range(m):
            D = cons[i, 0]
            mx = cons[i, 1]
            my = cons[i, 2]
            E = cons[i, 3]
            M2 = mx * mx + my * my
            lo = sqrt(M2) - E
            if lo < 0.0:
                lo = 0.0
            lo = lo * (1.0 + 1e-13) + _TINY
            hi = gm1 * E
            p = 0.5 * (lo + hi)
            dxold = hi - lo
            ok = 0
            for it in range(max_iter):
                W2 = E + p
                s2 = W2 * W2 - M2
                s = sqrt(s2)
                g = W2 / s
                f = D * g + gamma / gm1 * p * g * g - E - p
                if f > 0.0:
                    hi = p
                else:
                    lo = p
                dgdp = -M2 / (s2 * s)
                df = D * dgdp + gamma / gm1 * (g * g - 2.0 * p * W2 * M2 / (s2 * s2)) - 1.0
                p_newton = p - f / df
                if (not isfinite(p_newton)) or p_newton <= lo or p_newton >= hi \
                        or fabs(2.0 * f) > fabs(dxold * df):
                    p_next = 0.5 * (lo + hi)
                else:
                    p_next = p_newton
                step = fabs(p_next - p)
                dxold = step
                if fabs(f) <= tol * E and (step <= 1e-14 * p_next + _TINY
                                           or hi - lo <= 4.0 * _EPS * hi):
                    ok = 1
                    break
                p = p_next
            if not ok:
                bad += 1
            W2 = E + p
            s2 = W2 * W2 - M2
            if s2 < 0.0:
                s2 = 0.0
            prim[i, 0] = D * sqrt(s2) / W2
            prim[i, 1] = mx / W2
            prim[i, 2] = my / W2
            prim[i, 3] = p
    return prim_arr, bad


def weno5_multi(double[:, ::1] stencils, double[:, :, ::1] cmat,
                double[:, ::1] dvec, double eps):
    cdef Py_ssize_t m = stencils.shape[0]
    cdef Py_ssize_t np_ = cmat.shape[0]
    out_arr = np.empty((m, np_))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, c
    cdef double s0, s1, s2, s3, s4, b0, b1, b2, a0, a1, a2, q, total
    with nogil:
        for i in range(m):
            s0 = stencils[i, 0]
            s1 = stencils[i, 1]
            s2 = stencils[i, 2]
            s3 = stencils[i, 3]
            s4 = stencils[i, 4]
            b0 = (13.0 / 12.0) * (s0 - 2.0 * s1 + s2) ** 2 \
                + 0.25 * (s0 - 4.0 * s1 + 3.0 * s2) ** 2
            b1 = (13.0 / 12.0) * (s1 - 2.0 * s2 + s3) ** 2 + 0.25 * (s1 - s3) ** 2
            b2 = (13.0 / 12.0) * (s2 - 2.0 * s3 + s4) ** 2 \
                + 0.25 * (3.0 * s2 - 4.0 * s3 + s4) ** 2
            b0 = (eps + b0) * (eps + b0)
            b1 = (eps + b1) * (eps + b1)
            b2 = (eps + b2) * (eps + b2)
            for j in range(np_):
                a0 = dvec[j, 0] / b0
                a1 = dvec[j, 1] / b1
                a2 = dvec[j, 2] / b2
                total = a0 + a1 + a2
                q = a0 * (cmat[j, 0, 0] * s0 + cmat[j, 0, 1] * s1 + cmat[j, 0, 2] * s2
                          + cmat[j, 0, 3] * s3 + cmat[j, 0, 4] * s4)
                q += a1 * (cmat[j, 1, 0] * s0 + cmat[j, 1, 1] * s1 + cmat[j, 1, 2] * s2
                           + cmat[j, 1, 3] * s3 + cmat[j, 1, 4] * s4)
                q += a2 * (cmat[j, 2, 0] * s0 + cmat[j, 2, 1] * s1 + cmat[j, 2, 2] * s2
                           + cmat[j, 2, 3] * s3 + cmat[j, 2, 4] * s4)
                out[i, j] = q / total
    return out_arr


def pair_speeds(prim_l, prim_r, double gamma, int axis, double alpha):
    cdef cnp.ndarray pl = np.ascontiguousarray(
        np.asarray(prim_l, dtype=np.float64).reshape(-1, 4))
    cdef cnp.ndarray pr = np.ascontiguousarray(
        np.asarray(prim_r, dtype=np.float64).reshape(-1, 4))
    cdef double[:, ::1] l = pl
    cdef double[:, ::1] r = pr
    cdef Py_ssize_t m = l.shape[0]
    smin_arr = np.empty(m)
    smax_arr = np.empty(m)
    cdef double[::1] smin = smin_arr
    cdef double[::1] smax = smax_arr
    cdef Py_ssize_t i
    cdef double a1, a4, b1, b4
    with nogil:
        for i in range(m):
            if axis == 0:
                _eig_range(l[i, 0], l[i, 1], l[i, 2], l[i, 3], gamma, &a1, &a4)
                _eig_range(r[i, 0], r[i, 1], r[i, 2], r[i, 3], gamma, &b1, &b4)
            else:
                _eig_range(l[i, 0], l[i, 2], l[i, 1], l[i, 3], gamma, &a1, &a4)
                _eig_range(r[i, 0], r[i, 2], r[i, 1], r[i, 3], gamma, &b1, &b4)
            smin[i] = alpha * (a1 if a1 < b1 else b1)
            smax[i] = alpha * (a4 if a4 > b4 else b4)
    shape = np.asarray(prim_l).shape[:-1]
    return smin_arr.reshape(shape), smax_arr.reshape(shape)


def hll1d_flux(double[:, ::1] cons_l, double[:, ::1] prim_l,
               double[:, ::1] cons_r, double[:, ::1] prim_r,
               double gamma, int axis, double alpha):
    cdef Py_ssize_t m = cons_l.shape[0]
    flux_arr = np.empty((m, 4))
    smin_arr = np.empty(m)
    smax_arr = np.empty(m)
    cdef double[:, ::1] flux = flux_arr
    cdef double[::1] smin = smin_arr
    cdef double[::1] smax = smax_arr
    cdef Py_ssize_t i, c
    cdef double a1, a4, b1, b4, sl, sr, bm, bp, wden
    cdef double fl[4]
    cdef double fr[4]
    with nogil:
        for i in range(m):
            if axis == 0:
                _eig_range(prim_l[i, 0], prim_l[i, 1], prim_l[i, 2], prim_l[i, 3],
                           gamma, &a1, &a4)
                _eig_range(prim_r[i, 0], prim_r[i, 1], prim_r[i, 2], prim_r[i, 3],
                           gamma, &b1, &b4)
            else:
                _eig_range(prim_l[i, 0], prim_l[i, 2], prim_l[i, 1], prim_l[i, 3],
                           gamma, &a1, &a4)
                _eig_range(prim_r[i, 0], prim_r[i, 2], prim_r[i, 1], prim_r[i, 3],
                           gamma, &b1, &b4)
            sl = alpha * (a1 if a1 < b1 else b1)
            sr = alpha * (a4 if a4 > b4 else b4)
            smin[i] = sl
            smax[i] = sr
            bm = sl if sl < 0.0 else 0.0
            bp = sr if sr > 0.0 else 0.0
            _flux(&cons_l[i, 0], &prim_l[i, 0], axis, fl)
            _flux(&cons_r[i, 0], &prim_r[i, 0], axis, fr)
            wden = bp - bm
            for c in range(4):
                flux[i, c] = (bp * fl[c] - bm * fr[c]
                              + bp * bm * (cons_r[i, c] - cons_l[i, c])) / wden
    return flux_arr, smin_arr, smax_arr


def corner_fluxes(double[:, ::1] cons_ld, double[:, ::1] prim_ld,
                  double[:, ::1] cons_lu, double[:, ::1] prim_lu,
                  double[:, ::1] cons_rd, double[:, ::1] prim_rd,
                  double[:, ::1] cons_ru, double[:, ::1] prim_ru,
                  double gamma, double alpha):
    cdef Py_ssize_t m = cons_ld.shape[0]
    fstar_arr = np.empty((m, 4))
    gstar_arr = np.empty((m, 4))
    slm_arr = np.empty(m)
    srp_arr = np.empty(m)
    sdm_arr = np.empty(m)
    sup_arr = np.empty(m)
    cdef double[:, ::1] fstar = fstar_arr
    cdef double[:, ::1] gstar = gstar_arr
    cdef double[::1] slm_v = slm_arr
    cdef double[::1] srp_v = srp_arr
    cdef double[::1] sdm_v = sdm_arr
    cdef double[::1] sup_v = sup_arr
    cdef Py_ssize_t i, c
    cdef int ndeg = 0
    cdef double l1, l4, s_l, s_r, s_d, s_u, slm, srp, sdm, sup
    cdef double dx_inv, dy_inv, dg, df
    cdef double f_ld[4]
    cdef double f_lu[4]
    cdef double f_rd[4]
    cdef double f_ru[4]
    cdef double g_ld[4]
    cdef double g_lu[4]
    cdef double g_rd[4]
    cdef double g_ru[4]
    cdef double fu[4]
    cdef double fd[4]
    cdef double gr[4]
    cdef double gl[4]
    with nogil:
        for i in range(m):
            _eig_range(prim_ld[i, 0], prim_ld[i, 1], prim_ld[i, 2], prim_ld[i, 3],
                       gamma, &l1, &l4)
            s_l = l1
            s_r = l4
            _eig_range(prim_lu[i, 0], prim_lu[i, 1], prim_lu[i, 2], prim_lu[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_l: s_l = l1
            if l4 > s_r: s_r = l4
            _eig_range(prim_rd[i, 0], prim_rd[i, 1], prim_rd[i, 2], prim_rd[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_l: s_l = l1
            if l4 > s_r: s_r = l4
            _eig_range(prim_ru[i, 0], prim_ru[i, 1], prim_ru[i, 2], prim_ru[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_l: s_l = l1
            if l4 > s_r: s_r = l4

            _eig_range(prim_ld[i, 0], prim_ld[i, 2], prim_ld[i, 1], prim_ld[i, 3],
                       gamma, &l1, &l4)
            s_d = l1
            s_u = l4
            _eig_range(prim_lu[i, 0], prim_lu[i, 2], prim_lu[i, 1], prim_lu[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_d: s_d = l1
            if l4 > s_u: s_u = l4
            _eig_range(prim_rd[i, 0], prim_rd[i, 2], prim_rd[i, 1], prim_rd[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_d: s_d = l1
            if l4 > s_u: s_u = l4
            _eig_range(prim_ru[i, 0], prim_ru[i, 2], prim_ru[i, 1], prim_ru[i, 3],
                       gamma, &l1, &l4)
            if l1 < s_d: s_d = l1
            if l4 > s_u: s_u = l4

            s_l *= alpha
            s_r *= alpha
            s_d *= alpha
            s_u *= alpha
            if s_l >= 0.0 or s_r <= 0.0 or s_d >= 0.0 or s_u <= 0.0:
                ndeg += 1
            slm = s_l if s_l < 0.0 else 0.0
            srp = s_r if s_r > 0.0 else 0.0
            sdm = s_d if s_d < 0.0 else 0.0
            sup = s_u if s_u > 0.0 else 0.0
            slm_v[i] = slm
            srp_v[i] = srp
            sdm_v[i] = sdm
            sup_v[i] = sup

            _flux(&cons_ld[i, 0], &prim_ld[i, 0], 0, f_ld)
            _flux(&cons_lu[i, 0], &prim_lu[i, 0], 0, f_lu)
            _flux(&cons_rd[i, 0], &prim_rd[i, 0], 0, f_rd)
            _flux(&cons_ru[i, 0], &prim_ru[i, 0], 0, f_ru)
            _flux(&cons_ld[i, 0], &prim_ld[i, 0], 1, g_ld)
            _flux(&cons_lu[i, 0], &prim_lu[i, 0], 1, g_lu)
            _flux(&cons_rd[i, 0], &prim_rd[i, 0], 1, g_rd)
            _flux(&cons_ru[i, 0], &prim_ru[i, 0], 1, g_ru)

            dx_inv = 1.0 / (srp - slm)
            dy_inv = 1.0 / (sup - sdm)
            for c in range(4):
                fu[c] = (srp * f_lu[c] - slm * f_ru[c]
                         + slm * srp * (cons_ru[i, c] - cons_lu[i, c])) * dx_inv
                fd[c] = (srp * f_ld[c] - slm * f_rd[c]
                         + slm * srp * (cons_rd[i, c] - cons_ld[i, c])) * dx_inv
                gr[c] = (sup * g_rd[c] - sdm * g_ru[c]
                         + sdm * sup * (cons_ru[i, c] - cons_rd[i, c])) * dy_inv
                gl[c] = (sup * g_ld[c] - sdm * g_lu[c]
                         + sdm * sup * (cons_lu[i, c] - cons_ld[i, c])) * dy_inv
                dg = g_ru[c] - g_rd[c] - g_lu[c] + g_ld[c]
                df = f_ru[c] - f_rd[c] - f_lu[c] + f_ld[c]
                fstar[i, c] = (sup * fu[c] - sdm * fd[c]
                               - 2.0 * slm * srp * dx_inv * dg) * dy_inv
                gstar[i, c] = (srp * gr[c] - slm * gl[c]
                               - 2.0 * sdm * sup * dy_inv * df) * dx_inv
    return fstar_arr, gstar_arr, slm_arr, srp_arr, sdm_arr, sup_arr, ndeg

"""Fifth-order scheme: quadrature edge fluxes, flux limiting, SSP-RK3.

Each edge integrates its flux with the K = 4 Gauss-Lobatto rule: the two
endpoint nodes are corners shared with the transverse edges and take the
corner-coupled 2D HLL flux, the interior nodes take 1D HLL fluxes of the
reconstructed point values.  A per-edge convex blend with the local
Lax-Friedrichs flux then restores admissibility of the four shifted states
that average to the updated cell (the flux limiter); reconstruction point
values were already pulled onto the floors by the scaling limiter.
"""

from dataclasses import dataclass

import numpy as np

from . import backend, reconstruction, state
from .errors import InvariantViolation, PCPViolationError
from .first_order import StepStats, compute_dt_first
from .state import Axis

FLUX_EPS_D = 1e-14
FLUX_EPS_Q = 1e-14
SCALING_EPS_D = 1e-13
SCALING_EPS_Q = 1e-13


@dataclass(frozen=True)
class LimiterStats:
    """Activation fractions of the two limiters over one step."""

    scaling_frac_d: float
    scaling_frac_q: float
    scaling_frac: float   # cells with either scaling factor < 1
    flux_frac_d: float
    flux_frac_q: float
    flux_frac: float      # edges with theta_d * theta_q < 1

    @classmethod
    def zero(cls):
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def averaged_with(self, *others):
        vals = [self] + list(others)
        n = len(vals)
        return LimiterStats(*[sum(getattr(v, f) for v in vals) / n
                              for f in ("scaling_frac_d", "scaling_frac_q", "scaling_frac",
                                        "flux_frac_d", "flux_frac_q", "flux_frac")])


def low_order_lf_flux(left, right, eos, axis):
    """Local Lax-Friedrichs flux with the larger adjacent spectral radius."""
    fl = state.physical_flux(left.prim, left.cons, axis)
    fr = state.physical_flux(right.prim, right.cons, axis)
    a = np.maximum(state.spectral_radius(left.prim, eos, axis),
                   state.spectral_radius(right.prim, eos, axis))
    return 0.5 * (fl + fr - a[..., None] * (right.cons - left.cons))


def compute_dt_high(fld, sigma):
    """min(first-order CFL dt, quarter of the smallest edge crossing time)."""
    dt_cfl = compute_dt_first(fld, sigma)
    g = fld.ng
    nx, ny = fld.mesh.nx, fld.mesh.ny
    prim = fld.prim[g - 1:nx + g + 1, g - 1:ny + g + 1]
    rx = state.spectral_radius(prim, fld.eos, Axis.X)
    ry = state.spectral_radius(prim, fld.eos, Axis.Y)
    ax = np.maximum(rx[:-1, 1:-1], rx[1:, 1:-1]).max()
    by = np.maximum(ry[1:-1, :-1], ry[1:-1, 1:]).max()
    dt_lim = 0.25 * min(fld.mesh.dx / ax, fld.mesh.dy / by)
    return min(dt_cfl, dt_lim)


def _low_order_fluxes(fld):
    """Lax-Friedrichs fluxes on every x- and y-interface of the interior."""
    g = fld.ng
    nx, ny = fld.mesh.nx, fld.mesh.ny
    U, V = fld.cons, fld.prim
    eos = fld.eos

    ul, vl = U[g - 1:nx + g, g:ny + g], V[g - 1:nx + g, g:ny + g]
    ur, vr = U[g:nx + g + 1, g:ny + g], V[g:nx + g + 1, g:ny + g]
    fl = state.physical_flux(vl, ul, Axis.X)
    fr = state.physical_flux(vr, ur, Axis.X)
    a = np.maximum(state.spectral_radius(vl, eos, Axis.X),
                   state.spectral_radius(vr, eos, Axis.X))
    flow = 0.5 * (fl + fr - a[..., None] * (ur - ul))

    ud, vd = U[g:nx + g, g - 1:ny + g], V[g:nx + g, g - 1:ny + g]
    uu, vu = U[g:nx + g, g:ny + g + 1], V[g:nx + g, g:ny + g + 1]
    gl = state.physical_flux(vd, ud, Axis.Y)
    gu = state.physical_flux(vu, uu, Axis.Y)
    b = np.maximum(state.spectral_radius(vd, eos, Axis.Y),
                   state.spectral_radius(vu, eos, Axis.Y))
    glow = 0.5 * (gl + gu - b[..., None] * (uu - ud))
    return flow, glow


def _recover_ring(points, eos, pcp, stage):
    """Primitive states for the quadrature ring, same layout as `points`."""
    ring = points.ring
    flat = ring.reshape(-1, 4)
    ok = state.is_admissible(flat)
    if not ok.all():
        bad = int(np.count_nonzero(~ok))
        raise PCPViolationError(
            f"{bad} reconstructed quadrature state(s) inadmissible "
            f"(stage {stage}); the scheme needs the scaling limiter here",
            stage=stage)
    prim, nbad = backend.recover_primitive(flat, eos.gamma, 1e-13, 200)
    if nbad:
        raise PCPViolationError(
            f"primitive recovery failed for {nbad} quadrature state(s) "
            f"(stage {stage})", stage=stage)
    return reconstruction.CellPointValues(prim.reshape(ring.shape), points.rule)


def high_order_edge_fluxes(fld, points, prim_points, alpha):
    """Gauss-Lobatto quadrature fluxes on every interior interface.

    Returns (fhigh (nx+1, ny, 4), ghigh (nx, ny+1, 4), n_degenerate).
    Endpoint nodes take corner fluxes shared between the edge families;
    interior nodes take 1D HLL fluxes of the facing point values.
    """
    nx, ny = fld.mesh.nx, fld.mesh.ny
    P, W = points.points, prim_points
    rule = points.rule
    k = rule.k
    w = rule.weights
    gamma = fld.eos.gamma

    def flat(a):
        return np.ascontiguousarray(a.reshape(-1, 4))

    # corner fluxes on the (nx+1, ny+1) corner grid
    ld_u, ld_v = P[:-1, :-1, k - 1, k - 1], W[:-1, :-1, k - 1, k - 1]
    rd_u, rd_v = P[1:, :-1, 0, k - 1], W[1:, :-1, 0, k - 1]
    lu_u, lu_v = P[:-1, 1:, k - 1, 0], W[:-1, 1:, k - 1, 0]
    ru_u, ru_v = P[1:, 1:, 0, 0], W[1:, 1:, 0, 0]
    shape = ld_u.shape[:2]
    fstar, gstar, *_rest, ndeg = backend.corner_fluxes(
        flat(ld_u), flat(ld_v), flat(lu_u), flat(lu_v),
        flat(rd_u), flat(rd_v), flat(ru_u), flat(ru_v), gamma, alpha)
    fstar = fstar.reshape(shape + (4,))
    gstar = gstar.reshape(shape + (4,))

    # x-edges: interfaces e in 0..nx across rows j (point cells jj = j+1)
    fhigh = np.zeros((nx + 1, ny, 4))
    fhigh += w[0] * (fstar[:, :-1] + fstar[:, 1:])
    for b in range(1, k - 1):
        lu, lv = P[:-1, 1:-1, k - 1, b], W[:-1, 1:-1, k - 1, b]
        ru, rv = P[1:, 1:-1, 0, b], W[1:, 1:-1, 0, b]
        fmid, _, _ = backend.hll1d_flux(flat(lu), flat(lv), flat(ru), flat(rv),
                                        gamma, 0, alpha)
        fhigh += w[b] * fmid.reshape(nx + 1, ny, 4)

    # y-edges
    ghigh = np.zeros((nx, ny + 1, 4))
    ghigh += w[0] * (gstar[:-1, :] + gstar[1:, :])
    for a in range(1, k - 1):
        du, dv = P[1:-1, :-1, a, k - 1], W[1:-1, :-1, a, k - 1]
        uu, uv = P[1:-1, 1:, a, 0], W[1:-1, 1:, a, 0]
        gmid, _, _ = backend.hll1d_flux(flat(du), flat(dv), flat(uu), flat(uv),
                                        gamma, 1, alpha)
        ghigh += w[a] * gmid.reshape(nx, ny + 1, 4)

    return fhigh, ghigh, int(ndeg)


def pcp_flux_limiter(fhigh, ghigh, flow, glow, fld, dt,
                     eps_d=FLUX_EPS_D, eps_q=FLUX_EPS_Q):
    """Blend high-order fluxes toward Lax-Friedrichs onto the floors.

    Stage one limits only the mass-flux component until the shifted
    densities reach eps_d; stage two blends the full flux until the q of
    the shifted states reaches eps_q (q is concave, so the linear factor
    is sufficient).  Returns (fpcp, gpcp, theta fractions tuple).
    """
    g = fld.ng
    nx, ny = fld.mesh.nx, fld.mesh.ny
    dx, dy = fld.mesh.dx, fld.mesh.dy
    UL = fld.cons[g - 1:nx + g, g:ny + g]      # left cell of each x-edge
    UR = fld.cons[g:nx + g + 1, g:ny + g]
    UD = fld.cons[g:nx + g, g - 1:ny + g]
    UB = fld.cons[g:nx + g, g:ny + g + 1]

    fpcp, fx_d, fx_q = _limit_axis(fhigh, flow, UL, UR, 4.0 * dt / dx, eps_d, eps_q)
    gpcp, fy_d, fy_q = _limit_axis(ghigh, glow, UD, UB, 4.0 * dt / dy, eps_d, eps_q)

    n_edges = fx_d.size + fy_d.size
    frac_d = (np.count_nonzero(fx_d < 1.0) + np.count_nonzero(fy_d < 1.0)) / n_edges
    frac_q = (np.count_nonzero(fx_q < 1.0) + np.count_nonzero(fy_q < 1.0)) / n_edges
    frac = (np.count_nonzero(fx_d * fx_q < 1.0)
            + np.count_nonzero(fy_d * fy_q < 1.0)) / n_edges
    return fpcp, gpcp, (frac_d, frac_q, frac)


def _limit_axis(high, low, u_m, u_p, c, eps_d, eps_q):
    """Per-edge limiter along one axis; c = 4 dt / (mesh spacing)."""
    plus_low = u_m - c * low     # left/down cell shifted by this edge
    minus_low = u_p + c * low    # right/up cell shifted by this edge
    d_pl, d_ml = plus_low[..., 0], minus_low[..., 0]
    q_pl, q_ml = state.q_value(plus_low), state.q_value(minus_low)
    if min(d_pl.min(), d_ml.min()) < eps_d or min(q_pl.min(), q_ml.min()) < eps_q:
        raise InvariantViolation(
            "low-order shifted states violate the limiter floors; "
            "the time step is too large for the flux limiter")

    d_ph = u_m[..., 0] - c * high[..., 0]
    d_mh = u_p[..., 0] + c * high[..., 0]
    th_p = np.where(d_ph < eps_d, (d_pl - eps_d) / (d_pl - d_ph), 1.0)
    th_m = np.where(d_mh < eps_d, (d_ml - eps_d) / (d_ml - d_mh), 1.0)
    theta_d = np.clip(np.minimum(th_p, th_m), 0.0, 1.0)

    fd = high.copy()
    fd[..., 0] = (1.0 - theta_d) * low[..., 0] + theta_d * high[..., 0]

    plus_d = u_m - c * fd
    minus_d = u_p + c * fd
    q_pd = state.q_value(plus_d)
    q_md = state.q_value(minus_d)
    with np.errstate(divide="ignore", invalid="ignore"):
        tq_p = np.where(q_pd < eps_q, (q_pl - eps_q) / (q_pl - q_pd), 1.0)
        tq_m = np.where(q_md < eps_q, (q_ml - eps_q) / (q_ml - q_md), 1.0)
    theta_q = np.clip(np.minimum(tq_p, tq_m), 0.0, 1.0)

    fpcp = (1.0 - theta_q)[..., None] * low + theta_q[..., None] * fd
    return fpcp, theta_d, theta_q


def _euler_stage(fld, dt, alpha, pcp, mode, rule, stage):
    """One forward-Euler building block; returns (new interior U, diagnostics)."""
    fld.fill_ghosts()
    points = reconstruction.reconstruct_quadrature_states(fld, rule, mode)
    g = fld.ng
    nx, ny = fld.mesh.nx, fld.mesh.ny
    scal_d = scal_q = scal = 0.0
    if pcp:
        avgs = fld.cons[g - 1:nx + g + 1, g - 1:ny + g + 1]
        points, th_d, th_q = reconstruction.scaling_pcp_limit(
            points, avgs, SCALING_EPS_D, SCALING_EPS_Q)
        inner_d = th_d[1:-1, 1:-1]
        inner_q = th_q[1:-1, 1:-1]
        scal_d = float(np.count_nonzero(inner_d < 1.0)) / inner_d.size
        scal_q = float(np.count_nonzero(inner_q < 1.0)) / inner_q.size
        scal = float(np.count_nonzero((inner_d < 1.0) | (inner_q < 1.0))) / inner_d.size

    prim_points = _recover_ring(points, fld.eos, pcp, stage)
    fhigh, ghigh, ndeg = high_order_edge_fluxes(fld, points, prim_points, alpha)

    flux_d = flux_q = flux = 0.0
    if pcp:
        flow, glow = _low_order_fluxes(fld)
        fhat, ghat, (flux_d, flux_q, flux) = pcp_flux_limiter(
            fhigh, ghigh, flow, glow, fld, dt)
    else:
        fhat, ghat = fhigh, ghigh

    u_new = (fld.interior_cons
             - dt / fld.mesh.dx * (fhat[1:] - fhat[:-1])
             - dt / fld.mesh.dy * (ghat[:, 1:] - ghat[:, :-1]))
    D = u_new[..., 0]
    q = state.q_value(u_new)
    if (D <= 0.0).any() or (q <= 0.0).any():
        key = np.minimum(D, q)
        cell = np.unravel_index(np.argmin(key), key.shape)
        exc = InvariantViolation if pcp else PCPViolationError
        raise exc(
            f"inadmissible average at cell {tuple(int(t) for t in cell)} "
            f"after stage {stage}: D={D.min():.3e}, q={q.min():.3e}")
    stats = LimiterStats(scal_d, scal_q, scal, flux_d, flux_q, flux)
    return u_new, stats, ndeg


def step_ssp_rk3(fld, dt, alpha=2.0, pcp=True, mode="characteristic", rule=None):
    """Three-stage SSP Runge-Kutta step; each stage reruns the full limiter
    pipeline.  Returns (new field, StepStats, LimiterStats averaged over
    stages)."""
    if rule is None:
        rule = reconstruction.gauss_lobatto_rule(4)

    u1, s1, nd1 = _euler_stage(fld, dt, alpha, pcp, mode, rule, stage=0)
    f1 = fld.with_interior(u1)

    u2, s2, nd2 = _euler_stage(f1, dt, alpha, pcp, mode, rule, stage=1)
    f2 = fld.with_interior(0.75 * fld.interior_cons + 0.25 * u2)

    u3, s3, nd3 = _euler_stage(f2, dt, alpha, pcp, mode, rule, stage=2)
    out = fld.with_interior(fld.interior_cons / 3.0 + 2.0 / 3.0 * u3)

    lim = s1.averaged_with(s2, s3)
    stats = StepStats(dt=float(dt),
                      min_density=float(out.interior_prim[..., 0].min()),
                      min_q=float(state.q_value(out.interior_cons).min()),
                      degenerate_corners=int(nd1 + nd2 + nd3))
    return out, stats, lim

"""Fifth-order WENO reconstruction at edge quadrature points with limiting.

Point values are built dimension-by-dimension: a y-sweep turns cell
averages into line averages at the y-quadrature nodes of every cell, then
an x-sweep turns each line family into point values at the x-nodes.  Edge
endpoint values use the classical interface weights; the interior
Gauss-Lobatto nodes use exact point-specific ideal weights (all positive
at the K = 4 nodes), so the whole edge quadrature is genuinely fifth-order
for smooth data.

Reconstruction runs either on conserved components directly or on local
characteristic variables; the characteristic basis is evaluated at the
arithmetic mean of the edge-adjacent cell primitives (interface nodes) or
at the cell's own primitive (interior nodes).

The scaling limiter pulls the reconstructed points of a cell toward its
average until the mass density and q floors hold; that is an affine map
about the average, so any quadrature that reproduced the average still
does afterwards.
"""

from dataclasses import dataclass

import numpy as np

from . import backend, state
from .errors import AdmissibilityError, ConfigError
from .state import Axis

WENO_EPS = 1e-6

_SQRT5 = np.sqrt(5.0)

# Gauss-Lobatto nodes/weights on [-1/2, 1/2], normalised to unit total.
_GL_TABLES = {
    2: (np.array([-0.5, 0.5]), np.array([0.5, 0.5])),
    3: (np.array([-0.5, 0.0, 0.5]), np.array([1.0, 4.0, 1.0]) / 6.0),
    4: (np.array([-0.5, -0.5 / _SQRT5, 0.5 / _SQRT5, 0.5]),
        np.array([1.0, 5.0, 5.0, 1.0]) / 12.0),
}


@dataclass(frozen=True)
class GaussLobattoRule:
    """Edge quadrature whose endpoints coincide with the cell corners."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ConfigError("nodes and weights must be 1D and matched")
        if not np.allclose(self.weights.sum(), 1.0, atol=1e-14):
            raise ConfigError("quadrature weights must sum to 1")
        if not (np.allclose(self.nodes, -self.nodes[::-1])
                and np.allclose(self.weights, self.weights[::-1])):
            raise ConfigError("rule must be symmetric")

    @property
    def k(self):
        return len(self.nodes)


def gauss_lobatto_rule(k=4):
    if k not in _GL_TABLES:
        raise ConfigError(f"no Gauss-Lobatto table for k={k}")
    nodes, weights = _GL_TABLES[k]
    return GaussLobattoRule(nodes.copy(), weights.copy())


def _candidate_rows(xi):
    """Evaluation coefficients of the three stencil quadratics at xi."""
    x2 = xi * xi
    return np.array([
        [x2 / 2 + xi / 2 - 1 / 24, -x2 - 2 * xi + 1 / 12, x2 / 2 + 3 * xi / 2 + 23 / 24, 0.0, 0.0],
        [0.0, x2 / 2 - xi / 2 - 1 / 24, -x2 + 13 / 12, x2 / 2 + xi / 2 - 1 / 24, 0.0],
        [0.0, 0.0, x2 / 2 - 3 * xi / 2 + 23 / 24, -x2 + 2 * xi + 1 / 12, x2 / 2 - xi / 2 - 1 / 24],
    ])


def _ideal_weights(xi):
    """Exact point-specific ideal weights; the fifth-degree reconstruction
    equals the ideal-weight combination of the quadratics at every xi away
    from the two rational poles."""
    x2 = xi * xi
    d0 = (80 * x2 * x2 - 160 * xi * x2 - 120 * x2 + 200 * xi + 9) / (960 * x2 + 960 * xi - 80)
    d1 = (-960 * x2 ** 3 + 5360 * x2 * x2 - 4548 * x2 + 49) / (5760 * x2 * x2 - 6720 * x2 + 40)
    d2 = (80 * x2 * x2 + 160 * xi * x2 - 120 * x2 - 200 * xi + 9) / (960 * x2 - 960 * xi - 80)
    return np.array([d0, d1, d2])


def weno5_tables(nodes):
    """(cmat, dvec) evaluation tables for `nodes`; weights must be positive."""
    nodes = np.atleast_1d(np.asarray(nodes, dtype=float))
    cmat = np.stack([_candidate_rows(x) for x in nodes])
    dvec = np.stack([_ideal_weights(x) for x in nodes])
    if np.any(dvec <= 0.0):
        raise ConfigError(f"ideal weights not positive at nodes {nodes}")
    if not np.allclose(dvec.sum(axis=1), 1.0, atol=1e-12):
        raise ConfigError("ideal weights failed to normalise")
    return cmat, dvec


_EDGE_TABLES = weno5_tables([-0.5, 0.5])
_GL4_INTERIOR_TABLES = weno5_tables([-0.5 / _SQRT5, 0.5 / _SQRT5])


def weno5_line(stencil, eps=WENO_EPS):
    """Left/right interface values of the center cell of a 5-cell stencil."""
    stencil = np.asarray(stencil, dtype=float)
    flat = np.ascontiguousarray(stencil.reshape(-1, 5))
    vals = backend.weno5_multi(flat, *_EDGE_TABLES, eps)
    out = vals.reshape(stencil.shape[:-1] + (2,))
    return out[..., 0], out[..., 1]


def weno5_at(stencil, nodes, eps=WENO_EPS):
    """WENO values of the center cell at arbitrary reference nodes."""
    stencil = np.asarray(stencil, dtype=float)
    cmat, dvec = weno5_tables(nodes)
    flat = np.ascontiguousarray(stencil.reshape(-1, 5))
    vals = backend.weno5_multi(flat, cmat, dvec, eps)
    return vals.reshape(stencil.shape[:-1] + (len(np.atleast_1d(nodes)),))


def right_eigenvectors(prim, eos, axis):
    """Right eigenvector matrix of the flux Jacobian along `axis`.

    Columns are ordered (lam1, lam2, lam3, lam4).  Conserved basis
    (D, mx, my, E); the y matrix is the x matrix of the velocity-swapped
    state with the momentum rows swapped.
    """
    prim = np.asarray(prim, dtype=float)
    if axis == Axis.Y:
        swapped = prim[..., [0, 2, 1, 3]]
        r = right_eigenvectors(swapped, eos, Axis.X)
        return r[..., [0, 2, 1, 3], :]
    rho = prim[..., 0]
    un = prim[..., 1]
    ut = prim[..., 2]
    p = prim[..., 3]
    g = eos.gamma
    h = 1.0 + g * p / ((g - 1.0) * rho)
    cs2 = g * p / (rho * h)
    v2 = un * un + ut * ut
    w = 1.0 / np.sqrt(1.0 - v2)
    kappa = (g - 1.0) / (g - 1.0 - cs2)
    lam1, _, lam4 = state.eigenvalues(prim, eos, Axis.X)
    a_m = (1.0 - un * un) / (1.0 - un * lam1)
    a_p = (1.0 - un * un) / (1.0 - un * lam4)
    hw = h * w
    out = np.empty(prim.shape[:-1] + (4, 4))
    # acoustic minus
    out[..., 0, 0] = 1.0
    out[..., 1, 0] = hw * a_m * lam1
    out[..., 2, 0] = hw * ut
    out[..., 3, 0] = hw * a_m
    # material wave
    out[..., 0, 1] = kappa / hw
    out[..., 1, 1] = un
    out[..., 2, 1] = ut
    out[..., 3, 1] = 1.0
    # shear wave
    out[..., 0, 2] = w * ut
    out[..., 1, 2] = 2.0 * h * w * w * un * ut
    out[..., 2, 2] = h * (1.0 + 2.0 * w * w * ut * ut)
    out[..., 3, 2] = 2.0 * h * w * w * ut
    # acoustic plus
    out[..., 0, 3] = 1.0
    out[..., 1, 3] = hw * a_p * lam4
    out[..., 2, 3] = hw * ut
    out[..., 3, 3] = hw * a_p
    return out


# node-index pairs (a, b) of the populated quadrature ring for K = 4,
# fixed storage order shared by reconstruction, limiter and flux assembly
RING4 = ((0, 0), (0, 1), (0, 2), (0, 3),
         (3, 0), (3, 1), (3, 2), (3, 3),
         (1, 0), (2, 0), (1, 3), (2, 3))
_RING4_INDEX = {ab: i for i, ab in enumerate(RING4)}


@dataclass
class CellPointValues:
    """Reconstructed conserved states on the edge-quadrature ring of cells.

    ring[ii, jj, r] is the state of cell (ii - 1, jj - 1) at tensor node
    RING4[r] = (a, b), meaning (x-node a, y-node b); interior tensor nodes
    never feed a flux and are not stored.  The cell range includes a
    one-cell halo so every interface and corner of the interior sees
    values from both sides.
    """

    ring: np.ndarray
    rule: GaussLobattoRule

    def at(self, a, b):
        """View of the states at tensor node (a, b) over all cells."""
        return self.ring[:, :, _RING4_INDEX[(a, b)], :]


def _project(inv, vecs):
    """Apply per-site matrices to per-site stacks of state vectors."""
    return vecs @ np.swapaxes(inv, -1, -2)


def _weno_states(stencil_states, tables, eps, rmat=None, rinv=None):
    """WENO-evaluate stacked state stencils at the table nodes.

    stencil_states: (..., 5, 4); returns (..., P, 4).  When rmat/rinv are
    given the data is projected to characteristic variables first and the
    result projected back.
    """
    data = stencil_states if rinv is None else _project(rinv, stencil_states)
    lead = data.shape[:-2]
    comp_first = np.moveaxis(data, -1, -2)  # (..., 4, 5)
    flat = np.ascontiguousarray(comp_first.reshape(-1, 5))
    cmat, dvec = tables
    vals = backend.weno5_multi(flat, cmat, dvec, eps)
    p = cmat.shape[0]
    vals = vals.reshape(lead + (4, p))
    vals = np.moveaxis(vals, -2, -1)  # (..., P, 4)
    if rmat is not None:
        vals = vals @ np.swapaxes(rmat, -1, -2)
    return vals


def reconstruct_quadrature_states(fld, rule=None, mode="characteristic",
                                  eps=WENO_EPS):
    """Per-cell point values at the edge quadrature nodes (with halo).

    Ghosts must be filled.  Returns CellPointValues covering cells
    -1..nx and -1..ny.  mode is 'characteristic' or 'componentwise'.
    """
    if rule is None:
        rule = gauss_lobatto_rule(4)
    k = rule.k
    if k != 4:
        raise ConfigError("reconstruction supports the K=4 Gauss-Lobatto rule")
    if mode not in ("characteristic", "componentwise"):
        raise ConfigError(f"unknown reconstruction mode {mode!r}")
    char = mode == "characteristic"
    interior_tables = _GL4_INTERIOR_TABLES
    edge_lo = weno5_tables([-0.5])
    edge_hi = weno5_tables([0.5])

    g = fld.ng
    if g < 3:
        raise ConfigError("fifth-order reconstruction needs 3 ghost layers")
    nx, ny = fld.mesh.nx, fld.mesh.ny
    U, V = fld.cons, fld.prim
    nxa = U.shape[0]          # all ghosted columns take part in the y-sweep
    nyh = ny + 2              # halo cell rows j = -1..ny
    jg0 = g - 1               # ghosted index of cell j = -1
    eos = fld.eos

    # ---- pass 1: y-direction sweep to line averages ----------------------
    sten_y = np.empty((nxa, nyh, 5, 4))
    for c in range(5):
        sten_y[:, :, c, :] = U[:, jg0 - 2 + c: jg0 - 2 + c + nyh, :]

    if char:
        # interface states at y-interfaces j-1/2 for j = -1..ny+1
        vlo = V[:, jg0 - 1: jg0 - 1 + nyh + 1, :]
        vhi = V[:, jg0: jg0 + nyh + 1, :]
        r_int = right_eigenvectors(0.5 * (vlo + vhi), eos, Axis.Y)
        rinv_int = np.linalg.inv(r_int)
        r_cell = right_eigenvectors(V[:, jg0: jg0 + nyh, :], eos, Axis.Y)
        rinv_cell = np.linalg.inv(r_cell)
        bot = _weno_states(sten_y, edge_lo, eps, r_int[:, :-1], rinv_int[:, :-1])
        top = _weno_states(sten_y, edge_hi, eps, r_int[:, 1:], rinv_int[:, 1:])
        mid = _weno_states(sten_y, interior_tables, eps, r_cell, rinv_cell)
    else:
        bot = _weno_states(sten_y, edge_lo, eps)
        top = _weno_states(sten_y, edge_hi, eps)
        mid = _weno_states(sten_y, interior_tables, eps)
    lines = np.concatenate([bot, mid, top], axis=2)  # (nxa, nyh, K, 4)

    # ---- pass 2: x-direction sweep of each line family -------------------
    nxh = nx + 2
    ig0 = g - 1
    ring = np.empty((nxh, nyh, len(RING4), 4))
    out = CellPointValues(ring, rule)

    if char:
        vlo = V[ig0 - 1: ig0 - 1 + nxh + 1, jg0: jg0 + nyh, :]
        vhi = V[ig0: ig0 + nxh + 1, jg0: jg0 + nyh, :]
        rx_int = right_eigenvectors(0.5 * (vlo + vhi), eos, Axis.X)
        rxinv_int = np.linalg.inv(rx_int)
        rx_cell = right_eigenvectors(V[ig0: ig0 + nxh, jg0: jg0 + nyh, :], eos, Axis.X)
        rxinv_cell = np.linalg.inv(rx_cell)

    sten_x = np.empty((nxh, nyh, 5, 4))
    for b in range(k):
        for c in range(5):
            sten_x[:, :, c, :] = lines[ig0 - 2 + c: ig0 - 2 + c + nxh, :, b, :]
        if char:
            left = _weno_states(sten_x, edge_lo, eps, rx_int[:-1], rxinv_int[:-1])
            right = _weno_states(sten_x, edge_hi, eps, rx_int[1:], rxinv_int[1:])
        else:
            left = _weno_states(sten_x, edge_lo, eps)
            right = _weno_states(sten_x, edge_hi, eps)
        out.at(0, b)[...] = left[:, :, 0, :]
        out.at(k - 1, b)[...] = right[:, :, 0, :]
        if b in (0, k - 1):
            if char:
                mid = _weno_states(sten_x, interior_tables, eps, rx_cell, rxinv_cell)
            else:
                mid = _weno_states(sten_x, interior_tables, eps)
            out.at(1, b)[...] = mid[:, :, 0, :]
            out.at(2, b)[...] = mid[:, :, 1, :]

    return out


def scaling_pcp_limit(point_values, averages, eps_d=1e-13, eps_q=1e-13):
    """Pull cell point values toward the cell average onto the floors.

    Two affine stages sharing the form avg + theta * (point - avg): first a
    density stage enforcing D >= eps_d, then a q stage on the corrected
    points (q is concave, so one linear factor suffices).  Averages must
    already satisfy the floors.  Returns (limited CellPointValues,
    theta_d, theta_q) with the theta arrays shaped like the cell grid.
    """
    pts = point_values.ring
    avg = np.asarray(averages, dtype=float)
    if avg.shape != pts.shape[:2] + (4,):
        raise ConfigError("averages must cover the same cell range as the points")

    d_avg = avg[..., 0]
    q_avg = state.q_value(avg)
    if np.any(d_avg < eps_d) or np.any(q_avg < eps_q):
        raise AdmissibilityError("cell averages violate the limiter floors")

    d_min = pts[..., 0].min(axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (d_avg - eps_d) / (d_avg - d_min)
    theta_d = np.where(d_min < eps_d, ratio, 1.0)
    theta_d = np.clip(theta_d, 0.0, 1.0)
    avg_b = avg[:, :, None, :]
    limited = avg_b + theta_d[..., None, None] * (pts - avg_b)

    q_min = state.q_value(limited).min(axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (q_avg - eps_q) / (q_avg - q_min)
    theta_q = np.where(q_min < eps_q, ratio, 1.0)
    theta_q = np.clip(theta_q, 0.0, 1.0)
    limited = avg_b + theta_q[..., None, None] * (limited - avg_b)

    return CellPointValues(limited, point_values.rule), theta_d, theta_q

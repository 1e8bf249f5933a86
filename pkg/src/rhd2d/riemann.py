"""Approximate Riemann solvers: 1D HLL and the corner-coupled 2D HLL.

The 2D solver takes the four constant states around a mesh corner and
returns a single intermediate state plus transverse-corrected interface
fluxes.  Wave-speed estimates carry an amplification factor `alpha`: 1 is
the plain estimate, 2 makes the intermediate states provably admissible
(this is exercised wholesale by the property suite rather than re-proved
here).

Scalar and batched use both work: the dataclasses hold arrays whose last
axis is the state component.
"""

from dataclasses import dataclass

import numpy as np

from . import backend, state
from .errors import AdmissibilityError, ContractViolation
from .state import Axis


@dataclass(frozen=True)
class StatePair:
    """A conserved state with its recovered primitive cached alongside."""

    cons: np.ndarray
    prim: np.ndarray

    @classmethod
    def from_primitive(cls, prim, eos):
        prim = np.asarray(prim, dtype=float)
        return cls(state.conserved_from_primitive(prim, eos), prim)

    @classmethod
    def from_conserved(cls, cons, eos):
        cons = np.asarray(cons, dtype=float)
        return cls(cons, state.recover_primitive(cons, eos))


@dataclass(frozen=True)
class Quadruple:
    """Quadrant states around a corner: left/right x down/up."""

    ld: StatePair
    lu: StatePair
    rd: StatePair
    ru: StatePair

    def validate(self):
        for s in (self.ld, self.lu, self.rd, self.ru):
            if not np.all(state.is_admissible(s.cons)):
                raise AdmissibilityError("quadrant state is not admissible")


@dataclass(frozen=True)
class WaveFan2D:
    """Directional extreme wave speeds of a corner fan."""

    s_l: np.ndarray
    s_r: np.ndarray
    s_d: np.ndarray
    s_u: np.ndarray

    @property
    def straddles_x(self):
        return (self.s_l < 0.0) & (self.s_r > 0.0)

    @property
    def straddles_y(self):
        return (self.s_d < 0.0) & (self.s_u > 0.0)


def wave_speeds_1d(left, right, eos, axis, alpha=1.0):
    """Extreme speeds of a two-state fan along `axis`, amplified by alpha."""
    if alpha < 1.0:
        raise ContractViolation(f"alpha must be >= 1, got {alpha}")
    for s in (left, right):
        if not np.all(state.is_admissible(s.cons)):
            raise AdmissibilityError("input state is not admissible")
    return backend.pair_speeds(left.prim, right.prim, eos.gamma, int(axis), alpha)


def wave_fan_2d(quad, eos, alpha=1.0):
    """Directional extreme speeds over the four quadrant states."""
    if alpha < 1.0:
        raise ContractViolation(f"alpha must be >= 1, got {alpha}")
    quad.validate()
    prims = [quad.ld.prim, quad.lu.prim, quad.rd.prim, quad.ru.prim]
    l1 = [state.eigenvalues(p, eos, Axis.X) for p in prims]
    l2 = [state.eigenvalues(p, eos, Axis.Y) for p in prims]
    s_l = alpha * np.minimum.reduce([t[0] for t in l1])
    s_r = alpha * np.maximum.reduce([t[2] for t in l1])
    s_d = alpha * np.minimum.reduce([t[0] for t in l2])
    s_u = alpha * np.maximum.reduce([t[2] for t in l2])
    return WaveFan2D(s_l, s_r, s_d, s_u)


def hll1d_flux(left, right, eos, axis, speeds):
    """HLL interface flux along `axis` with the given (s_min, s_max).

    Sign-clipped form: returns the left (right) physical flux when both
    speeds are nonnegative (nonpositive).
    """
    s_min, s_max = speeds
    fl = state.physical_flux(left.prim, left.cons, axis)
    fr = state.physical_flux(right.prim, right.cons, axis)
    bm = np.minimum(np.asarray(s_min, dtype=float), 0.0)[..., None]
    bp = np.maximum(np.asarray(s_max, dtype=float), 0.0)[..., None]
    return (bp * fl - bm * fr + bp * bm * (right.cons - left.cons)) / (bp - bm)


def hll1d_state(left, right, eos, axis, speeds):
    """Single intermediate state of the two-state fan; needs s_min < 0 < s_max."""
    s_min, s_max = np.asarray(speeds[0], dtype=float), np.asarray(speeds[1], dtype=float)
    if not np.all((s_min < 0.0) & (s_max > 0.0)):
        raise ContractViolation("1D intermediate state requires s_min < 0 < s_max")
    fl = state.physical_flux(left.prim, left.cons, axis)
    fr = state.physical_flux(right.prim, right.cons, axis)
    sl = s_min[..., None]
    sr = s_max[..., None]
    return (sr * right.cons - sl * left.cons + fl - fr) / (sr - sl)


def hll2d_state(quad, fan, eos):
    """Intermediate state of the corner fan; needs both directions straddling.

    One-signed fans belong to the 1D path: this operation refuses them.
    """
    if not np.all(fan.straddles_x & fan.straddles_y):
        raise ContractViolation(
            "corner intermediate state needs s_l < 0 < s_r and s_d < 0 < s_u; "
            "route one-signed fans to the 1D solver"
        )
    f = {k: state.physical_flux(getattr(quad, k).prim, getattr(quad, k).cons, Axis.X)
         for k in ("ld", "lu", "rd", "ru")}
    g = {k: state.physical_flux(getattr(quad, k).prim, getattr(quad, k).cons, Axis.Y)
         for k in ("ld", "lu", "rd", "ru")}
    s_l = np.asarray(fan.s_l, dtype=float)[..., None]
    s_r = np.asarray(fan.s_r, dtype=float)[..., None]
    s_d = np.asarray(fan.s_d, dtype=float)[..., None]
    s_u = np.asarray(fan.s_u, dtype=float)[..., None]
    num = (s_r * s_u * quad.ru.cons + s_l * s_d * quad.ld.cons
           - s_r * s_d * quad.rd.cons - s_l * s_u * quad.lu.cons
           - s_u * (f["ru"] - f["lu"]) + s_d * (f["rd"] - f["ld"])
           - s_r * (g["ru"] - g["rd"]) + s_l * (g["lu"] - g["ld"]))
    return num / ((s_r - s_l) * (s_u - s_d))


def hll2d_flux(quad, fan, eos, axis):
    """Corner flux along `axis`, valid for every fan sign pattern.

    Clipped speeds make the one-signed cases collapse to the matching
    upwind/1D expressions without branching.
    """
    del eos  # the formulas only consume the cached primitives
    return _hll2d_flux_from_fan(quad, fan, axis)


def _hll2d_flux_from_fan(quad, fan, axis):
    f = {k: state.physical_flux(getattr(quad, k).prim, getattr(quad, k).cons, Axis.X)
         for k in ("ld", "lu", "rd", "ru")}
    g = {k: state.physical_flux(getattr(quad, k).prim, getattr(quad, k).cons, Axis.Y)
         for k in ("ld", "lu", "rd", "ru")}
    slm = np.minimum(np.asarray(fan.s_l, dtype=float), 0.0)[..., None]
    srp = np.maximum(np.asarray(fan.s_r, dtype=float), 0.0)[..., None]
    sdm = np.minimum(np.asarray(fan.s_d, dtype=float), 0.0)[..., None]
    sup = np.maximum(np.asarray(fan.s_u, dtype=float), 0.0)[..., None]
    dx_inv = 1.0 / (srp - slm)
    dy_inv = 1.0 / (sup - sdm)
    if axis == Axis.X:
        fu = (srp * f["lu"] - slm * f["ru"] + slm * srp * (quad.ru.cons - quad.lu.cons)) * dx_inv
        fd = (srp * f["ld"] - slm * f["rd"] + slm * srp * (quad.rd.cons - quad.ld.cons)) * dx_inv
        dg = g["ru"] - g["rd"] - g["lu"] + g["ld"]
        return (sup * fu - sdm * fd - 2.0 * slm * srp * dx_inv * dg) * dy_inv
    gr = (sup * g["rd"] - sdm * g["ru"] + sdm * sup * (quad.ru.cons - quad.rd.cons)) * dy_inv
    gl = (sup * g["ld"] - sdm * g["lu"] + sdm * sup * (quad.lu.cons - quad.ld.cons)) * dy_inv
    df = f["ru"] - f["rd"] - f["lu"] + f["ld"]
    return (srp * gr - slm * gl - 2.0 * sdm * sup * dy_inv * df) * dx_inv

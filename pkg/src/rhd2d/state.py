"""State algebra for the ideal-gas special-relativistic Euler system.

Conserved variables U = (D, mx, my, E): lab-frame mass, momentum and total
energy densities.  Primitive variables V = (rho, u, v, p): rest-mass
density, velocity and pressure.  Units with c = 1; arrays carry the
component axis last, so every function broadcasts over leading axes.

A conserved state is admissible iff D > 0 and q(U) = E - |(D, m)| > 0,
which is equivalent to rho > 0, p > 0 and |u| < 1.  The admissible set is
convex, closed under positive scaling, and contains alpha*U - F(U) for any
alpha at or above the largest characteristic speed (and the mirrored
combination below the smallest); those facts are what the positivity proofs
of the schemes lean on, and the test-suite checks them by direct sampling.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import backend
from .errors import AdmissibilityError, ConfigError, NumericalError


class Axis(IntEnum):
    X = 0
    Y = 1


@dataclass(frozen=True)
class EosConfig:
    """Ideal-gas equation of state p = (gamma - 1) rho e."""

    gamma: float

    def __post_init__(self):
        if not 1.0 < self.gamma <= 2.0:
            raise ConfigError(f"adiabatic index must lie in (1, 2], got {self.gamma}")


def lorentz_factor(prim):
    v2 = prim[..., 1] ** 2 + prim[..., 2] ** 2
    return 1.0 / np.sqrt(1.0 - v2)


def specific_enthalpy(prim, eos):
    g = eos.gamma
    return 1.0 + g * prim[..., 3] / ((g - 1.0) * prim[..., 0])


def validate_primitive(prim):
    """Raise AdmissibilityError unless rho > 0, p > 0 and |u| < 1."""
    rho = prim[..., 0]
    p = prim[..., 3]
    v2 = prim[..., 1] ** 2 + prim[..., 2] ** 2
    bad = ~((rho > 0.0) & (p > 0.0) & (v2 < 1.0))
    if np.any(bad):
        raise AdmissibilityError(
            f"{int(np.count_nonzero(bad))} primitive state(s) violate "
            "rho > 0, p > 0, |u| < 1"
        )


def conserved_from_primitive(prim, eos, validate=True):
    """Map V = (rho, u, v, p) to U = (rho*W, rho*h*W^2*u, rho*h*W^2 - p)."""
    prim = np.asarray(prim, dtype=float)
    if validate:
        validate_primitive(prim)
    rho = prim[..., 0]
    u = prim[..., 1]
    v = prim[..., 2]
    p = prim[..., 3]
    w2 = 1.0 / (1.0 - u * u - v * v)
    w = np.sqrt(w2)
    rhw2 = rho * specific_enthalpy(prim, eos) * w2
    cons = np.empty_like(prim)
    cons[..., 0] = rho * w
    cons[..., 1] = rhw2 * u
    cons[..., 2] = rhw2 * v
    cons[..., 3] = rhw2 - p
    return cons


def recover_primitive(cons, eos, tol=1e-13, max_iter=200, validate=True):
    """Invert conserved_from_primitive by solving the pressure equation.

    The root of E + p = D*W(p) + gamma/(gamma-1)*p*W(p)^2 is bracketed by
    (max(0, |m| - E), (gamma-1)*E) and found by safeguarded Newton; the
    residual is driven below tol*E.  Raises AdmissibilityError for
    inadmissible input and NumericalError if the iteration cap is hit.
    """
    cons = np.asarray(cons, dtype=float)
    if validate and not np.all(is_admissible(cons)):
        n = int(np.count_nonzero(~is_admissible(cons)))
        raise AdmissibilityError(f"{n} conserved state(s) are inadmissible")
    flat = np.ascontiguousarray(cons.reshape(-1, 4))
    prim, bad = backend.recover_primitive(flat, eos.gamma, tol, int(max_iter))
    if bad:
        raise NumericalError(
            f"pressure iteration failed to converge for {bad} state(s) "
            f"within {max_iter} iterations"
        )
    return prim.reshape(cons.shape)


def physical_flux(prim, cons, axis):
    """Flux vector along `axis` for a consistent (prim, cons) pair."""
    prim = np.asarray(prim, dtype=float)
    cons = np.asarray(cons, dtype=float)
    un = prim[..., 1 + int(axis)]
    p = prim[..., 3]
    out = np.empty_like(cons)
    out[..., 0] = cons[..., 0] * un
    out[..., 1] = cons[..., 1] * un
    out[..., 2] = cons[..., 2] * un
    out[..., 1 + int(axis)] += p
    out[..., 3] = (cons[..., 3] + p) * un
    return out


def sound_speed(prim, eos):
    """c_s = sqrt(gamma p / (rho h)); always below sqrt(gamma - 1)."""
    prim = np.asarray(prim, dtype=float)
    return np.sqrt(eos.gamma * prim[..., 3] / (prim[..., 0] * specific_enthalpy(prim, eos)))


def eigenvalues(prim, eos, axis):
    """Characteristic speeds (lam1, lam2, lam4) along `axis`, ordered."""
    prim = np.asarray(prim, dtype=float)
    rho = prim[..., 0]
    u = prim[..., 1]
    v = prim[..., 2]
    p = prim[..., 3]
    un = prim[..., 1 + int(axis)]
    v2 = u * u + v * v
    h = specific_enthalpy(prim, eos)
    cs2 = eos.gamma * p / (rho * h)
    cs = np.sqrt(cs2)
    ginv = np.sqrt(1.0 - v2)
    disc = np.sqrt(1.0 - un * un - cs2 * (v2 - un * un))
    den = 1.0 - cs2 * v2
    lam1 = (un * (1.0 - cs2) - cs * ginv * disc) / den
    lam4 = (un * (1.0 - cs2) + cs * ginv * disc) / den
    return lam1, un, lam4


def spectral_radius(prim, eos, axis):
    lam1, _, lam4 = eigenvalues(prim, eos, axis)
    return np.maximum(np.abs(lam1), np.abs(lam4))


def q_value(cons):
    """q(U) = E - sqrt(D^2 + |m|^2); concave, positive iff admissible with D."""
    cons = np.asarray(cons, dtype=float)
    D = cons[..., 0]
    mx = cons[..., 1]
    my = cons[..., 2]
    return cons[..., 3] - np.sqrt(D * D + mx * mx + my * my)


def is_admissible(cons):
    cons = np.asarray(cons, dtype=float)
    return (cons[..., 0] > 0.0) & (q_value(cons) > 0.0)

"""Free Majorana particle on a ring of length L (periodic boundary condition).

Also hosts the two one-parameter families of non-confining wall conditions
Psi(L) = M Psi(0), of which the periodic condition is one member.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Union

import numpy as np

from .core import (
    NORM_TOL,
    SIGMA_0,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ConfiningBC,
    ModeExpansion,
    PhysicsParams,
    SpinorField,
    check_half_norm,
)


@dataclass(frozen=True)
class MomentumLabel:
    """Lattice momentum p = hbar 2 pi n / L and its energy sqrt((cp)^2 + (mc^2)^2)."""

    n: int
    p: float
    E: float


def momentum_label(n: int, params: PhysicsParams) -> MomentumLabel:
    p = params.hbar * 2.0 * math.pi * n / params.L
    return MomentumLabel(int(n), p, math.hypot(params.c * p, params.rest_energy))


def periodic_spectrum(params: PhysicsParams, n_max: int) -> list[MomentumLabel]:
    """Labels n = 0, +-1, ..., +-n_max ordered by energy, then by n."""
    labels = [momentum_label(n, params) for n in range(-n_max, n_max + 1)]
    return sorted(labels, key=lambda lab: (abs(lab.n), lab.n))


def _as_label(label: Union[int, MomentumLabel], params: PhysicsParams) -> MomentumLabel:
    return label if isinstance(label, MomentumLabel) else momentum_label(label, params)


def plane_eigenstate(label: Union[int, MomentumLabel], sign: int, params: PhysicsParams,
                     grid) -> SpinorField:
    """sqrt(1/2L) [1, +-i E/(i c p + m c^2)] exp(i p x / hbar).

    The negative-energy state is the charge conjugate of the positive-energy
    state with momentum -p.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lab = _as_label(label, params)
    if lab.E == 0:
        raise ValueError("the massless p = 0 mode has no spinor of this form")
    grid = np.asarray(grid, dtype=float)
    # Keep the phase exactly 2 pi n at x = L so the endpoints coincide.
    wave = np.exp(2j * math.pi * lab.n * (grid / params.L))
    lower = sign * 1j * lab.E / (1j * params.c * lab.p + params.rest_energy)
    amp = math.sqrt(1.0 / (2.0 * params.L))
    return SpinorField.from_components(grid, amp * wave, amp * lower * wave)


def classical_velocity_eigenvalue(label: Union[int, MomentumLabel], sign: int,
                                  params: PhysicsParams) -> float:
    """+-c^2 p / E_p for the positive/negative-energy plane wave."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lab = _as_label(label, params)
    if lab.E == 0:
        raise ValueError("classical velocity undefined for E = 0 (m = 0, n = 0)")
    return sign * params.c**2 * lab.p / lab.E


@dataclass(frozen=True, eq=False)
class PeriodicPacket:
    """sum_n [c_n psi_n(+) + exp(i theta) c.c.] with sum |c_n|^2 = 1/2."""

    coeffs: Mapping[int, complex]
    params: PhysicsParams
    grid: np.ndarray
    theta: float = 0.0
    expansion: ModeExpansion = field(init=False, repr=False)

    def __post_init__(self):
        coeffs = {int(n): complex(c) for n, c in sorted(self.coeffs.items())}
        check_half_norm(sum(abs(c) ** 2 for c in coeffs.values()), what="sum |c_p|^2")
        grid = np.asarray(self.grid, dtype=float)
        labels = [momentum_label(n, self.params) for n in coeffs]
        modes = np.stack([plane_eigenstate(lab, 1, self.params, grid).values for lab in labels])
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "expansion", ModeExpansion(
            grid=grid, modes=modes, coeffs=np.array(list(coeffs.values())),
            energies=np.array([lab.E for lab in labels]),
            hbar=self.params.hbar, theta=float(self.theta)))


def build_periodic_packet(coeffs: Mapping[int, complex], theta: float, params: PhysicsParams,
                          grid, rescale: bool = False) -> tuple[PeriodicPacket, SpinorField]:
    """Assemble a real (up to exp(i theta/2)) packet and its t = 0 field.

    With ``rescale=True`` the coefficients are scaled to sum |c|^2 = 1/2
    instead of being rejected.
    """
    if not coeffs:
        raise ValueError("at least one coefficient is required")
    if rescale:
        total = sum(abs(complex(c)) ** 2 for c in coeffs.values())
        if total == 0:
            raise ValueError("all coefficients are zero")
        scale = math.sqrt(0.5 / total)
        coeffs = {n: complex(c) * scale for n, c in coeffs.items()}
    packet = PeriodicPacket(coeffs, params, grid, theta)
    return packet, packet.expansion.field(0.0)


def evolve_periodic(packet: PeriodicPacket, t: float, time_derivative: int = 0) -> SpinorField:
    return packet.expansion.field(t, time_derivative)


# ---------------------------------------------------------------------------
# Non-confining boundary-condition families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BCFamily:
    """Psi(L) = M Psi(0) for one of the two one-parameter families.

    ``"sigma_x"`` family: M = -(i a sigma_y + sigma_x) / b with a^2 + b^2 = 1.
    ``"diagonal"`` family: M = (b sigma_z + 1) / a with a^2 + b^2 = 1.

    For the first family (a, b) = (m0, m2); for the second (a, b) = (m1, m3).
    The parameter dividing M must be non-zero.
    """

    family: Literal["sigma_x", "diagonal"]
    a: float
    b: float

    def __post_init__(self):
        if self.family not in ("sigma_x", "diagonal"):
            raise ValueError(f"unknown family {self.family!r}")
        if abs(self.a**2 + self.b**2 - 1.0) > NORM_TOL:
            raise ValueError(f"parameters must satisfy a^2 + b^2 = 1, got {self.a**2 + self.b**2!r}")
        divisor = self.b if self.family == "sigma_x" else self.a
        if divisor == 0:
            raise ValueError("the dividing parameter is zero: this limit is a confining wall, "
                             "use confining_limit()")


def bc_matrix(fam: BCFamily) -> np.ndarray:
    """Matrix M with Psi(L) = M Psi(0); real for both families."""
    if fam.family == "sigma_x":
        m0, m2 = fam.a, fam.b
        M = -(1j * m0 * SIGMA_Y + SIGMA_X) / m2
    else:
        m1, m3 = fam.a, fam.b
        M = (m3 * SIGMA_Z + SIGMA_0) / m1
    return M.real.copy()


def confining_limit(family: Literal["sigma_x", "diagonal"], sign: int) -> ConfiningBC:
    """Wall condition reached when the dividing parameter tends to zero.

    In the sigma_x family with m2 -> 0 and m0 = +1 (-1) the lower (upper)
    component vanishes at both ends; in the diagonal family with m1 -> 0 and
    m3 = +1 (-1) the walls become the two mixed conditions.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    table = {
        ("sigma_x", 1): ConfiningBC.DIRICHLET_LOWER,
        ("sigma_x", -1): ConfiningBC.DIRICHLET_UPPER,
        ("diagonal", 1): ConfiningBC.MIXED_A,
        ("diagonal", -1): ConfiningBC.MIXED_B,
    }
    try:
        return table[(family, sign)]
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


PERIODIC_FAMILY = BCFamily("diagonal", 1.0, 0.0)

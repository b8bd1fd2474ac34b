"""Majorana particle at rest in a box (no potential, zero momentum).

The two eigenstates are constant spinors with energies +-m c^2, and the
real solution rotates rigidly in the (phi1, phi2) plane at frequency
omega = m c^2 / hbar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    NORM_TOL,
    ModeExpansion,
    PhysicsParams,
    SpinorField,
)


def rest_eigenstates(params: PhysicsParams, grid) -> tuple[SpinorField, SpinorField]:
    """Constant eigenstates sqrt(1/2L) [1, +-i] with energies +-m c^2."""
    grid = np.asarray(grid, dtype=float)
    amp = math.sqrt(1.0 / (2.0 * params.L))
    plus = SpinorField.from_components(grid, amp, 1j * amp)
    minus = SpinorField.from_components(grid, amp, -1j * amp)
    return plus, minus


def rest_spinor() -> np.ndarray:
    """u(0) = [1, i] / sqrt(2), normalized in C^2."""
    return np.array([1.0, 1.0j]) / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class RestPacket:
    """Real state c psi0(+) + exp(i theta) c.c. with |c| = 1/sqrt(2)."""

    params: PhysicsParams
    grid: np.ndarray
    c_plus: complex = 1.0 / math.sqrt(2.0)
    theta: float = 0.0
    expansion: ModeExpansion = field(init=False, repr=False)

    def __post_init__(self):
        if abs(abs(self.c_plus) - 1.0 / math.sqrt(2.0)) > NORM_TOL:
            raise ValueError(f"|c_plus| must be 1/sqrt(2), got {abs(self.c_plus)!r}")
        grid = np.asarray(self.grid, dtype=float)
        plus, _ = rest_eigenstates(self.params, grid)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "expansion", ModeExpansion(
            grid=grid,
            modes=plus.values[None],
            coeffs=np.array([complex(self.c_plus)]),
            energies=np.array([self.params.rest_energy]),
            hbar=self.params.hbar,
            theta=float(self.theta),
        ))

    def initial_field(self) -> SpinorField:
        return self.expansion.field(0.0)


def rest_evolve(packet: RestPacket, t: float, time_derivative: int = 0) -> SpinorField:
    """Closed-form state at time t (or its first/second time derivative)."""
    return packet.expansion.field(t, time_derivative)


def rotation_matrix(params: PhysicsParams, t: float) -> np.ndarray:
    """exp(-i omega t sigma_y), a real rotation by angle omega t."""
    wt = params.omega * t
    return np.array([[math.cos(wt), -math.sin(wt)], [math.sin(wt), math.cos(wt)]])


def rotate(psi0: SpinorField, params: PhysicsParams, t: float) -> SpinorField:
    """Propagate any rest-frame state by the rotation matrix."""
    return psi0.apply_matrix(rotation_matrix(params, t))

"""Majorana particle in the linear scalar potential S(x) = k x on the whole line.

With kappa = k/(hbar c), x0 = m c^2/k and y = sqrt(kappa) (x + x0):

* zero mode       psi_0    = a_0 [0, 1] exp(-y^2/2),                 E = 0
* excited levels  psi_N(+) = a_N [-i sqrt(2N) H_{N-1}(y), H_N(y)] exp(-y^2/2),
                  psi_N(-) = sigma_z psi_N(+),                         E = +-sqrt(2 hbar c k N)

The whole line is truncated to [-x0 - R, -x0 + R]; see
``PhysicsParams.linear_domain``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import (
    NORM_TOL,
    SIGMA_Z,
    ModeExpansion,
    PhysicsParams,
    SpinorField,
    charge_conjugate,
    inner_product,
    make_grid,
)
from .numerics import hermite

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class LinearSpectrumEntry:
    N: int
    energy: float   # 0 for the zero mode, else +epsilon_N


def level_energy(N: int, params: PhysicsParams) -> float:
    """epsilon_N = sqrt(2 hbar c k N)."""
    if N < 0:
        raise ValueError("level index must be >= 0")
    return math.sqrt(2.0 * params.hbar * params.c * params.require_k() * N)


def linear_spectrum(params: PhysicsParams, n_max: int) -> list[LinearSpectrumEntry]:
    """Zero mode plus levels N = 1..n_max (energies +-epsilon_N)."""
    params.require_k()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [LinearSpectrumEntry(N, level_energy(N, params)) for N in range(n_max + 1)]


def linear_grid(params: PhysicsParams, n_max: int = 6, points: int = 4001) -> np.ndarray:
    """Uniform grid over the truncated domain suited to levels up to ``n_max``."""
    a, b = params.linear_domain(n_max)
    return make_grid(a, b, points)


def normalization_constant(N: int, params: PhysicsParams) -> float:
    """Positive real a_N giving unit norm on the whole line.

    a_0 = kappa^(1/4) / pi^(1/4),  a_N = kappa^(1/4) / sqrt(2^(N+1) N! sqrt(pi)).
    """
    if N < 0:
        raise ValueError("level index must be >= 0")
    kappa = params.require_k() / (params.hbar * params.c)
    if N == 0:
        return kappa**0.25 / math.pi**0.25
    log_den = (N + 1) * math.log(2.0) + math.lgamma(N + 1) + 0.5 * math.log(math.pi)
    return kappa**0.25 * math.exp(-0.5 * log_den)


def linear_eigenstate(entry: LinearSpectrumEntry, sign: int, params: PhysicsParams,
                      grid) -> SpinorField:
    """Unit-norm eigenstate for level ``entry.N`` with energy sign * epsilon_N.

    ``sign`` is ignored for the zero mode.  Raises ValueError when the grid
    cuts the Gaussian tail above 1e-12.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    N = entry.N
    kappa = params.require_k() / (params.hbar * params.c)
    grid = np.asarray(grid, dtype=float)
    y = math.sqrt(kappa) * (grid + params.x0)
    gauss = np.exp(-0.5 * y * y)
    a = normalization_constant(N, params)
    if N == 0:
        values = np.stack([np.zeros_like(y), a * gauss], axis=-1).astype(complex)
    else:
        upper = -1j * math.sqrt(2.0 * N) * a * hermite(N - 1, y) * gauss
        lower = a * hermite(N, y) * gauss + 0j
        values = np.stack([upper, lower], axis=-1)
        if sign == -1:
            values = values @ SIGMA_Z.T
    tail = float(np.max(np.abs(values[[0, -1]])))
    if tail > TAIL_TOL:
        raise ValueError(f"grid too narrow: eigenstate N={N} is {tail:.3g} at the cut-off "
                         f"(limit {TAIL_TOL}); widen the domain")
    return SpinorField(grid, values)


def conjugation_phase(N: int, params: PhysicsParams, grid) -> float:
    """Phase phi with conj(psi_N(+)) = exp(i phi) psi_N(-), measured by overlap.

    For the shapes above the result is pi for every N >= 1.
    """
    if N < 1:
        raise ValueError("the zero mode is real; no phase to measure")
    entry = LinearSpectrumEntry(N, level_energy(N, params))
    plus = linear_eigenstate(entry, 1, params, grid)
    minus = linear_eigenstate(entry, -1, params, grid)
    overlap = inner_product(minus, charge_conjugate(plus))
    return abs(cmath.phase(overlap))


@dataclass(frozen=True, eq=False)
class LinearPacket:
    """c0 psi_0 + sum_N [c_N psi_N(+) + exp(i theta) c.c.].

    c0 exp(-i theta/2) must be real so the zero-mode term is self-conjugate,
    and 1/2 |c0|^2 + sum |c_N|^2 = 1/2.
    """

    c0: complex
    coeffs: Mapping[int, complex]
    params: PhysicsParams
    grid: np.ndarray
    theta: float = 0.0
    expansion: ModeExpansion = field(init=False, repr=False)

    def __post_init__(self):
        c0 = complex(self.c0)
        coeffs = {int(n): complex(c) for n, c in sorted(self.coeffs.items())}
        if any(n < 1 for n in coeffs):
            raise ValueError("excited-level indices start at 1")
        total = 0.5 * abs(c0) ** 2 + sum(abs(c) ** 2 for c in coeffs.values())
        if total == 0:
            raise ValueError("all coefficients are zero")
        if abs(total - 0.5) > NORM_TOL:
            raise ValueError(f"1/2 |c0|^2 + sum |c_N|^2 must equal 1/2, got {total!r}")
        if abs((c0 * cmath.exp(-0.5j * self.theta)).imag) > NORM_TOL:
            raise ValueError("c0 exp(-i theta/2) must be real (c0 real when theta = 0)")
        grid = np.asarray(self.grid, dtype=float)
        zero = linear_eigenstate(LinearSpectrumEntry(0, 0.0), 1, self.params, grid)
        entries = [LinearSpectrumEntry(n, level_energy(n, self.params)) for n in coeffs]
        if entries:
            modes = np.stack([linear_eigenstate(e, 1, self.params, grid).values for e in entries])
        else:
            modes = np.zeros((0, grid.size, 2), dtype=complex)
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "expansion", ModeExpansion(
            grid=grid, modes=modes, coeffs=np.array(list(coeffs.values()), dtype=complex),
            energies=np.array([e.energy for e in entries], dtype=float),
            hbar=self.params.hbar, theta=float(self.theta),
            static=c0 * zero.values))


def build_linear_packet(c0: complex, coeffs: Mapping[int, complex], theta: float,
                        params: PhysicsParams, grid) -> tuple[LinearPacket, SpinorField]:
    packet = LinearPacket(c0, coeffs, params, grid, theta)
    return packet, packet.expansion.field(0.0)


def evolve_linear(packet: LinearPacket, t: float, time_derivative: int = 0) -> SpinorField:
    return packet.expansion.field(t, time_derivative)

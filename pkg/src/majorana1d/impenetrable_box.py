"""Free Majorana particle in a box [0, L] with one of the four confining walls.

Spinor shapes, with s = sin(px/hbar), co = cos(px/hbar) and W = m c^2:

* lower Dirichlet and mixed B:  psi(+-) ~ [+-(c p co + W s)/E, i s]
* upper Dirichlet and mixed A:  psi(+-) ~ [i s, +-(c p co - W s)/E]
* evanescent mode (mixed A):   the same with sinh/cosh and E_q = sqrt(W^2 - (cq)^2)

Mixed A quantizes by tan z = lam z (plus tanh z = lam z when lam < 1),
mixed B by tan z = -lam z, where z = pL/hbar and lam = hbar/(m c L).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Mapping, Optional

import numpy as np
from scipy.integrate import quad

from .core import (
    ModeExpansion,
    PhysicsParams,
    SpinorField,
    ConfiningBC,
    check_half_norm,
)
from .numerics import tan_spectrum_roots, tanh_root

_GRID_TOL = 1e-12


@dataclass(frozen=True)
class BoxSpectrumEntry:
    """One positive-energy level; the negative partner has energy -E."""

    bc: ConfiningBC
    kind: Literal["oscillatory", "evanescent"]
    value: float        # p or q
    z: float            # value * L / hbar
    energy: float       # E > 0
    residual: float     # quantization-condition residual at z


def box_spectrum(bc: ConfiningBC, params: PhysicsParams, count: int) -> list[BoxSpectrumEntry]:
    """The evanescent level (if any) followed by the first ``count`` oscillatory levels.

    p = 0 is never returned.  The evanescent level exists only for mixed A
    walls with lam < 1 (lam = 1 is reported as absent).
    """
    bc = ConfiningBC(bc)
    if count < 1:
        raise ValueError("count must be >= 1")
    hbar, c, L, W = params.hbar, params.c, params.L, params.rest_energy
    entries: list[BoxSpectrumEntry] = []

    def osc(z: float, residual: float) -> BoxSpectrumEntry:
        p = hbar * z / L
        return BoxSpectrumEntry(bc, "oscillatory", p, z, math.hypot(c * p, W), residual)

    if bc in (ConfiningBC.DIRICHLET_LOWER, ConfiningBC.DIRICHLET_UPPER):
        for N in range(1, count + 1):
            z = math.pi * N
            entries.append(osc(z, abs(math.sin(z))))
        return entries
    if params.m == 0:
        raise ValueError("mixed walls need m > 0 (lam = hbar/(m c L) is infinite)")
    lam = params.lam
    if bc == ConfiningBC.MIXED_A:
        ev = tanh_root(lam)
        if ev is not None:
            q = hbar * ev.root / L
            E = math.sqrt(max(W * W - (c * q) ** 2, 0.0))
            entries.append(BoxSpectrumEntry(bc, "evanescent", q, ev.root, E, abs(ev.residual)))
        sign = 1
    else:
        sign = -1
    for rep in tan_spectrum_roots(sign, lam, count):
        entries.append(osc(rep.root, abs(rep.residual)))
    return entries


def _shape(bc: ConfiningBC, entry: BoxSpectrumEntry, sign: int, params: PhysicsParams, x):
    """Un-normalized (phi1, phi2) of the eigenstate at points x."""
    hbar, c, W = params.hbar, params.c, params.rest_energy
    k = entry.value / hbar
    E = entry.energy
    if entry.kind == "evanescent":
        sh, ch = np.sinh(k * x), np.cosh(k * x)
        return sign * sh + 0j, 1j * (W * sh - c * entry.value * ch) / E
    s, co = np.sin(k * x), np.cos(k * x)
    if bc in (ConfiningBC.DIRICHLET_LOWER, ConfiningBC.MIXED_B):
        return sign * (c * entry.value * co + W * s) / E + 0j, 1j * s
    return 1j * s, sign * (c * entry.value * co - W * s) / E + 0j


@lru_cache(maxsize=4096)
def normalization_factor(bc: ConfiningBC, entry: BoxSpectrumEntry, params: PhysicsParams) -> float:
    """Factor making the closed-form eigenstate unit-norm on [0, L] (adaptive quadrature)."""
    def density(x: float) -> float:
        a, b = _shape(bc, entry, 1, params, x)
        return float(abs(a) ** 2 + abs(b) ** 2)

    oscillations = max(50, int(4 * entry.z / math.pi) + 50)
    total, _ = quad(density, 0.0, params.L, limit=oscillations, epsabs=0.0, epsrel=1e-13)
    return 1.0 / math.sqrt(total)


def _check_grid(grid: np.ndarray, params: PhysicsParams) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if abs(grid[0]) > _GRID_TOL * params.L or abs(grid[-1] - params.L) > _GRID_TOL * params.L:
        raise ValueError(f"grid must span [0, L] = [0, {params.L}]")
    return grid


def box_eigenstate(bc: ConfiningBC, entry: BoxSpectrumEntry, sign: int, params: PhysicsParams,
                   grid) -> SpinorField:
    """Unit-norm eigenstate with energy sign * entry.energy.

    The wall components vanish analytically.  Complex conjugation maps the
    positive-energy state to minus the negative-energy one.
    """
    bc = ConfiningBC(bc)
    if entry.bc != bc:
        raise ValueError(f"spectrum entry belongs to {entry.bc.value}, not {bc.value}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    grid = _check_grid(grid, params)
    phi1, phi2 = _shape(bc, entry, sign, params, grid)
    # Enforce exact zeros at the walls (sin(N pi) and friends are only ~1e-16).
    values = np.stack([phi1, phi2], axis=-1) * normalization_factor(bc, entry, params)
    left, right = bc.zero_components
    values[0, left] = 0.0
    values[-1, right] = 0.0
    return SpinorField(grid, values)


def dirichlet_zero_mode(bc: ConfiningBC, params: PhysicsParams, grid) -> SpinorField:
    """Exact E = 0 eigenstate admitted by each Dirichlet wall pair.

    Lower Dirichlet: [exp(+x/lc), 0]; upper Dirichlet: [0, exp(-x/lc)], with
    lc = hbar/(m c) (a constant when m = 0).  The state is real, so it is its
    own charge conjugate and adds a static term to any real packet.
    """
    bc = ConfiningBC(bc)
    if bc not in (ConfiningBC.DIRICHLET_LOWER, ConfiningBC.DIRICHLET_UPPER):
        raise ValueError("only the Dirichlet walls admit a zero mode")
    grid = _check_grid(grid, params)
    kappa = params.m * params.c / params.hbar
    L = params.L
    if kappa == 0:
        profile = np.full(grid.shape, 1.0 / math.sqrt(L))
    else:
        # Integrate exp(-2 kappa (L - x)) to avoid overflow for large kappa L.
        s = kappa if bc == ConfiningBC.DIRICHLET_LOWER else -kappa
        end = L if s > 0 else 0.0
        norm2 = -math.expm1(-2.0 * kappa * L) / (2.0 * kappa)
        profile = np.exp(s * (grid - end)) / math.sqrt(norm2)
    zero = np.zeros_like(profile)
    if bc == ConfiningBC.DIRICHLET_LOWER:
        return SpinorField.from_components(grid, profile, zero)
    return SpinorField.from_components(grid, zero, profile)


@dataclass(frozen=True, eq=False)
class BoxPacket:
    """[c_q psi_q(+) + c.c.] + sum_N [c_N psi_N(+) + c.c.].

    ``coeffs`` maps the 1-based level index N of the oscillatory spectrum to
    its amplitude.  ``c_q`` is the evanescent amplitude (mixed A, lam < 1).
    """

    bc: ConfiningBC
    coeffs: Mapping[int, complex]
    params: PhysicsParams
    grid: np.ndarray
    c_q: Optional[complex] = None
    theta: float = 0.0
    entries: tuple = field(init=False, repr=False)
    expansion: ModeExpansion = field(init=False, repr=False)

    def __post_init__(self):
        bc = ConfiningBC(self.bc)
        coeffs = {int(n): complex(c) for n, c in sorted(self.coeffs.items())}
        if any(n < 1 for n in coeffs):
            raise ValueError("level indices start at 1")
        total = sum(abs(c) ** 2 for c in coeffs.values())
        count = max(coeffs, default=1)
        spectrum = box_spectrum(bc, self.params, count)
        evanescent = [e for e in spectrum if e.kind == "evanescent"]
        oscillatory = [e for e in spectrum if e.kind == "oscillatory"]
        chosen = [oscillatory[n - 1] for n in coeffs]
        amps = list(coeffs.values())
        if self.c_q is not None:
            if not evanescent:
                raise ValueError("c_q given but this wall condition has no evanescent mode "
                                 "(needs mixed A walls and L > hbar/(m c))")
            chosen.insert(0, evanescent[0])
            amps.insert(0, complex(self.c_q))
            total += abs(complex(self.c_q)) ** 2
        if not chosen:
            raise ValueError("at least one coefficient is required")
        check_half_norm(total, what="|c_q|^2 + sum |c_p|^2")
        grid = _check_grid(self.grid, self.params)
        modes = np.stack([box_eigenstate(bc, e, 1, self.params, grid).values for e in chosen])
        object.__setattr__(self, "bc", bc)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "entries", tuple(chosen))
        object.__setattr__(self, "expansion", ModeExpansion(
            grid=grid, modes=modes, coeffs=np.array(amps),
            energies=np.array([e.energy for e in chosen]),
            hbar=self.params.hbar, theta=float(self.theta)))


def build_box_packet(bc: ConfiningBC, coeffs: Mapping[int, complex], c_q: Optional[complex],
                     theta: float, params: PhysicsParams, grid) -> tuple[BoxPacket, SpinorField]:
    packet = BoxPacket(bc, coeffs, params, grid, c_q, theta)
    return packet, packet.expansion.field(0.0)


def evolve_box(packet: BoxPacket, t: float, time_derivative: int = 0) -> SpinorField:
    return packet.expansion.field(t, time_derivative)

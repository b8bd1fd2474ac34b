"""Domain types and operators for the (1+1)-dimensional Dirac equation.

The representation used throughout is the Majorana one,

    gamma0 = sigma_y,  gamma1 = -i sigma_z,  alpha = sigma_x,  beta = sigma_y,

so the Hamiltonian

    h = -i hbar c sigma_x d/dx + (S(x) + m c^2) sigma_y

is purely imaginary and charge conjugation is plain complex conjugation.
Wave functions are sampled on uniform grids; integrals use composite
Simpson quadrature and derivatives use finite-difference stencils (only
for residual checks, never for time evolution).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import simpson

ArrayC = NDArray[np.complex128]
ArrayR = NDArray[np.float64]

# Default tolerances.
ROOT_TOL = 1e-10
REALITY_TOL = 1e-10
QUADRATURE_TOL = 1e-8
NORM_TOL = 1e-8

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
METRIC = np.diag([1.0, -1.0])


class NumericalError(ArithmeticError):
    """A numerical routine produced a non-finite value or failed to converge."""


class BracketError(ValueError):
    """The supplied interval does not bracket a sign change."""


class ConfiningBC(str, enum.Enum):
    """The four wall conditions that confine a real (Majorana) spinor.

    ``DIRICHLET_LOWER``: phi2(0) = phi2(L) = 0
    ``DIRICHLET_UPPER``: phi1(0) = phi1(L) = 0
    ``MIXED_A``:         phi1(0) = phi2(L) = 0
    ``MIXED_B``:         phi2(0) = phi1(L) = 0
    """

    DIRICHLET_LOWER = "dirichlet_lower"
    DIRICHLET_UPPER = "dirichlet_upper"
    MIXED_A = "mixed_a"
    MIXED_B = "mixed_b"

    @property
    def zero_components(self) -> tuple[int, int]:
        """Component index (0 or 1) forced to vanish at x=0 and at x=L."""
        return {
            ConfiningBC.DIRICHLET_LOWER: (1, 1),
            ConfiningBC.DIRICHLET_UPPER: (0, 0),
            ConfiningBC.MIXED_A: (0, 1),
            ConfiningBC.MIXED_B: (1, 0),
        }[self]


# Whole-line problems (linear potential) truncated to a finite window.
WHOLE_LINE = "whole_line"
PERIODIC = "periodic"
BoundaryCondition = Union[ConfiningBC, Literal["periodic", "whole_line"]]


@dataclass(frozen=True)
class PhysicsParams:
    """Physical constants of a run; natural units by default.

    ``k`` is only needed by the linear potential and may be left ``None``.
    """

    hbar: float = 1.0
    c: float = 1.0
    m: float = 1.0
    L: float = 1.0
    k: Optional[float] = None

    def __post_init__(self):
        for name in ("hbar", "c", "L"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.m) and self.m >= 0):
            raise ValueError(f"m must be finite and >= 0, got {self.m!r}")
        if self.k is not None and not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"k must be finite and > 0, got {self.k!r}")

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2

    @property
    def omega(self) -> float:
        """Rest-frame oscillation frequency m c^2 / hbar."""
        return self.rest_energy / self.hbar

    @property
    def compton_length(self) -> float:
        """hbar / (m c); infinite for a massless particle."""
        return math.inf if self.m == 0 else self.hbar / (self.m * self.c)

    @property
    def lam(self) -> float:
        """Dimensionless ratio hbar / (m c L) entering the box quantization."""
        return self.compton_length / self.L

    def require_k(self) -> float:
        if self.k is None:
            raise ValueError("the linear potential needs a slope k > 0")
        return self.k

    @property
    def x0(self) -> float:
        """Zero of the total scalar term k x + m c^2, i.e. x0 = m c^2 / k."""
        return self.rest_energy / self.require_k()

    @property
    def oscillator_length(self) -> float:
        """sqrt(hbar c / k), the width scale of the linear-potential modes."""
        return math.sqrt(self.hbar * self.c / self.require_k())

    def linear_domain(self, n_max: int = 6) -> tuple[float, float]:
        """Truncation window [-x0 - R, -x0 + R] for the linear potential."""
        R = max(10.0, math.sqrt(2.0 * (n_max + 4))) * self.oscillator_length
        return (-self.x0 - R, -self.x0 + R)

    def replace(self, **changes) -> "PhysicsParams":
        values = {f: getattr(self, f) for f in ("hbar", "c", "m", "L", "k")}
        values.update(changes)
        return PhysicsParams(**values)


@dataclass(frozen=True)
class GammaPair:
    gamma0: ArrayC
    gamma1: ArrayC
    variant: str

    @property
    def alpha(self) -> ArrayC:
        return self.gamma0 @ self.gamma1

    @property
    def beta(self) -> ArrayC:
        return self.gamma0

    def gammas(self) -> tuple[ArrayC, ArrayC]:
        return (self.gamma0, self.gamma1)

    def clifford_defect(self) -> float:
        """max |g^mu g^nu + g^nu g^mu - 2 eta^{mu nu}| over all index pairs."""
        g = self.gammas()
        worst = 0.0
        for mu in range(2):
            for nu in range(2):
                anti = g[mu] @ g[nu] + g[nu] @ g[mu]
                worst = max(worst, float(np.max(np.abs(anti - 2 * METRIC[mu, nu] * SIGMA_0))))
        return worst

    def majorana_defect(self) -> float:
        """Largest imaginary entry of i*gamma^mu; zero for a Majorana representation."""
        return max(float(np.max(np.abs((1j * g).imag))) for g in self.gammas())


_VARIANTS = ("standard", "primed", "double_primed")


def make_representation(variant: str = "standard") -> GammaPair:
    """Gamma matrices of one of three Majorana representations.

    ``primed`` is sigma_y g sigma_y and ``double_primed`` is sigma_x g sigma_x
    applied to the standard pair.
    """
    g0 = SIGMA_Y.copy()
    g1 = -1j * SIGMA_Z
    if variant == "standard":
        return GammaPair(g0, g1, variant)
    if variant == "primed":
        return GammaPair(SIGMA_Y @ g0 @ SIGMA_Y, SIGMA_Y @ g1 @ SIGMA_Y, variant)
    if variant == "double_primed":
        return GammaPair(SIGMA_X @ g0 @ SIGMA_X, SIGMA_X @ g1 @ SIGMA_X, variant)
    raise ValueError(f"unknown representation {variant!r}; expected one of {_VARIANTS}")


def make_grid(a: float, b: float, n: int) -> ArrayR:
    """Uniform closed grid on [a, b] with an odd number of points (Simpson-ready)."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"grid needs an odd number of points >= 3, got {n}")
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    return np.linspace(a, b, n)


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Two-component wave function sampled on a grid.

    ``values`` has shape ``(len(grid), 2)``; column 0 is phi1, column 1 is phi2.
    """

    grid: ArrayR
    values: ArrayC

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size < 3:
            raise ValueError("grid must be one-dimensional with at least 3 points")
        if values.shape != (grid.size, 2):
            raise ValueError(f"values must have shape ({grid.size}, 2), got {values.shape}")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_components(cls, grid: ArrayLike, phi1: ArrayLike, phi2: ArrayLike) -> "SpinorField":
        grid = np.asarray(grid, dtype=float)
        phi1 = np.broadcast_to(np.asarray(phi1, dtype=complex), grid.shape)
        phi2 = np.broadcast_to(np.asarray(phi2, dtype=complex), grid.shape)
        return cls(grid, np.stack([phi1, phi2], axis=1))

    @property
    def phi1(self) -> ArrayC:
        return self.values[:, 0]

    @property
    def phi2(self) -> ArrayC:
        return self.values[:, 1]

    @property
    def spacing(self) -> float:
        """Grid step; raises if the grid is not uniform."""
        steps = np.diff(self.grid)
        dx = float(steps.mean())
        if np.max(np.abs(steps - dx)) > 1e-9 * max(dx, abs(self.grid).max()):
            raise ValueError("operation requires a uniform grid")
        return dx

    def with_values(self, values: ArrayLike) -> "SpinorField":
        return SpinorField(self.grid, values)

    def __add__(self, other: "SpinorField") -> "SpinorField":
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "SpinorField":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def apply_matrix(self, matrix: ArrayLike) -> "SpinorField":
        """Pointwise 2x2 matrix action."""
        return self.with_values(self.values @ np.asarray(matrix, dtype=complex).T)

    def density(self) -> ArrayR:
        return np.sum(np.abs(self.values) ** 2, axis=1)


@dataclass(frozen=True)
class ScalarPotential:
    """Lorentz scalar potential S(x): either zero or k x."""

    kind: Literal["zero", "linear"] = "zero"
    slope: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "linear"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "linear" and not self.slope > 0:
            raise ValueError("linear potential needs slope k > 0")
        if self.kind == "zero" and self.slope != 0:
            raise ValueError("zero potential cannot carry a slope")

    @classmethod
    def zero(cls) -> "ScalarPotential":
        return cls("zero", 0.0)

    @classmethod
    def linear(cls, k: float) -> "ScalarPotential":
        return cls("linear", float(k))

    def __call__(self, x: ArrayLike) -> ArrayR:
        x = np.asarray(x, dtype=float)
        return self.slope * x

    def derivative(self, x: ArrayLike) -> ArrayR:
        return np.full_like(np.asarray(x, dtype=float), self.slope)


def _check_same_grid(a: SpinorField, b: SpinorField) -> None:
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise ValueError("fields live on different grids")


# ---------------------------------------------------------------------------
# Charge conjugation and the Majorana condition
# ---------------------------------------------------------------------------

def charge_conjugate(psi: SpinorField) -> SpinorField:
    """Psi_C = S_C Psi^* with S_C = identity in the Majorana representation."""
    return psi.with_values(np.conj(psi.values))


def majorana_defect(psi: SpinorField, theta: float = 0.0) -> float:
    """max |Psi - exp(i theta) Psi_C| over grid points and components."""
    diff = psi.values - np.exp(1j * theta) * np.conj(psi.values)
    return float(np.max(np.abs(diff)))


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], order: int) -> tuple[float, ...]:
    """Weights w_j with sum_j w_j f(x + j h) ~ h^order f^(order)(x)."""
    offs = np.asarray(offsets, dtype=float)
    n = offs.size
    if order >= n:
        raise ValueError("stencil too short for the requested derivative")
    A = np.vander(offs, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return tuple(np.linalg.solve(A, rhs))


def derivative(values: ArrayLike, dx: float, order: int = 1, accuracy: int = 2,
               periodic: bool = False) -> NDArray:
    """Finite-difference derivative along axis 0.

    Interior points use centred stencils of the given (even) accuracy; the
    points near the ends use one-sided stencils of the same accuracy.  With
    ``periodic=True`` the first and last samples are taken to be the same
    physical point and centred stencils wrap around.
    """
    if accuracy < 2 or accuracy % 2:
        raise ValueError("accuracy must be an even integer >= 2")
    if order not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    f = np.asarray(values)
    n = f.shape[0]
    half = accuracy // 2
    centre = tuple(range(-half, half + 1))
    wc = fd_weights(centre, order)

    if periodic:
        core = f[:-1]
        out = np.zeros_like(core, dtype=np.result_type(f, float))
        for off, w in zip(centre, wc):
            out = out + w * np.roll(core, -off, axis=0)
        out = np.concatenate([out, out[:1]], axis=0)
        return out / dx**order

    width = accuracy + order if order == 2 else accuracy + 1
    if n < max(width, 2 * half + 1):
        raise ValueError("grid too short for the requested stencil")
    out = np.zeros_like(f, dtype=np.result_type(f, float))
    for off, w in zip(centre, wc):
        out[half:n - half] += w * f[half + off:n - half + off]
    for i in range(half):
        left = tuple(range(-i, width - i))
        wl = fd_weights(left, order)
        out[i] = sum(w * f[i + o] for o, w in zip(left, wl))
        j = n - 1 - i
        right = tuple(range(-(width - 1 - i), i + 1))
        wr = fd_weights(right, order)
        out[j] = sum(w * f[j + o] for o, w in zip(right, wr))
    return out / dx**order


# ---------------------------------------------------------------------------
# Hamiltonian, inner products, observables
# ---------------------------------------------------------------------------

def apply_hamiltonian(psi: SpinorField, pot: ScalarPotential, params: PhysicsParams, *,
                      accuracy: int = 2, periodic: bool = False) -> SpinorField:
    """h Psi = -i hbar c sigma_x Psi' + (S + m c^2) sigma_y Psi."""
    dx = psi.spacing
    dpsi = derivative(psi.values, dx, 1, accuracy=accuracy, periodic=periodic)
    scalar = pot(psi.grid) + params.rest_energy
    kinetic = -1j * params.hbar * params.c * dpsi[:, ::-1]
    mass = scalar[:, None] * np.stack([-1j * psi.phi2, 1j * psi.phi1], axis=1)
    return psi.with_values(kinetic + mass)


def integrate(samples: ArrayLike, grid: ArrayR) -> complex:
    samples = np.asarray(samples)
    if np.iscomplexobj(samples):
        return complex(simpson(samples.real, x=grid), simpson(samples.imag, x=grid))
    return float(simpson(samples, x=grid))


def inner_product(phi: SpinorField, chi: SpinorField) -> complex:
    """<phi, chi> = integral of phi^dagger chi (composite Simpson)."""
    _check_same_grid(phi, chi)
    integrand = np.sum(np.conj(phi.values) * chi.values, axis=1)
    return complex(integrate(integrand, phi.grid))


def norm(psi: SpinorField) -> float:
    return math.sqrt(max(inner_product(psi, psi).real, 0.0))


def normalized(psi: SpinorField) -> SpinorField:
    nrm = norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero field")
    return psi * (1.0 / nrm)


def gram_matrix(states: list[SpinorField]) -> ArrayC:
    """Matrix of pairwise inner products <states[i], states[j]>."""
    if not states:
        return np.zeros((0, 0), dtype=complex)
    grid = states[0].grid
    for s in states[1:]:
        _check_same_grid(states[0], s)
    stack = np.stack([s.values for s in states])  # (K, n, 2)
    integrand = np.einsum("ixc,jxc->ijx", np.conj(stack), stack)
    re = simpson(integrand.real, x=grid, axis=-1)
    im = simpson(integrand.imag, x=grid, axis=-1)
    return re + 1j * im


def gram_deviation(states: list[SpinorField]) -> float:
    G = gram_matrix(states)
    return float(np.max(np.abs(G - np.eye(len(states))))) if len(states) else 0.0


Observable = Literal["h", "p", "v"]


def mean_value(observable: Observable, psi: SpinorField, pot: ScalarPotential,
               params: PhysicsParams, *, accuracy: int = 2, periodic: bool = False,
               norm_tol: float = NORM_TOL) -> complex:
    """<Psi, O Psi> for O = h, p = -i hbar d/dx, or v = c sigma_x."""
    nrm2 = inner_product(psi, psi).real
    if abs(nrm2 - 1.0) > norm_tol:
        raise ValueError(f"state is not normalized: <psi, psi> = {nrm2!r}")
    if observable == "h":
        out = apply_hamiltonian(psi, pot, params, accuracy=accuracy, periodic=periodic)
    elif observable == "p":
        dpsi = derivative(psi.values, psi.spacing, 1, accuracy=accuracy, periodic=periodic)
        out = psi.with_values(-1j * params.hbar * dpsi)
    elif observable == "v":
        out = psi.apply_matrix(params.c * SIGMA_X)
    else:
        raise ValueError(f"unknown observable {observable!r}")
    return inner_product(psi, out)


def probability_current(psi: SpinorField, index: int,
                        params: Optional[PhysicsParams] = None) -> float:
    """j = c Psi^dagger sigma_x Psi = 2 c Re(phi1^* phi2) at one grid point."""
    n = psi.grid.size
    if not -n <= index < n:
        raise IndexError(f"grid index {index} out of range for {n} points")
    c = 1.0 if params is None else params.c
    phi1, phi2 = psi.values[index]
    return float(2.0 * c * (np.conj(phi1) * phi2).real)


def kfg_residual(psi: SpinorField, psi_tt: SpinorField, pot: ScalarPotential,
                 params: PhysicsParams, *, accuracy: int = 2,
                 periodic: bool = False) -> tuple[float, float]:
    """RMS residual of the second-order (Klein-Fock-Gordon type) equation.

    Each component must satisfy

        [ c^-2 d_t^2 - d_x^2 + (-1)^(j-1) S'/(hbar c) + (S + m c^2)^2/(hbar c)^2 ] phi_j = 0

    ``psi_tt`` is the exact second time derivative; the space derivative is
    taken by finite differences.  Returns the RMS over the grid for j = 1, 2.
    """
    _check_same_grid(psi, psi_tt)
    hc = params.hbar * params.c
    x = psi.grid
    d2 = derivative(psi.values, psi.spacing, 2, accuracy=accuracy, periodic=periodic)
    scalar = pot(x) + params.rest_energy
    dS = pot.derivative(x)
    out = []
    for j, sign in ((0, 1.0), (1, -1.0)):
        res = (psi_tt.values[:, j] / params.c**2 - d2[:, j]
               + (sign * dS / hc + scalar**2 / hc**2) * psi.values[:, j])
        out.append(float(np.sqrt(np.mean(np.abs(res) ** 2))))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Real superpositions of eigenmodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModeExpansion:
    """Psi(t) = static + S(t) + exp(i theta) conj(S(t)),

    with S(t) = sum_j c_j psi_j exp(-i E_j t / hbar).  This is the common shape
    of every Majorana packet: a time-independent zero-energy part plus a sum
    of positive-energy modes and their charge conjugates.
    """

    grid: ArrayR
    modes: ArrayC           # (K, n, 2)
    coeffs: ArrayC          # (K,)
    energies: ArrayR        # (K,)
    hbar: float
    theta: float = 0.0
    static: Optional[ArrayC] = field(default=None)

    def field(self, t: float = 0.0, time_derivative: int = 0) -> SpinorField:
        if time_derivative not in (0, 1, 2):
            raise ValueError("time_derivative must be 0, 1 or 2")
        phases = np.exp(-1j * self.energies * t / self.hbar)
        weights = self.coeffs * phases * (-1j * self.energies / self.hbar) ** time_derivative
        if self.modes.shape[0]:
            S = np.tensordot(weights, self.modes, axes=(0, 0))
        else:
            S = np.zeros((self.grid.size, 2), dtype=complex)
        total = S + np.exp(1j * self.theta) * np.conj(S)
        if self.static is not None and time_derivative == 0:
            total = total + self.static
        return SpinorField(self.grid, total)

    def coefficients_at(self, t: float) -> ArrayC:
        """Positive-energy amplitudes at time t; each evolves by a pure phase."""
        return self.coeffs * np.exp(-1j * self.energies * t / self.hbar)


def check_half_norm(total: float, tol: float = NORM_TOL, what: str = "sum |c|^2") -> None:
    if abs(total - 0.5) > tol:
        raise ValueError(f"{what} must equal 1/2, got {total!r}")


def random_coefficients(rng: np.random.Generator, count: int, total: float = 0.5) -> ArrayC:
    """Complex Gaussian amplitudes rescaled so that sum |c|^2 = total."""
    c = rng.normal(size=count) + 1j * rng.normal(size=count)
    return c * math.sqrt(total / float(np.sum(np.abs(c) ** 2)))

"""Root finding, Hermite polynomials and a finite-difference spectrum oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import eigsh

from .core import (
    PERIODIC,
    ROOT_TOL,
    WHOLE_LINE,
    BoundaryCondition,
    BracketError,
    ConfiningBC,
    NumericalError,
    PhysicsParams,
    ScalarPotential,
)


@dataclass(frozen=True)
class RootReport:
    root: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def _finite(value: float, where: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NumericalError(f"function value is not finite at x={where!r}")
    return value


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_TOL,
           max_iter: int = 400) -> RootReport:
    """Bisection on a sign-changing bracket.

    Halves until the bracket is no wider than ``tol`` and ``|f(root)| <= tol``,
    or until the bracket cannot be split any further in floating point.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    flo = _finite(f(lo), lo)
    fhi = _finite(f(hi), hi)
    if not flo * fhi < 0:
        raise BracketError(f"f({lo})={flo!r} and f({hi})={fhi!r} do not change sign")
    a, b, fa = float(lo), float(hi), flo
    for it in range(1, max_iter + 1):
        mid = 0.5 * (a + b)
        fm = _finite(f(mid), mid)
        if (b - a <= tol and abs(fm) <= tol) or mid <= a or mid >= b:
            return RootReport(mid, fm, (a, b), it)
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    raise NumericalError(f"bisection did not converge in {max_iter} iterations")


def _polish(report: RootReport, f: Callable[[float], float]) -> RootReport:
    """Continue bisecting inside the final bracket down to floating-point resolution.

    Eigenfunctions built from a root are only orthogonal to the accuracy of
    the root divided by the level energy, which can be tiny near threshold.
    """
    lo, hi = report.bracket
    if f(lo) * f(hi) >= 0:
        return report
    fine = bisect(f, lo, hi, tol=1e-300, max_iter=200)
    return RootReport(fine.root, fine.residual, report.bracket, report.iterations + fine.iterations)


def tan_spectrum_roots(sign: int, lam: float, count: int, *, eps: float = 1e-6,
                       probes: int = 1000, tol: float = ROOT_TOL) -> list[RootReport]:
    """First ``count`` positive roots of tan z = sign * lam * z.

    Each tangent branch ((j - 1/2) pi, (j + 1/2) pi) is scanned with
    ``probes`` points kept ``eps`` away from the poles, and every sign change
    is refined by bisection.  z = 0 is never returned.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not lam > 0:
        raise ValueError("lam must be > 0")
    if count < 1:
        raise ValueError("count must be >= 1")

    def f(z: float) -> float:
        return math.tan(z) - sign * lam * z

    roots: list[RootReport] = []
    j = 0
    while len(roots) < count:
        lo = eps if j == 0 else (j - 0.5) * math.pi + eps
        hi = (j + 0.5) * math.pi - eps
        zs = np.linspace(lo, hi, probes)
        vals = np.tan(zs) - sign * lam * zs
        for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
            roots.append(_polish(bisect(f, float(zs[i]), float(zs[i + 1]), tol), f))
        j += 1
        if j > 10 * count + 10:
            raise NumericalError("branch scan failed to find enough roots")
    return roots[:count]


def tanh_root(lam: float, *, tol: float = ROOT_TOL) -> Optional[RootReport]:
    """Unique positive root of tanh z = lam * z, present only when lam < 1."""
    if not lam > 0:
        raise ValueError("lam must be > 0")
    if lam >= 1:
        return None
    # tanh z < 1 bounds the root below 1/lam.
    return _polish(bisect(lambda z: math.tanh(z) - lam * z, 1e-8, 1.0 / lam + 1.0, tol),
                   lambda z: math.tanh(z) - lam * z)


def hermite(N: int, x):
    """Physicists' Hermite polynomial H_N(x) by upward recurrence."""
    if N < 0:
        raise ValueError("Hermite index must be >= 0")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if N == 0:
        return h_prev if x.ndim else float(h_prev)
    h = 2.0 * x
    for n in range(1, N):
        h_prev, h = h, 2.0 * x * h - 2.0 * n * h_prev
    return h if x.ndim else float(h)


# ---------------------------------------------------------------------------
# Finite-difference oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StaggeredOperator:
    """Discrete Hamiltonian on a staggered grid.

    phi1 and phi2 live on interleaved half-step sites ``x`` (``component``
    holds 0 or 1 per site).  Ordered along the line, h only couples nearest
    neighbours, so it is a zero-diagonal tridiagonal (cyclic when periodic)
    matrix up to the unitary phase diag(1, -i) between the two components.
    ``couplings[i]`` links site i to site i+1 (the last entry links the last
    site back to the first when periodic).
    """

    x: np.ndarray
    component: np.ndarray
    couplings: np.ndarray
    periodic: bool

    def symmetric_matrix(self) -> sp.csr_matrix:
        """Real symmetric matrix with the same spectrum as h."""
        n = self.x.size
        e = self.couplings
        i = np.arange(e.size)
        j = (i + 1) % n
        T = sp.coo_matrix((e, (i, j)), shape=(n, n))
        return (T + T.T).tocsr()

    def hamiltonian(self) -> np.ndarray:
        """Dense Hermitian h acting on the site amplitudes; small grids only."""
        T = self.symmetric_matrix().toarray()
        # conj(u_a) T_ab u_b with u = 1 on phi1 sites and -i on phi2 sites
        # reproduces the -i B (upper) and +i B^T (lower) blocks.
        u = np.where(self.component == 0, 1.0 + 0j, -1j)
        return np.conj(u)[:, None] * T * u[None, :]


def staggered_operator(pot: ScalarPotential, bc: BoundaryCondition, params: PhysicsParams,
                       gridsize: int, domain: Optional[tuple[float, float]] = None
                       ) -> StaggeredOperator:
    """Staggered discretization of h with ``gridsize`` cells.

    A staggered layout keeps the discrete operator Hermitian without the
    spurious doubled branch that a collocated centred difference produces.
    Wall conditions are imposed by placing the constrained component on the
    boundary site and deleting it.  The first-order part is

        (B phi2)(x) = hbar c [phi2(x + d/2) - phi2(x - d/2)] / d
                      + W(x) [phi2(x + d/2) + phi2(x - d/2)] / 2,

    with W = S + m c^2 evaluated on the phi1 sites.
    """
    hc = params.hbar * params.c
    if bc == PERIODIC:
        if pot.kind != "zero":
            raise ValueError("periodic oracle needs a periodic (zero) potential")
        a, b = domain or (0.0, params.L)
        d = (b - a) / gridsize
        slots = np.arange(2 * gridsize)
        comp = slots % 2
    else:
        if bc == WHOLE_LINE:
            # phi1 ~ exp(+W^2) edge solutions must be suppressed at both cut-offs;
            # phi2 carries the decaying zero mode and is left free.
            layout = ConfiningBC.DIRICHLET_UPPER
            a, b = domain or params.linear_domain()
        else:
            try:
                layout = ConfiningBC(bc)
            except ValueError:
                raise ValueError(f"unsupported boundary condition for the oracle: {bc!r}") from None
            a, b = domain or (0.0, params.L)
        first, last = layout.zero_components
        if first == last:
            d = (b - a) / gridsize
            n_slots = 2 * gridsize + 1
        else:
            d = (b - a) / (gridsize + 0.5)
            n_slots = 2 * gridsize + 2
        slots = np.arange(n_slots)[1:-1]
        comp = (slots + first) % 2
    x = a + 0.5 * d * slots
    scalar = pot(x) + params.rest_energy
    nxt = np.roll(np.arange(x.size), -1)
    if bc != PERIODIC:
        nxt = nxt[:-1]
    here = np.arange(nxt.size)
    # phi1 site followed by phi2 site: +hbar c/d + W/2; phi2 then phi1: -hbar c/d + W/2.
    couplings = np.where(comp[here] == 0,
                         hc / d + 0.5 * scalar[here],
                         -hc / d + 0.5 * scalar[nxt])
    return StaggeredOperator(x, comp, couplings, bc == PERIODIC)


def fd_hamiltonian_spectrum(pot: ScalarPotential, bc: BoundaryCondition, params: PhysicsParams,
                            gridsize: int, count: int,
                            domain: Optional[tuple[float, float]] = None) -> np.ndarray:
    """The ``count`` eigenvalues of the discrete h closest to zero.

    Sorted by |E| (negative first within a +- pair).  Wall conditions give a
    zero-diagonal tridiagonal matrix solved exactly by LAPACK; the periodic
    case adds two corner entries and uses shift-invert Lanczos.
    """
    if gridsize < 500:
        raise ValueError("the oracle needs at least 500 grid cells")
    if count < 1:
        raise ValueError("count must be >= 1")
    op = staggered_operator(pot, bc, params, gridsize, domain)
    dim = op.x.size
    if op.periodic:
        T = op.symmetric_matrix()
        k = min(2 * count + 2, dim - 2)
        sigma = -1e-3 * params.hbar * params.c / params.L
        vals = eigsh(T, k=k, sigma=sigma, which="LM", v0=np.ones(dim) / math.sqrt(dim),
                     return_eigenvectors=False)
    else:
        mid = dim // 2
        lo, hi = max(0, mid - count - 1), min(dim - 1, mid + count + 1)
        vals = eigh_tridiagonal(np.zeros(dim), op.couplings, eigvals_only=True,
                                select="i", select_range=(lo, hi))
    vals = np.asarray(vals, dtype=float)
    order = np.lexsort((vals, np.abs(vals)))
    return vals[order][:count]


def positive_levels(energies: Sequence[float], count: int, zero_tol: float = 1e-6) -> np.ndarray:
    """The first ``count`` strictly positive entries (above ``zero_tol``)."""
    e = np.asarray(energies, dtype=float)
    pos = np.sort(e[e > zero_tol])
    if pos.size < count:
        raise ValueError(f"only {pos.size} positive levels available, {count} requested")
    return pos[:count]


def count_zero_modes(energies: Sequence[float], zero_tol: float = 1e-6) -> int:
    return int(np.sum(np.abs(np.asarray(energies, dtype=float)) <= zero_tol))

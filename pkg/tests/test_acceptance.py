"""Acceptance criteria, one test each; every test records a PASS/FAIL summary line."""
import json
import math
import time

import numpy as np

from majorana1d.cli import main
from majorana1d.core import (
    PERIODIC,
    WHOLE_LINE,
    ConfiningBC,
    ScalarPotential,
    gram_deviation,
    kfg_residual,
    majorana_defect,
    make_grid,
    mean_value,
    probability_current,
)
from majorana1d.impenetrable_box import box_eigenstate, box_spectrum
from majorana1d.linear_potential import (
    LinearSpectrumEntry,
    level_energy,
    linear_eigenstate,
    linear_grid,
)
from majorana1d.numerics import count_zero_modes, fd_hamiltonian_spectrum, positive_levels, tanh_root
from majorana1d.periodic_box import momentum_label, periodic_spectrum, plane_eigenstate
from majorana1d.rest_box import rest_eigenstates, rest_evolve, rotate
from majorana1d.verify import DEFAULT_PARAMS, random_packet

# Tolerances and sizes pinned by the acceptance criteria.
ORACLE_RTOL = 1e-3
ORACLE_CELLS = 4000
ROOT_RESIDUAL = 1e-10
MEAN_TOL = 1e-9
REALITY_TOL = 1e-10
GRAM_TOL = 1e-8
ROTATION_TOL = 1e-12
OSCILLATOR_RTOL = 1e-6
KFG_TOL = 1e-6
CURRENT_TOL = 1e-10
SEED = 20240611

P = DEFAULT_PARAMS  # hbar = c = m = 1, L = 2 pi, k = 1
ZERO = ScalarPotential.zero()
LINEAR = ScalarPotential.linear(1.0)
GRID_POINTS = 4001


def box_grid(params=P):
    return make_grid(0.0, params.L, GRID_POINTS)


def scenarios():
    """(tag, scenario, bc, grid, potential, periodic stencils) for every scenario."""
    out = [("rest", "rest", None, box_grid(), ZERO, True),
           ("periodic", "periodic", None, box_grid(), ZERO, True)]
    out += [(f"box/{bc.value}", "box", bc, box_grid(), ZERO, False) for bc in ConfiningBC]
    out.append(("linear", "linear", None, linear_grid(P, 6, GRID_POINTS), LINEAR, False))
    return out


def test_criterion_01_periodic_spectrum(acceptance):
    start = time.perf_counter()
    lattice = max(abs(momentum_label(n, P).p - 2 * math.pi * P.hbar * n / P.L) for n in range(-50, 51))
    analytic = np.sort([lab.E for lab in periodic_spectrum(P, 4)])[:5]
    fd = positive_levels(fd_hamiltonian_spectrum(ZERO, PERIODIC, P, ORACLE_CELLS, 14), 5)
    rel = float(np.max(np.abs(fd - analytic) / analytic))
    elapsed = time.perf_counter() - start
    ok = lattice == 0.0 and rel < ORACLE_RTOL and elapsed < 30
    acceptance(1, "periodic spectrum", ok,
               f"|p_n - 2 pi hbar n/L| max {lattice:.1e}; oracle rel err {rel:.2e} < {ORACLE_RTOL}; "
               f"{elapsed:.2f} s < 30 s")
    assert ok


def test_criterion_02_box_spectra(acceptance):
    start = time.perf_counter()
    worst_rel, worst_res, dirichlet = 0.0, 0.0, 0.0
    for bc in ConfiningBC:
        sp = box_spectrum(bc, P, 6)
        osc = [e for e in sp if e.kind == "oscillatory"]
        if bc in (ConfiningBC.DIRICHLET_LOWER, ConfiningBC.DIRICHLET_UPPER):
            dirichlet = max(dirichlet, max(abs(e.value - P.hbar * math.pi * (N + 1) / P.L)
                                           for N, e in enumerate(osc)))
        else:
            sign = 1 if bc == ConfiningBC.MIXED_A else -1
            worst_res = max(worst_res, max(abs(math.tan(e.z) - sign * P.lam * e.z) for e in osc))
        analytic = np.sort([e.energy for e in sp])[:5]
        fd = positive_levels(fd_hamiltonian_spectrum(ZERO, bc, P, ORACLE_CELLS, 16), 5)
        worst_rel = max(worst_rel, float(np.max(np.abs(fd - analytic) / analytic)))
    elapsed = time.perf_counter() - start
    ok = dirichlet == 0.0 and worst_res < ROOT_RESIDUAL and worst_rel < ORACLE_RTOL and elapsed < 60
    acceptance(2, "box spectra", ok,
               f"Dirichlet |p - hbar pi N/L| {dirichlet:.1e}; mixed root residual {worst_res:.1e} "
               f"< {ROOT_RESIDUAL}; oracle rel err {worst_rel:.2e} < {ORACLE_RTOL}; {elapsed:.2f} s")
    assert ok


def test_criterion_03_evanescent_mode_law(acceptance):
    sweep = {f: tanh_root(1.0 / f) is not None for f in (0.5, 0.9, 1.1, 2.0, 5.0)}
    law = all(has == (f > 1) for f, has in sweep.items())
    z = tanh_root(0.5).root
    residual = abs(math.tanh(z) - z / 2)
    ok = law and residual < ROOT_RESIDUAL
    acceptance(3, "evanescent mode law", ok,
               f"exists iff L > hbar/mc over L/(hbar/mc) in {sorted(sweep)}: {law}; "
               f"tanh z - z/2 = {residual:.1e} at z = {z:.10f}")
    assert ok


def test_criterion_04_linear_spectrum(acceptance):
    fd = fd_hamiltonian_spectrum(LINEAR, WHOLE_LINE, P, ORACLE_CELLS, 11)
    zeros = count_zero_modes(fd)
    analytic = np.array([level_energy(N, P) for N in range(1, 6)])
    rel = float(np.max(np.abs(positive_levels(fd, 5) - analytic) / analytic))
    ok = zeros == 1 and rel < ORACLE_RTOL
    acceptance(4, "linear spectrum", ok,
               f"oracle rel err {rel:.2e} < {ORACLE_RTOL} for N <= 5; zero modes found: {zeros}")
    assert ok


def test_criterion_05_mean_value_theorem(acceptance):
    worst_h, worst_p = {}, {}
    for tag, scenario, bc, grid, pot, periodic in scenarios():
        rng = np.random.default_rng([SEED, 5])
        hs, ps = [], []
        for _ in range(100):
            psi = random_packet(scenario, rng, P, grid, 0.0, bc=bc).expansion.field(0.0)
            hs.append(abs(mean_value("h", psi, pot, P, accuracy=8, periodic=periodic)))
            ps.append(abs(mean_value("p", psi, pot, P, accuracy=8, periodic=periodic)))
        worst_h[tag], worst_p[tag] = max(hs), max(ps)
    bad = sorted(t for t in worst_h if not (worst_h[t] < MEAN_TOL and worst_p[t] < MEAN_TOL))
    ok = not bad
    detail = "; ".join(f"{t}: |<h>| {worst_h[t]:.1e}, |<p>| {worst_p[t]:.1e}" for t in worst_h)
    if bad:
        detail += f" -- exceeds {MEAN_TOL} in {bad} (momentum is not self-adjoint with confining walls; <p> is an imaginary boundary term)"
    acceptance(5, "mean-value theorem", ok, detail)
    assert ok, detail


def test_criterion_06_reality_preservation(acceptance):
    worst = {}
    for tag, scenario, bc, grid, _, _ in scenarios():
        rng = np.random.default_rng([SEED, 6])
        times = rng.uniform(0, 60, 100)
        value = 0.0
        for theta in (0.0, 0.7):
            for _ in range(20):
                pk = random_packet(scenario, rng, P, grid, theta, bc=bc)
                for t in times:
                    value = max(value, majorana_defect(pk.expansion.field(t), theta))
        worst[tag] = value
    ok = max(worst.values()) < REALITY_TOL
    acceptance(6, "reality preservation", ok,
               f"max defect {max(worst.values()):.1e} < {REALITY_TOL} over "
               f"{len(worst)} scenarios x 20 packets x 100 times x theta in (0, 0.7)")
    assert ok


def test_criterion_07_orthonormality(acceptance):
    devs = {"rest": gram_deviation(list(rest_eigenstates(P, box_grid())))}
    g2001 = make_grid(0, P.L, 2001)
    devs["periodic"] = gram_deviation([plane_eigenstate(n, s, P, g2001)
                                       for n in range(-4, 5) for s in (1, -1)])
    for bc in ConfiningBC:
        sp = box_spectrum(bc, P, 6)
        devs[f"box/{bc.value}"] = gram_deviation([box_eigenstate(bc, e, s, P, box_grid())
                                                  for e in sp for s in (1, -1)])
    grid = linear_grid(P, 6, GRID_POINTS)
    states = [linear_eigenstate(LinearSpectrumEntry(0, 0.0), 1, P, grid)]
    for N in range(1, 6):
        e = LinearSpectrumEntry(N, level_energy(N, P))
        states += [linear_eigenstate(e, s, P, grid) for s in (1, -1)]
    devs["linear"] = gram_deviation(states)
    ok = max(devs.values()) < GRAM_TOL
    acceptance(7, "orthonormality", ok,
               f"max |G - I| {max(devs.values()):.1e} < {GRAM_TOL} over {sorted(devs)}")
    assert ok


def test_criterion_08_rest_oscillator(acceptance):
    rng = np.random.default_rng([SEED, 8])
    pk = random_packet("rest", rng, P, box_grid())
    psi0 = rest_evolve(pk, 0.0)
    times = rng.uniform(0, 100, 100)
    rot = max(float(np.max(np.abs(rest_evolve(pk, t).values - rotate(psi0, P, t).values)))
              for t in times)
    w = P.omega
    dt = 1e-4 / w
    osc = 0.0
    for t in times:
        f = [rest_evolve(pk, t + s * dt).values[0] for s in (-1, 0, 1)]
        second = (f[2] - 2 * f[1] + f[0]) / dt**2
        osc = max(osc, float(np.max(np.abs(second + w**2 * f[1]))) / (w**2 * np.max(np.abs(f[1]))))
    ok = rot < ROTATION_TOL and osc < OSCILLATOR_RTOL
    acceptance(8, "rest-case oscillator", ok,
               f"closed form vs rotation {rot:.1e} < {ROTATION_TOL}; "
               f"oscillator equation rel residual {osc:.1e} < {OSCILLATOR_RTOL}")
    assert ok


def test_criterion_09_kfg_reduction(acceptance):
    worst = {}
    g = box_grid()
    free = []
    for n in range(-4, 5):
        for s in (1, -1):
            E = momentum_label(n, P).E
            psi = plane_eigenstate(n, s, P, g)
            free.append(max(kfg_residual(psi, psi * (-(E / P.hbar) ** 2), ZERO, P, accuracy=8,
                                         periodic=True)))
    worst["periodic"] = max(free)
    for bc in ConfiningBC:
        res = []
        for e in box_spectrum(bc, P, 6):
            for s in (1, -1):
                psi = box_eigenstate(bc, e, s, P, g)
                res.append(max(kfg_residual(psi, psi * (-(e.energy / P.hbar) ** 2), ZERO, P,
                                            accuracy=8)))
        worst[f"box/{bc.value}"] = max(res)
    grid = linear_grid(P, 6, GRID_POINTS)
    res = []
    for N in range(0, 7):
        e = LinearSpectrumEntry(N, level_energy(N, P))
        for s in (1, -1):
            psi = linear_eigenstate(e, s, P, grid)
            res.append(max(kfg_residual(psi, psi * (-(e.energy / P.hbar) ** 2), LINEAR, P,
                                        accuracy=8)))
    worst["linear"] = max(res)
    ok = max(worst.values()) < KFG_TOL
    acceptance(9, "KFG reduction", ok,
               f"max RMS residual {max(worst.values()):.1e} < {KFG_TOL} "
               f"(free: plane waves and box states; linear: N <= 6)")
    assert ok


def test_criterion_10_confinement(acceptance):
    rng = np.random.default_rng([SEED, 10])
    times = rng.uniform(0, 60, 100)
    walls = 0.0
    for bc in ConfiningBC:
        for _ in range(5):
            pk = random_packet("box", rng, P, box_grid(), 0.0, bc=bc)
            for t in times:
                psi = pk.expansion.field(t)
                walls = max(walls, abs(probability_current(psi, 0, P)),
                            abs(probability_current(psi, -1, P)))
    ring = 0.0
    for _ in range(5):
        pk = random_packet("periodic", rng, P, box_grid())
        for t in times:
            psi = pk.expansion.field(t)
            ring = max(ring, abs(probability_current(psi, 0, P) - probability_current(psi, -1, P)))
    ok = walls < CURRENT_TOL and ring < CURRENT_TOL
    acceptance(10, "confinement", ok,
               f"max |j| at confining walls {walls:.1e}; periodic |j(0) - j(L)| {ring:.1e}; "
               f"both < {CURRENT_TOL}")
    assert ok


def test_criterion_11_determinism(acceptance, tmp_path):
    def cli(command, config, name):
        cfg = tmp_path / f"{name}.json"
        cfg.write_text(json.dumps(config))
        out = tmp_path / f"{name}.out"
        code = main([command, "--config", str(cfg), "--out", str(out), "--seed", "99"])
        return code, out.read_bytes()

    evolve_cfg = {"scenario": "box", "bc": "mixed_a", "times": [0.0, 0.5, 3.0], "grid_size": 801}
    e1, e2 = cli("evolve", evolve_cfg, "e1"), cli("evolve", evolve_cfg, "e2")
    start = time.perf_counter()
    v1 = cli("verify", {}, "v1")
    elapsed = time.perf_counter() - start
    v2 = cli("verify", {}, "v2")
    ok = (e1 == e2 and v1 == v2 and e1[0] == 0 and v1[0] == 0 and elapsed < 60)
    acceptance(11, "determinism", ok,
               f"evolve identical: {e1 == e2}; verify identical: {v1 == v2}; "
               f"verify exit {v1[0]}; full suite {elapsed:.1f} s < 60 s")
    assert ok

"""Checks run by ``spinstar verify``: closed forms and model-independent invariants."""
from __future__ import annotations

import numpy as np

from .analysis import (
    DEFAULT_STEPS,
    DEFAULT_T_MAX,
    closed_form,
    closed_form_ids,
    scan,
)
from .evolution import Propagator, cops_amplitudes_closed_form, lops_amplitudes_closed_form
from .model import StarModel, build_sector_hamiltonian, excitation
from .oracles import OracleReport, oracle_concurrence_exhaustive, oracle_full_vs_sector

CLOSED_FORM_TOL = 1e-9


def scenario_initial(m: StarModel, scenario: str) -> np.ndarray:
    if scenario == "cops":
        return excitation(m, 0)
    if scenario == "lops":
        return excitation(m, m.ligand_count)
    raise ValueError(f"unknown scenario {scenario!r}")


def closed_form_checks(
    m: StarModel,
    tolerance: float = CLOSED_FORM_TOL,
    t_max: float = DEFAULT_T_MAX,
    steps: int = DEFAULT_STEPS,
    space: str = "full",
) -> list[OracleReport]:
    """Numeric trajectory against every registered formula (three ligands only)."""
    if m.ligand_count != 3:
        raise ValueError("closed forms exist for three ligands only")
    reports = []
    for scenario, amps in (("cops", cops_amplitudes_closed_form),
                           ("lops", lops_amplitudes_closed_form)):
        initial = scenario_initial(m, scenario)
        ids = closed_form_ids(scenario)
        series = scan(m, initial, t_max, steps, ids, space=space)
        for qid in ids:
            dev = float(np.max(np.abs(series[qid] - closed_form(qid, series.grid, m.coupling))))
            reports.append(OracleReport(f"{scenario}:{qid}", dev, steps, tolerance))
        numeric = Propagator.sector(m).evolve(initial, series.grid)
        dev = float(np.max(np.abs(numeric - amps(series.grid, coupling=m.coupling))))
        reports.append(OracleReport(f"{scenario}:amplitudes", dev, steps, tolerance))
    return reports


def generic_checks(
    m: StarModel, t_max: float = DEFAULT_T_MAX, steps: int = 1001, seed: int = 7
) -> list[OracleReport]:
    """Invariants that hold for any ligand count."""
    reports = []
    prop = Propagator.sector(m)
    grid = np.linspace(0.0, t_max, 64)
    eye = np.eye(m.n_sites)
    dev = max(float(np.max(np.abs(prop.unitary(t).conj().T @ prop.unitary(t) - eye))) for t in grid)
    reports.append(OracleReport("unitarity", dev, len(grid), 1e-10))

    rng = np.random.default_rng(seed)
    h = build_sector_hamiltonian(m)
    dev = 0.0
    for _ in range(8):
        perm = np.r_[0, 1 + rng.permutation(m.ligand_count)]
        dev = max(dev, float(np.max(np.abs(h[np.ix_(perm, perm)] - h))))
    reports.append(OracleReport("permutation symmetry", dev, 8, 1e-15))

    expected_mz = 1.0 - m.n_sites / 2
    pairs = ["0_1"] + (["1_2"] if m.ligand_count >= 2 else [])
    for scenario in ("cops", "lops"):
        names = ["norm", "mz", "sz_0", "p_0", f"sz_{m.ligand_count}", f"p_{m.ligand_count}"]
        names += [f"{a}_{p}" for p in pairs for a in ("sxsx", "sysy")]
        s = scan(m, scenario_initial(m, scenario), t_max, steps, names)
        reports.append(OracleReport(f"{scenario}:norm", float(np.max(np.abs(s["norm"] - 1))), steps, 1e-10))
        reports.append(OracleReport(f"{scenario}:magnetization",
                                    float(np.max(np.abs(s["mz"] - expected_mz))), steps, 1e-10))
        dev = max(float(np.max(np.abs(s[f"sz_{k}"] - (s[f"p_{k}"] - 0.5)))) for k in (0, m.ligand_count))
        reports.append(OracleReport(f"{scenario}:sz=p-1/2", dev, steps, 1e-12))
        dev = max(float(np.max(np.abs(s[f"sxsx_{p}"] - s[f"sysy_{p}"]))) for p in pairs)
        reports.append(OracleReport(f"{scenario}:xx=yy", dev, steps, 1e-12))

    reports.append(oracle_concurrence_exhaustive(200, seed, m.ligand_count))
    return reports


def deep_checks(m: StarModel, samples: int = 64, trials: int = 1000) -> list[OracleReport]:
    reports = []
    if m.ligand_count <= 8:
        t = np.linspace(0.0, DEFAULT_T_MAX, samples)
        reports.append(oracle_full_vs_sector(m, excitation(m, 0), t))
    reports.append(oracle_concurrence_exhaustive(trials, ligand_count=m.ligand_count))
    return reports

"""Brute-force cross-checks that share no code path with the main pipeline."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .entanglement import one_particle_concurrence, wootters_concurrence
from .evolution import Propagator
from .linalg import matrix_exp_series, partial_trace
from .model import StarModel, build_full_hamiltonian, embed_one_particle
from .settings import ContractError

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class OracleReport:
    check: str
    max_deviation: float
    samples: int
    tolerance: float
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        seed = f" seed={self.seed}" if self.seed is not None else ""
        return (f"{status} {self.check}: max deviation {self.max_deviation:.3e} "
                f"(tol {self.tolerance:.0e}, n={self.samples}{seed})")


def oracle_full_vs_sector(m: StarModel, initial, t_samples, tolerance: float = 1e-9) -> OracleReport:
    """Series exponential of the full Hamiltonian against the sector propagator."""
    if m.ligand_count > 8:
        raise ContractError("full-space oracle is limited to 8 ligands")
    t_samples = np.atleast_1d(np.asarray(t_samples, dtype=float))
    h = build_full_hamiltonian(m)
    psi0 = embed_one_particle(initial, m)
    sector = embed_one_particle(Propagator.sector(m).evolve(initial, t_samples), m)
    worst = 0.0
    for t, expected in zip(t_samples, sector):
        psi = matrix_exp_series(h, -1j * t) @ psi0
        worst = max(worst, float(np.max(np.abs(psi - expected))))
    return OracleReport(f"full-vs-sector L={m.ligand_count}", worst, len(t_samples), tolerance)


def oracle_concurrence_exhaustive(
    trials: int = 1000, seed: int = DEFAULT_SEED, ligand_count: int = 3, tolerance: float = 1e-10
) -> OracleReport:
    """Shortcut ``2|b_i b_j|`` against reduced density matrix + Wootters on random states.

    The product state and the W state are always included as fixed cases.
    """
    if trials < 1:
        raise ContractError("trials must be >= 1")
    m = StarModel(ligand_count)
    n = m.n_sites
    rng = np.random.default_rng(seed)
    b = rng.normal(size=(trials, n)) + 1j * rng.normal(size=(trials, n))
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    fixed = np.zeros((2, n), dtype=complex)
    fixed[0, 0] = 1.0
    fixed[1] = np.r_[1.0, -np.ones(n - 1)] / np.sqrt(n)
    b = np.vstack([fixed, b])
    states = embed_one_particle(b, m)
    worst = 0.0
    for i, j in combinations(range(n), 2):
        general = wootters_concurrence(partial_trace(states, (i, j)))
        worst = max(worst, float(np.max(np.abs(general - one_particle_concurrence(b, i, j)))))
    return OracleReport(f"concurrence shortcut L={ligand_count}", worst, len(b), tolerance, seed)

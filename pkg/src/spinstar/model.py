"""Spin-star network description and Hamiltonian builders.

Site 0 is the central spin, sites ``1..L`` are the ligands. Spin operators
are ``S = sigma / 2`` and hbar is fixed to 1, so time is measured in 1/J.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import settings
from .settings import ContractError, SizeError


@dataclass(frozen=True)
class StarModel:
    ligand_count: int = 3
    coupling: float = 1.0

    def __post_init__(self):
        if isinstance(self.ligand_count, bool) or int(self.ligand_count) != self.ligand_count:
            raise ContractError("ligand_count must be an integer")
        if self.ligand_count < 1:
            raise ContractError("ligand_count must be at least 1")
        if not math.isfinite(self.coupling) or self.coupling == 0.0:
            raise ContractError("coupling must be finite and nonzero")

    @property
    def n_sites(self) -> int:
        return self.ligand_count + 1

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def check_size(self) -> None:
        cap = settings.max_qubits()
        if self.n_sites > cap:
            raise SizeError(
                f"{self.n_sites} qubits exceed the cap of {cap} (set SPINSTAR_MAX_QUBITS)"
            )


def site_mask(n_sites: int, site: int) -> int:
    """Bit mask of ``site`` in a basis index; site 0 is the most significant bit."""
    if not 0 <= site < n_sites:
        raise ContractError(f"site {site} out of range for {n_sites} sites")
    return 1 << (n_sites - 1 - site)


def basis_index(bits) -> int:
    """Integer index of a basis label such as ``(1, 0, 0, 0)`` or ``"1000"``."""
    index = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise ContractError(f"basis label entries must be 0 or 1, got {b}")
        index = (index << 1) | b
    return index


def basis_label(index: int, n_sites: int) -> str:
    if not 0 <= index < 1 << n_sites:
        raise ContractError(f"index {index} out of range for {n_sites} sites")
    return format(index, f"0{n_sites}b")


def build_full_hamiltonian(m: StarModel) -> np.ndarray:
    """Dense Hamiltonian ``J sum_n S_0 . S_n`` on all ``2**(L+1)`` basis states.

    The matrix is real in the computational basis. Flip-flop terms
    ``(S+S- + S-S+)/2`` connect states whose central and ligand bits differ.
    """
    m.check_size()
    n = m.n_sites
    dim = m.dim
    idx = np.arange(dim)
    h = np.zeros((dim, dim))
    c_mask = site_mask(n, 0)
    c_up = (idx & c_mask) != 0
    for site in range(1, n):
        l_mask = site_mask(n, site)
        l_up = (idx & l_mask) != 0
        h[idx, idx] += np.where(c_up == l_up, 0.25, -0.25) * m.coupling
        flip = idx[c_up != l_up]
        h[flip ^ (c_mask | l_mask), flip] += 0.5 * m.coupling
    return h


def build_sector_hamiltonian(m: StarModel) -> np.ndarray:
    """Hamiltonian restricted to the single-excitation sector.

    Row/column ``i`` corresponds to the state with only site ``i`` up.
    """
    L, J = m.ligand_count, m.coupling
    h = np.zeros((L + 1, L + 1))
    h[0, 0] = -L * J / 4
    h[1:, 1:] = np.eye(L) * (L - 2) * J / 4
    h[0, 1:] = h[1:, 0] = J / 2
    return h


def one_particle_indices(n_sites: int) -> np.ndarray:
    return np.array([site_mask(n_sites, s) for s in range(n_sites)])


def _check_normalized(b: np.ndarray) -> None:
    norms = np.sum(np.abs(b) ** 2, axis=-1)
    if np.any(np.abs(norms - 1.0) > settings.NORM_TOL):
        raise ContractError("amplitudes are not normalized")


def embed_one_particle(b, m: StarModel) -> np.ndarray:
    """Lift one-particle amplitudes (``..., L+1``) to full state vectors."""
    b = np.asarray(b, dtype=complex)
    if b.shape[-1] != m.n_sites:
        raise ContractError(f"expected {m.n_sites} amplitudes, got {b.shape[-1]}")
    _check_normalized(b)
    m.check_size()
    out = np.zeros(b.shape[:-1] + (m.dim,), dtype=complex)
    out[..., one_particle_indices(m.n_sites)] = b
    return out


def project_one_particle(state, m: StarModel) -> tuple[np.ndarray, np.ndarray]:
    """Split a full state into sector amplitudes and the norm outside the sector."""
    state = np.asarray(state, dtype=complex)
    if state.shape[-1] != m.dim:
        raise ContractError(f"expected dimension {m.dim}, got {state.shape[-1]}")
    idx = one_particle_indices(m.n_sites)
    b = state[..., idx]
    rest = np.sum(np.abs(state) ** 2, axis=-1) - np.sum(np.abs(b) ** 2, axis=-1)
    return b, np.sqrt(np.clip(rest, 0.0, None))


def excitation(m: StarModel, site: int) -> np.ndarray:
    """Amplitudes of the one-particle state with only ``site`` up."""
    if not 0 <= site <= m.ligand_count:
        raise ContractError(f"site {site} out of range")
    b = np.zeros(m.n_sites, dtype=complex)
    b[site] = 1.0
    return b


def load_model_config(path) -> dict[str, str]:
    """Read a plain ``key=value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ContractError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def model_from_config(values: dict[str, str]) -> StarModel:
    try:
        return StarModel(
            ligand_count=int(values.get("ligand_count", 3)),
            coupling=float(values.get("coupling", 1.0)),
        )
    except ValueError as exc:
        raise ContractError(f"bad model configuration: {exc}") from None

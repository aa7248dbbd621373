"""Trajectory scans, closed-form references and event detectors.

Quantity names
--------------
Column names combine a prefix with site roles, joined by underscores:

* single site: ``p`` (occupation probability), ``sz``, ``sx``, ``sy``
* site pair: ``c`` (concurrence), ``szsz``, ``sxsx``, ``sysy``
* whole state: ``sum_c``, ``spread``, ``w_deviation``, ``w_fidelity``,
  ``mz`` (total magnetization), ``norm``

Roles are ``ucp``/``cp`` (central spin), ``l`` (a ligand; ``l_l`` is a
pair of ligands), ``ul`` (the initially excited ligand) and ``nul`` (a
ligand that was not excited; ``nul_nul`` is a pair of them). Plain site
numbers work too: ``c_0_2``, ``sz_1``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import settings
from .entanglement import (
    detect_w_state,
    one_particle_concurrence,
    pairwise_concurrence_matrix,
    w_state_fidelity,
    wootters_concurrence,
)
from .evolution import Propagator, lops_amplitudes_closed_form
from .linalg import partial_trace
from .model import StarModel, embed_one_particle, one_particle_indices
from .observables import spin_expectation, total_magnetization, two_point_correlator
from .settings import ContractError

SITE_PREFIXES = {"p", "sz", "sx", "sy"}
PAIR_PREFIXES = {"c", "szsz", "sxsx", "sysy"}
STATE_QUANTITIES = {"sum_c", "spread", "w_deviation", "w_fidelity", "mz", "norm"}
ROLE_SITES = ("ucp", "l", "cp", "ul", "nul")
ROLE_PAIRS = ("ucp_l", "l_l", "cp_ul", "cp_nul", "ul_nul", "nul_nul")

DEFAULT_T_MAX = 4 * math.pi
DEFAULT_STEPS = 4001


def quantity_catalog() -> list[str]:
    """Every role-based quantity name accepted by :func:`scan`."""
    names = [f"{p}_{r}" for p in ("c",) for r in ROLE_PAIRS]
    names += [f"{p}_{r}" for p in ("p", "sz") for r in ROLE_SITES]
    names += [f"{p}_{r}" for p in ("szsz", "sxsx", "sysy") for r in ROLE_PAIRS]
    return names + sorted(STATE_QUANTITIES)


# --------------------------------------------------------------------------
# site roles


@dataclass(frozen=True)
class SiteRoles:
    n_sites: int
    excited: int

    @classmethod
    def for_initial(cls, b) -> "SiteRoles":
        """Pick the excited ligand as the ligand with the largest initial weight."""
        p = np.abs(np.asarray(b)) ** 2
        ligands = p[1:]
        # last index among ties, so |0...01> maps to the final ligand
        excited = 1 + len(ligands) - 1 - int(np.argmax(ligands[::-1]))
        return cls(len(p), excited)

    def _others(self) -> list[int]:
        return [s for s in range(1, self.n_sites) if s != self.excited]

    def site(self, token: str) -> int:
        if token.isdigit():
            s = int(token)
        elif token in ("ucp", "cp"):
            s = 0
        elif token == "l":
            s = 1
        elif token == "ul":
            s = self.excited
        elif token == "nul":
            others = self._others()
            if not others:
                raise ContractError("role 'nul' needs at least two ligands")
            s = others[0]
        else:
            raise ContractError(f"unknown site role {token!r}")
        if not 0 <= s < self.n_sites:
            raise ContractError(f"site {s} out of range for {self.n_sites} sites")
        return s

    def pair(self, a: str, b: str) -> tuple[int, int]:
        if a == b == "l":
            pair = (1, 2)
        elif a == b == "nul":
            others = self._others()
            if len(others) < 2:
                raise ContractError("role pair 'nul_nul' needs at least three ligands")
            pair = (others[0], others[1])
        else:
            pair = (self.site(a), self.site(b))
        if pair[0] == pair[1] or max(pair) >= self.n_sites:
            raise ContractError(f"invalid site pair {a}_{b} for {self.n_sites} sites")
        return pair


@dataclass(frozen=True)
class Quantity:
    name: str
    prefix: str
    sites: tuple[int, ...] = ()


def parse_quantity(name: str, roles: SiteRoles) -> Quantity:
    if name in STATE_QUANTITIES:
        return Quantity(name, name)
    prefix, _, rest = name.partition("_")
    tokens = rest.split("_") if rest else []
    if prefix in SITE_PREFIXES and len(tokens) == 1:
        return Quantity(name, prefix, (roles.site(tokens[0]),))
    if prefix in PAIR_PREFIXES and len(tokens) == 2:
        return Quantity(name, prefix, roles.pair(*tokens))
    raise ContractError(f"unknown quantity {name!r}")


# --------------------------------------------------------------------------
# time series and events


def format_number(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


@dataclass
class TimeSeries:
    grid: np.ndarray
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid.ndim != 1 or self.grid.size < 2:
            raise ContractError("grid needs at least two points")
        steps = np.diff(self.grid)
        if np.any(steps <= 0):
            raise ContractError("grid must be strictly increasing")
        if np.max(np.abs(steps - steps.mean())) > 1e-9 * max(1.0, abs(self.grid[-1])):
            raise ContractError("grid must be uniform")
        for name, col in self.columns.items():
            col = np.asarray(col, dtype=float)
            if col.shape != self.grid.shape:
                raise ContractError(f"column {name!r} has the wrong length")
            self.columns[name] = col

    def __getitem__(self, name: str) -> np.ndarray:
        return self.grid if name == "t" else self.columns[name]

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def to_csv(self) -> str:
        lines = [",".join(["t", *self.columns])]
        cols = [self.grid, *self.columns.values()]
        for row in zip(*cols):
            lines.append(",".join(format_number(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"t": self.grid.tolist(), "columns": {k: v.tolist() for k, v in self.columns.items()}}

    @classmethod
    def from_dict(cls, data: dict) -> "TimeSeries":
        return cls(np.array(data["t"]), {k: np.array(v) for k, v in data["columns"].items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


EVENT_KINDS = ("TWS", "PSTWS", "peak", "crossing", "disentangle")


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"t": self.t, "kind": self.kind, "payload": self.payload}


@dataclass
class EventList:
    events: list[Event] = field(default_factory=list)
    degenerate: bool = False

    def __post_init__(self):
        self.events.sort(key=lambda e: (e.t, e.kind))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def times(self) -> list[float]:
        return [e.t for e in self.events]

    def merged(self, other: "EventList") -> "EventList":
        return EventList(self.events + other.events, self.degenerate or other.degenerate)

    def to_dict(self) -> dict:
        return {"degenerate": self.degenerate, "events": [e.to_dict() for e in self.events]}

    @classmethod
    def from_dict(cls, data: dict) -> "EventList":
        events = [Event(e["t"], e["kind"], e["payload"]) for e in data["events"]]
        return cls(events, data.get("degenerate", False))


# --------------------------------------------------------------------------
# scans


def time_grid(t_max: float, steps: int) -> np.ndarray:
    if not (t_max > 0 and math.isfinite(t_max)):
        raise ContractError("t_max must be positive and finite")
    if int(steps) != steps or steps < 2:
        raise ContractError("steps must be an integer >= 2")
    return np.linspace(0.0, t_max, int(steps))


class _Trajectory:
    """Evaluates quantities on chunks of states, caching pair concurrences."""

    def __init__(self, states: np.ndarray, n_sites: int):
        self.states = states
        self.n = n_sites
        self._conc: dict[tuple[int, int], np.ndarray] = {}

    def concurrence(self, i: int, j: int) -> np.ndarray:
        key = (min(i, j), max(i, j))
        if key not in self._conc:
            self._conc[key] = wootters_concurrence(partial_trace(self.states, key))
        return self._conc[key]

    def all_pairs(self) -> np.ndarray:
        return np.stack([self.concurrence(i, j) for i, j in combinations(range(self.n), 2)], -1)

    def amplitudes(self) -> np.ndarray:
        return self.states[..., one_particle_indices(self.n)]

    def evaluate(self, q: Quantity) -> np.ndarray:
        psi = self.states
        if q.prefix == "c":
            return self.concurrence(*q.sites)
        if q.prefix == "p":
            return np.abs(psi[..., 1 << (self.n - 1 - q.sites[0])]) ** 2
        if q.prefix in ("sz", "sx", "sy"):
            return spin_expectation(psi, q.sites[0], q.prefix[1])
        if q.prefix in ("szsz", "sxsx", "sysy"):
            return two_point_correlator(psi, *q.sites, q.prefix[1])
        if q.prefix == "mz":
            return total_magnetization(psi)
        if q.prefix == "norm":
            return np.linalg.norm(psi, axis=-1)
        if q.prefix == "w_fidelity":
            return w_state_fidelity(self.amplitudes())
        pairs = self.all_pairs()
        if q.prefix == "sum_c":
            return pairs.sum(axis=-1)
        spread = pairs.max(axis=-1) - pairs.min(axis=-1)
        if q.prefix == "spread":
            return spread
        return np.abs(pairs - 2.0 / self.n).max(axis=-1)  # w_deviation


def evolve_one_particle(
    m: StarModel, initial, times, space: str = "sector", propagator: Propagator | None = None
) -> np.ndarray:
    """Full-space states along ``times`` starting from one-particle amplitudes."""
    initial = np.asarray(initial, dtype=complex)
    if space == "sector":
        p = propagator or Propagator.sector(m)
        return embed_one_particle(p.evolve(initial, times), m)
    if space == "full":
        p = propagator or Propagator.full(m)
        return p.evolve(embed_one_particle(initial, m), times)
    raise ContractError(f"space must be 'sector' or 'full', got {space!r}")


def scan(
    m: StarModel,
    initial,
    t_max: float = DEFAULT_T_MAX,
    steps: int = DEFAULT_STEPS,
    quantities: Iterable[str] = ("c_ucp_l", "c_l_l"),
    space: str = "sector",
    roles: SiteRoles | None = None,
    chunk: int = 1024,
) -> TimeSeries:
    """Sample the named quantities along the trajectory of ``initial``.

    ``space="full"`` propagates with the complete ``2**(L+1)`` Hamiltonian;
    the default propagates inside the single-excitation sector. Either way
    every quantity is measured on the full state vector.
    """
    grid = time_grid(t_max, steps)
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (m.n_sites,):
        raise ContractError(f"initial amplitudes must have length {m.n_sites}")
    roles = roles or SiteRoles.for_initial(initial)
    parsed = [parse_quantity(q, roles) for q in quantities]
    if len({q.name for q in parsed}) != len(parsed):
        raise ContractError("duplicate quantity names")
    prop = Propagator.sector(m) if space == "sector" else Propagator.full(m)

    out = {q.name: np.empty(grid.size) for q in parsed}
    for start in range(0, grid.size, chunk):
        sl = slice(start, start + chunk)
        traj = _Trajectory(evolve_one_particle(m, initial, grid[sl], space, prop), m.n_sites)
        for q in parsed:
            out[q.name][sl] = traj.evaluate(q)
    return TimeSeries(grid, out)


# --------------------------------------------------------------------------
# closed forms (three ligands, unit coupling)


def _cops_c_ucp_l(t):
    return 0.5 * np.sqrt(np.sin(t) ** 4 + np.sin(2 * t) ** 2)


def _lops_amp(site: int) -> Callable:
    return lambda t: lops_amplitudes_closed_form(t)[..., site]


def _lops_c(i: int, j: int) -> Callable:
    return lambda t: one_particle_concurrence(lops_amplitudes_closed_form(t), i, j)


def _cos_mix(c_half, c_three_half, c_two, const, scale=1 / 72):
    return lambda t: scale * (
        c_half * np.cos(t / 2) + c_three_half * np.cos(1.5 * t) + c_two * np.cos(2 * t) + const
    )


_szsz_cp_ul = _cos_mix(-12, -4, 3, -5)
_szsz_cp_nul = _cos_mix(6, 2, 3, 7)


@dataclass(frozen=True)
class ClosedForm:
    scenario: str  # "cops" or "lops"
    func: Callable


CLOSED_FORMS: dict[str, ClosedForm] = {
    # central excitation
    "c_ucp_l": ClosedForm("cops", _cops_c_ucp_l),
    "c_l_l": ClosedForm("cops", lambda t: np.sin(t) ** 2 / 2),
    "p_ucp": ClosedForm("cops", lambda t: (3 * np.cos(2 * t) + 5) / 8),
    "p_l": ClosedForm("cops", lambda t: np.sin(t) ** 2 / 4),
    "sz_ucp": ClosedForm("cops", lambda t: (3 * np.cos(2 * t) + 1) / 8),
    "sz_l": ClosedForm("cops", lambda t: -(np.cos(2 * t) + 3) / 8),
    "szsz_ucp_l": ClosedForm("cops", lambda t: -np.cos(t) ** 2 / 4),
    "sxsx_ucp_l": ClosedForm("cops", lambda t: -np.sin(t) ** 2 / 8),
    "szsz_l_l": ClosedForm("cops", lambda t: np.cos(t) ** 2 / 4),
    "sxsx_l_l": ClosedForm("cops", lambda t: np.sin(t) ** 2 / 8),
    # ligand excitation (ligand 3 excited; ligands 1 and 2 not)
    "c_cp_ul": ClosedForm("lops", _lops_c(0, 3)),
    "c_cp_nul": ClosedForm("lops", _lops_c(0, 1)),
    "c_ul_nul": ClosedForm("lops", _lops_c(3, 1)),
    "c_nul_nul": ClosedForm("lops", _lops_c(1, 2)),
    "p_cp": ClosedForm("lops", lambda t: np.sin(t) ** 2 / 4),
    "p_ul": ClosedForm("lops", _cos_mix(24, 8, 3, 37)),
    "p_nul": ClosedForm(
        "lops",
        lambda t: 2 / 9 * np.sin(t / 4) ** 4 * (8 * np.cos(t / 2) + 3 * np.cos(t) + 7),
    ),
    "sz_cp": ClosedForm("lops", lambda t: -(np.cos(2 * t) + 3) / 8),
    "sz_ul": ClosedForm("lops", _cos_mix(24, 8, 3, 1)),
    "sz_nul": ClosedForm("lops", _cos_mix(-12, -4, 3, -23)),
    "szsz_cp_ul": ClosedForm("lops", _szsz_cp_ul),
    "szsz_cp_nul": ClosedForm("lops", _szsz_cp_nul),
    "szsz_ul_nul": ClosedForm("lops", lambda t: -_szsz_cp_nul(t)),
    "szsz_nul_nul": ClosedForm("lops", lambda t: -_szsz_cp_ul(t)),
    "sxsx_cp_ul": ClosedForm(
        "lops", lambda t: np.sin(t / 2) ** 2 * (4 * np.cos(t / 2) + np.cos(t) + 1) / 12
    ),
    "sxsx_cp_nul": ClosedForm(
        "lops", lambda t: -np.sin(t / 4) ** 2 * np.sin(t / 2) * np.sin(t) / 6
    ),
    "sxsx_ul_nul": ClosedForm("lops", _cos_mix(6, 2, 3, -11, scale=1 / 144)),
    # equals p_nul / 2; the quarter angle is what the amplitudes give
    "sxsx_nul_nul": ClosedForm(
        "lops", lambda t: np.sin(t / 4) ** 4 * (8 * np.cos(t / 2) + 3 * np.cos(t) + 7) / 9
    ),
}


def closed_form(quantity_id: str, t, coupling: float = 1.0):
    """Evaluate a registered exact formula for the three-ligand star."""
    try:
        entry = CLOSED_FORMS[quantity_id]
    except KeyError:
        raise ContractError(f"no closed form registered for {quantity_id!r}") from None
    value = entry.func(np.asarray(t, dtype=float) * coupling)
    return float(value) if np.ndim(value) == 0 else value


def closed_form_ids(scenario: str | None = None) -> list[str]:
    return [k for k, v in CLOSED_FORMS.items() if scenario in (None, v.scenario)]


def tws_times(n_max: int) -> list[float]:
    """Instants ``(2n - 1) pi / 2`` at which the central excitation becomes a W state."""
    _check_n(n_max)
    return [math.pi * (2 * n - 1) / 2 for n in range(1, n_max + 1)]


def pstws_times(n_max: int) -> list[float]:
    """Instants ``pi (2n - (9 + 5 (-1)^n) / 9)`` where ligand-excitation concurrences nearly meet."""
    _check_n(n_max)
    return [math.pi * (2 * n - (9 + 5 * (-1) ** n) / 9) for n in range(1, n_max + 1)]


def approx_cops_peak_times(n_max: int) -> list[float]:
    """APPROXIMATE maxima of the central-ligand concurrence (closed-form estimate).

    Use :func:`cops_peak_times` for the exact locations.
    """
    _check_n(n_max)
    return [
        math.pi * (2 * n - 1) / 4 + 7 * math.pi * (-1) ** (n + 1) / 132
        for n in range(1, n_max + 1)
    ]


def cops_peak_times(n_max: int) -> list[float]:
    """Exact maxima of the central-ligand concurrence: ``sin^2 t = 2/3``."""
    _check_n(n_max)
    a = math.asin(math.sqrt(2.0 / 3.0))
    out = []
    for n in range(1, n_max + 1):
        k = (n - 1) // 2
        out.append(k * math.pi + a if n % 2 else (k + 1) * math.pi - a)
    return out


def _check_n(n_max: int) -> None:
    if int(n_max) != n_max or n_max < 1:
        raise ContractError("n_max must be a positive integer")


# --------------------------------------------------------------------------
# detectors


def find_peaks(grid, y, refine: bool = True, atol: float = 1e-12, name: str | None = None) -> EventList:
    """Interior local maxima of a sampled column.

    With ``refine`` the vertex of the parabola through the three points
    around each maximum is reported instead of the grid point.
    """
    grid = np.asarray(grid, dtype=float)
    y = np.asarray(y, dtype=float)
    if grid.shape != y.shape or y.size < 3:
        raise ContractError("find_peaks needs matching arrays of at least 3 points")
    h = grid[1] - grid[0]
    events = []
    for k in range(1, y.size - 1):
        left, mid, right = y[k - 1], y[k], y[k + 1]
        if not (mid - left > atol and mid - right > atol):
            continue
        t, v = grid[k], mid
        denom = left - 2 * mid + right
        if refine and denom < 0:
            frac = 0.5 * (left - right) / denom
            t = grid[k] + frac * h
            v = mid - 0.25 * (left - right) * frac
        payload = {"value": float(v)}
        if name:
            payload["series"] = name
        events.append(Event(float(t), "peak", payload))
    return EventList(events)


def find_crossings(
    grid, a, b, refine: bool = True, atol: float = 1e-12, names: tuple[str, str] | None = None
) -> EventList:
    """Sign changes of ``a - b``, linearly interpolated.

    Samples where ``|a - b| <= atol`` count as touching, not crossing. When
    the columns coincide everywhere the result is empty and flagged
    ``degenerate``.
    """
    grid = np.asarray(grid, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (grid.shape == a.shape == b.shape):
        raise ContractError("find_crossings needs columns of equal length")
    g = a - b
    sign = np.where(np.abs(g) <= atol, 0, np.sign(g)).astype(int)
    if not sign.any():
        return EventList([], degenerate=True)
    events = []
    nz = np.flatnonzero(sign)
    for k0, k1 in zip(nz[:-1], nz[1:]):
        if sign[k0] == sign[k1]:
            continue
        if k1 == k0 + 1 and refine:
            frac = g[k0] / (g[k0] - g[k1])
        else:
            frac = 0.5 if k1 > k0 + 1 else 0.0
        t = grid[k0] + frac * (grid[k1] - grid[k0])
        value = a[k0] + frac * (a[k1] - a[k0])
        payload = {"value": float(value)}
        if names:
            payload["pair"] = list(names)
        events.append(Event(float(t), "crossing", payload))
    return EventList(events)


def find_zero_offsets(
    quantity,
    center: float,
    window: float,
    coupling: float = 1.0,
    near_zero: float = 1e-2,
    samples: int = 20001,
) -> float:
    """Distance from ``center`` to the nearest zero of a correlator.

    ``quantity`` is a closed-form id or a callable of ``t``. Sign changes
    are polished with Brent's method. If the function only dips toward zero
    without crossing, the nearest local minimum of ``|f|`` below
    ``near_zero`` counts as its zero.
    """
    if window <= 0:
        raise ContractError("window must be positive")
    f = quantity if callable(quantity) else (lambda t: closed_form(quantity, t, coupling))
    t = np.linspace(center - window, center + window, samples)
    y = np.asarray(f(t), dtype=float)
    zeros = [t[k] for k in np.flatnonzero(y == 0.0)]
    for k in np.flatnonzero(y[:-1] * y[1:] < 0):
        zeros.append(brentq(f, t[k], t[k + 1], xtol=1e-14))
    if not zeros:
        a = np.abs(y)
        for k in range(1, samples - 1):
            if a[k] <= a[k - 1] and a[k] < a[k + 1] and a[k] < near_zero:
                res = minimize_scalar(
                    lambda s: abs(float(f(s))), bounds=(t[k - 1], t[k + 1]),
                    method="bounded", options={"xatol": 1e-12},
                )
                zeros.append(res.x)
    if not zeros:
        raise ContractError(f"no zero within {window} of t={center}")
    return float(min(abs(z - center) for z in zeros))


def _state_at(m, initial, t, space, prop):
    return evolve_one_particle(m, initial, [t], space, prop)[0]


def w_state_events(
    m: StarModel,
    initial,
    t_max: float = DEFAULT_T_MAX,
    steps: int = DEFAULT_STEPS,
    exact_tol: float = settings.EXACT_W_TOL,
    pseudo_tol: float = settings.PSEUDO_W_TOL,
    space: str = "sector",
) -> EventList:
    """Exact (TWS) and pseudo (PSTWS) W-state instants along a trajectory.

    Candidates are grid-local minima of the concurrence spread where every
    pair is within ``pseudo_tol`` of ``2/N``; each is polished by bounded
    minimization of the spread of the propagated state.
    """
    series = scan(m, initial, t_max, steps, ["spread", "w_deviation"], space=space)
    grid, spread, dev = series.grid, series["spread"], series["w_deviation"]
    prop = Propagator.sector(m) if space == "sector" else Propagator.full(m)

    def verdict(t):
        return detect_w_state(state=_state_at(m, initial, t, space, prop), tol=exact_tol, t=t)

    events = []
    for k in range(1, grid.size - 1):
        if not (spread[k] <= spread[k - 1] and spread[k] < spread[k + 1] and dev[k] < pseudo_tol):
            continue
        res = minimize_scalar(
            lambda s: verdict(s).spread, bounds=(grid[k - 1], grid[k + 1]),
            method="bounded", options={"xatol": 1e-12},
        )
        best = verdict(float(res.x))
        if best.spread > spread[k]:
            best = verdict(float(grid[k]))
        payload = {"spread": best.spread, "deviation": best.deviation, "fidelity": best.fidelity}
        if best.is_w_state:
            events.append(Event(best.t, "TWS", payload))
        elif best.spread < pseudo_tol and best.deviation < pseudo_tol:
            events.append(Event(best.t, "PSTWS", payload))
    return EventList(events)


def disentangle_events(
    m: StarModel,
    initial,
    t_max: float = DEFAULT_T_MAX,
    steps: int = DEFAULT_STEPS,
    tol: float = 1e-9,
    space: str = "sector",
) -> EventList:
    """Instants at which the central spin is unentangled from every ligand."""
    names = [f"c_0_{s}" for s in range(1, m.n_sites)]
    series = scan(m, initial, t_max, steps, names, space=space)
    worst = np.max(np.stack([series[n] for n in names]), axis=0)
    grid = series.grid
    prop = Propagator.sector(m) if space == "sector" else Propagator.full(m)

    def central(t):
        cm = pairwise_concurrence_matrix(_state_at(m, initial, t, space, prop))
        return float(cm[0, 1:].max())

    events = []
    for k in range(grid.size):
        left = worst[k - 1] if k > 0 else np.inf
        right = worst[k + 1] if k + 1 < grid.size else np.inf
        if not (worst[k] <= left and worst[k] < right and worst[k] < 1e-3):
            continue
        t, v = float(grid[k]), float(worst[k])
        if v > tol and 0 < k < grid.size - 1:
            res = minimize_scalar(central, bounds=(grid[k - 1], grid[k + 1]),
                                  method="bounded", options={"xatol": 1e-13})
            t, v = float(res.x), float(res.fun)
        if v < tol:
            events.append(Event(t, "disentangle", {"max_central_concurrence": v}))
    return EventList(events)


def concurrence_spread_profile(m: StarModel, initial, t_max=DEFAULT_T_MAX, steps=DEFAULT_STEPS,
                               pseudo_tol: float = settings.PSEUDO_W_TOL) -> tuple[float, float]:
    """Smallest spread over the near-W part of a trajectory and where it occurs.

    Points where some pair is farther than ``pseudo_tol`` from ``2/N`` are
    excluded, so trivially unentangled instants (all concurrences zero) do
    not count as coincidences.
    """
    series = scan(m, initial, t_max, steps, ["spread", "w_deviation"])
    mask = series["w_deviation"] < pseudo_tol
    if not mask.any():
        return math.inf, math.nan
    k = int(np.argmin(np.where(mask, series["spread"], np.inf)))
    return float(series["spread"][k]), float(series.grid[k])

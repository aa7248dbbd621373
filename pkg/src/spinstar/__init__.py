"""Exact real-time dynamics and pairwise entanglement of Heisenberg spin stars."""
from .analysis import (
    Event,
    EventList,
    TimeSeries,
    approx_cops_peak_times,
    closed_form,
    cops_peak_times,
    disentangle_events,
    find_crossings,
    find_peaks,
    find_zero_offsets,
    pstws_times,
    scan,
    tws_times,
    w_state_events,
)
from .entanglement import (
    detect_w_state,
    one_particle_concurrence,
    pairwise_concurrence_matrix,
    w_state_fidelity,
    wootters_concurrence,
)
from .evolution import (
    Propagator,
    cops_amplitudes_closed_form,
    lops_amplitudes_closed_form,
    propagate,
)
from .linalg import hermitian_eig, matrix_exp_series, partial_trace, tensor_product
from .model import (
    StarModel,
    build_full_hamiltonian,
    build_sector_hamiltonian,
    embed_one_particle,
    excitation,
)
from .observables import (
    one_particle_probabilities,
    spin_expectation,
    total_magnetization,
    two_point_correlator,
)

__version__ = "0.1.0"

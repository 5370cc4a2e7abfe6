"""Sharing chain n-local nonlocality among sequential observers in star networks."""

__version__ = "0.1.0"

from .capacity import (
    CapacityResult,
    capacity,
    conservative_capacity_bound,
    critical_bisection,
    critical_sequence,
    initial_threshold,
    required_parties,
)
from .chain import BobFamily, ChainFamily, alice_family, anticommutator_table, bob_family
from .network import (
    CorrelationReport,
    EdgeState,
    ScenarioConfig,
    beta_value,
    classical_bound_enumerate,
    correlation_J,
    phi_plus_state,
    quantum_optimum,
)
from .optimizer import AngleConfiguration, beta_of_angles, omega_values, optimize_angles, sos_residual
from .qops import expectation, pauli_plane_observable, tensor
from .sequential import (
    KrausPair,
    UnsharpnessSchedule,
    degradation_predict,
    kraus_pair,
    measured_correlation,
    simulate_sequence,
    unsharp_channel,
)

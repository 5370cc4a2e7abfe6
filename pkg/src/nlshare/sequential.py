"""Sequential unsharp measurements along network edges.

An edge observer measuring A_x with unsharpness lam uses the Kraus pair

    M_+- = sqrt((1 +- lam)/2) P_+ + sqrt((1 -+ lam)/2) P_-

with P_+- the eigenprojectors of A_x. Averaged over both outcomes the update
is rho -> F rho + (1 - F) A_x rho A_x with F = (1 + sqrt(1 - lam^2)) / 2, and
averaging over the m inputs (each with probability 1/m) gives the channel in
:func:`unsharp_channel`. The next observer on the same edge receives that
state. The central party is always sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .chain import BobFamily, ChainFamily
from .network import (
    CorrelationReport,
    EdgeState,
    Mode,
    ScenarioConfig,
    beta_value,
    edge_correlator,
    normalize_mode,
    phi_plus_state,
    quantum_optimum,
)
from .qops import I2, check_observable, expectation


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"unsharpness must lie in [0, 1], got {lam}")
    return lam


@dataclass(frozen=True)
class KrausPair:
    M_plus: np.ndarray = field(repr=False)
    M_minus: np.ndarray = field(repr=False)
    lam: float

    def completeness_error(self) -> float:
        s = self.M_plus.conj().T @ self.M_plus + self.M_minus.conj().T @ self.M_minus
        return float(np.max(np.abs(s - np.eye(s.shape[0]))))


@dataclass(frozen=True)
class UnsharpnessSchedule:
    """Per-position unsharpness values.

    symmetric: position j uses lambdas[j] on every edge.
    asymmetric: position j uses lambdas[j] on edge 1; every other edge is sharp.
    """

    mode: Mode
    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        object.__setattr__(self, "lambdas", tuple(_check_lambda(x) for x in self.lambdas))

    def __len__(self) -> int:
        return len(self.lambdas)

    def unsharp_edges(self, n: int) -> int:
        return n if self.mode == "symmetric" else 1


def kraus_pair(obs, lam: float) -> KrausPair:
    lam = _check_lambda(lam)
    a = check_observable(obs)
    eye = np.eye(a.shape[0])
    p_plus, p_minus = (eye + a) / 2, (eye - a) / 2
    cp, cm = math.sqrt((1 + lam) / 2), math.sqrt((1 - lam) / 2)
    return KrausPair(cp * p_plus + cm * p_minus, cm * p_plus + cp * p_minus, lam)


def fidelity_factor(lam: float) -> float:
    """F(lam) = (1 + sqrt(1 - lam^2)) / 2, the weight left on the undisturbed state."""
    lam = _check_lambda(lam)
    return (1 + math.sqrt(max(0.0, 1 - lam * lam))) / 2


def _rho(state) -> np.ndarray:
    return state.rho if isinstance(state, EdgeState) else np.asarray(state, dtype=np.complex128)


def unsharp_channel(state: EdgeState, family: ChainFamily, lam: float) -> EdgeState:
    """Average post-measurement state after one unsharp edge observer."""
    f = fidelity_factor(lam)
    rho = _rho(state)
    flipped = np.zeros_like(rho)
    for a in family.observables:
        ax = np.kron(a, I2)
        flipped += ax @ rho @ ax
    out = f * rho + (1 - f) * flipped / family.m
    return EdgeState(0.5 * (out + out.conj().T))


def unsharp_channel_kraus(state: EdgeState, family: ChainFamily, lam: float) -> EdgeState:
    """Literal sum over inputs and outcomes of (M x I) rho (M x I)^dagger / m.

    Slow path kept to cross-check :func:`unsharp_channel`.
    """
    lam = _check_lambda(lam)
    rho = _rho(state)
    out = np.zeros_like(rho)
    for a in family.observables:
        kp = kraus_pair(a, lam)
        for k in (kp.M_plus, kp.M_minus):
            kk = np.kron(k, I2)
            out += kk @ rho @ kk.conj().T
    return EdgeState(out / family.m)


def measured_correlation(state: EdgeState, alice_pair, bob, lam: float) -> float:
    """Unsharp readout of <(A_i + A_{i+1}) x B>: the sharp value scaled by lam."""
    lam = _check_lambda(lam)
    return lam * expectation(_rho(state), np.kron(alice_pair, bob))


def simulate_sequence(
    config: ScenarioConfig,
    schedule: UnsharpnessSchedule,
    alice: ChainFamily,
    bob: BobFamily,
    edge_states: Sequence[EdgeState] | None = None,
) -> list[CorrelationReport]:
    """Inequality value seen by each sequential observer position.

    ``edge_states`` defaults to |Phi+> on every edge. Only edges that carry a
    sequence evolve; sharp edges are read out on their original state.
    """
    if len(schedule) < 1:
        raise ValueError("schedule needs at least one position")
    if normalize_mode(schedule.mode) != config.mode:
        raise ValueError(f"schedule mode {schedule.mode} does not match scenario mode {config.mode}")
    states = list(edge_states) if edge_states is not None else [phi_plus_state()] * config.n
    if len(states) != config.n:
        raise ValueError(f"expected {config.n} edge states, got {len(states)}")
    e = schedule.unsharp_edges(config.n)

    # sharp edges never change, so their correlators are computed once
    sharp = [
        [edge_correlator(s, alice, bob, i) for i in range(1, config.m + 1)] for s in states[e:]
    ]
    reports = []
    for lam in schedule.lambdas:
        Js = []
        for i in range(1, config.m + 1):
            j = 1.0
            for s in states[:e]:
                j *= measured_correlation(s, alice.pair_sum(i), bob.observable(i), lam)
            for row in sharp:
                j *= row[i - 1]
            Js.append(j)
        reports.append(beta_value(config, Js))
        states[:e] = [unsharp_channel(s, alice, lam) for s in states[:e]]
    return reports


def degradation_factor(schedule: UnsharpnessSchedule, k: int) -> float:
    """g_k = lam_k prod_{j<k} (1 + sqrt(1 - lam_j^2)) / 2 for one unsharp edge."""
    if not 1 <= k <= len(schedule):
        raise IndexError(f"position {k} outside 1..{len(schedule)}")
    lams = schedule.lambdas
    return lams[k - 1] * math.prod(fidelity_factor(x) for x in lams[: k - 1])


def degradation_predict(config: ScenarioConfig, schedule: UnsharpnessSchedule, k: int) -> float:
    """Closed-form beta at position k on the optimal |Phi+> construction."""
    g = degradation_factor(schedule, k)
    e = schedule.unsharp_edges(config.n)
    return g ** (e / config.n) * quantum_optimum(config.m)

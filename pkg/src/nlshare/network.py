"""Star-network scenario: chain correlators J_i, the n-local value beta, bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .chain import BobFamily, ChainFamily, alice_family, bob_family
from .qops import PHI_PLUS_KET, check_density, expectation, ket_to_density, permute_subsystems, tensor

Mode = Literal["symmetric", "asymmetric"]

_MODE_ALIASES = {
    "symmetric": "symmetric",
    "sym": "symmetric",
    "asymmetric": "asymmetric",
    "asym": "asymmetric",
}

ENUMERATION_LIMIT = 24


def normalize_mode(mode: str) -> Mode:
    try:
        return _MODE_ALIASES[mode.lower()]  # type: ignore[return-value]
    except KeyError:
        raise ValueError(f"unknown sharing mode {mode!r}; use symmetric or asymmetric") from None


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    m: int
    mode: Mode = "symmetric"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"a star network needs n >= 2 sources, got {self.n}")
        if self.m < 2:
            raise ValueError(f"need m >= 2 inputs, got {self.m}")
        object.__setattr__(self, "mode", normalize_mode(self.mode))

    @property
    def classical_bound(self) -> float:
        return float(2 * self.m - 2)


@dataclass(frozen=True)
class EdgeState:
    """Two-qubit state: edge-party qubit first, central-party qubit second."""

    rho: np.ndarray

    def __post_init__(self):
        rho = check_density(self.rho)
        if rho.shape != (4, 4):
            raise ValueError(f"edge state must be 4x4, got {rho.shape}")
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class CorrelationReport:
    J: tuple[float, ...]
    beta: float
    bound: float
    violated: bool


def phi_plus_state() -> EdgeState:
    return EdgeState(ket_to_density(PHI_PLUS_KET))


def maximally_mixed_state() -> EdgeState:
    return EdgeState(np.eye(4, dtype=np.complex128) / 4)


def edge_correlator(state: EdgeState | np.ndarray, alice: ChainFamily, bob: BobFamily, i: int) -> float:
    """<(A_i + A_{i+1}) x B_i> on one edge."""
    rho = state.rho if isinstance(state, EdgeState) else state
    return expectation(rho, np.kron(alice.pair_sum(i), bob.observable(i)))


def _check_inputs(config: ScenarioConfig, edge_states, alice, bob, i: int) -> None:
    if len(edge_states) != config.n:
        raise ValueError(f"expected {config.n} edge states, got {len(edge_states)}")
    if alice.m != config.m or bob.m != config.m:
        raise ValueError("observable families do not match the scenario's m")
    if not 1 <= i <= config.m:
        raise IndexError(f"input index {i} outside 1..{config.m}")


def correlation_J(
    config: ScenarioConfig,
    edge_states: Sequence[EdgeState],
    alice: ChainFamily,
    bob: BobFamily,
    i: int,
) -> float:
    """J_i = prod_l <(A_i + A_{i+1}) x b_i>_l, edge by edge.

    Sources are independent and the central observable is a product over
    edges, so the joint expectation factorizes.
    """
    _check_inputs(config, edge_states, alice, bob, i)
    return math.prod(edge_correlator(s, alice, bob, i) for s in edge_states)


def correlation_J_full(
    config: ScenarioConfig,
    edge_states: Sequence[EdgeState],
    alice: ChainFamily,
    bob: BobFamily,
    i: int,
) -> float:
    """Same quantity as :func:`correlation_J`, built on the joint Hilbert space.

    Subsystems are ordered (A^1, ..., A^n, B^1, ..., B^n) so the central party
    holds one contiguous block, the way the network is drawn. Cost grows as
    4**n, so this is meant as a cross-check for small n.
    """
    _check_inputs(config, edge_states, alice, bob, i)
    n = config.n
    joint = tensor([s.rho for s in edge_states])
    # edge-major (A1 B1 A2 B2 ...) -> party-major (A1 .. An B1 .. Bn)
    perm = [2 * l for l in range(n)] + [2 * l + 1 for l in range(n)]
    joint = permute_subsystems(joint, [2] * (2 * n), perm)
    op = tensor([alice.pair_sum(i)] * n + [bob.observable(i)] * n)
    return expectation(joint, op)


def nth_root_abs(x: float, n: int) -> float:
    return abs(x) ** (1.0 / n)


def beta_value(config: ScenarioConfig, Js: Sequence[float]) -> CorrelationReport:
    if len(Js) != config.m:
        raise ValueError(f"expected {config.m} correlators, got {len(Js)}")
    beta = sum(nth_root_abs(j, config.n) for j in Js)
    bound = config.classical_bound
    return CorrelationReport(tuple(float(j) for j in Js), float(beta), bound, beta > bound)


def evaluate(
    config: ScenarioConfig,
    edge_states: Sequence[EdgeState],
    alice: ChainFamily,
    bob: BobFamily,
) -> CorrelationReport:
    Js = [correlation_J(config, edge_states, alice, bob, i) for i in range(1, config.m + 1)]
    return beta_value(config, Js)


def quantum_optimum(m: int) -> float:
    """2m cos(pi / 2m); the same for every n."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    return 2 * m * math.cos(math.pi / (2 * m))


def _integer_nth_root(p: np.ndarray, n: int) -> np.ndarray:
    # exact for perfect powers, so 2**n maps to 2.0 with no rounding drift
    approx = p.astype(float) ** (1.0 / n)
    r = np.rint(approx)
    return np.where(r.astype(np.int64) ** n == p, r, approx)


def classical_bound_enumerate(n: int, m: int, *, with_witness: bool = False, block: int = 1 << 18):
    """Brute-force maximum of beta over deterministic n-local strategies.

    Each edge party answers input x with a sign s^l_x; the central party's
    sign is absorbed by the absolute value, so only the 2**(m n) edge
    assignments are searched. Returns the maximum, or ``(maximum, signs)``
    with ``signs[l][x]`` an attaining assignment when ``with_witness``.
    """
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    if m * n > ENUMERATION_LIMIT:
        raise ValueError(f"m*n = {m * n} exceeds the enumeration guard {ENUMERATION_LIMIT}")
    total = 1 << (m * n)
    shifts = np.arange(m * n, dtype=np.int64)
    best, best_idx = -1.0, 0
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).reshape(-1, n, m)
        s = 1 - 2 * bits  # bit 0 -> +1
        nxt = np.concatenate([s[:, :, 1:], -s[:, :, :1]], axis=2)
        prod = np.prod(np.abs(s + nxt), axis=1)  # (B, m), integers
        vals = np.sum(_integer_nth_root(prod, n), axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_idx = float(vals[k]), int(idx[k])
    if not with_witness:
        return best
    bits = [(best_idx >> b) & 1 for b in range(m * n)]
    signs = [[1 - 2 * bits[l * m + x] for x in range(m)] for l in range(n)]
    return best, signs


def optimal_setup(config: ScenarioConfig):
    """|Phi+> on every edge with the equally spaced chain and bisecting B_i."""
    alice = alice_family(config.m)
    return [phi_plus_state()] * config.n, alice, bob_family(alice)

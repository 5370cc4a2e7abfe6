"""Critical unsharpness values and how many sequential observers can share.

Position k on the monitored edge(s) violates the n-local inequality when
g_k^(e/n) * beta_opt >= 2m - 2, with g_k the degradation factor and e the
number of unsharp edges. Setting the threshold at every position gives the
exact recursion

    lam_k = 2 lam_{k-1} / (1 + sqrt(1 - lam_{k-1}^2)),

seeded by lam_1 = r**n (asymmetric) or r (symmetric), where
r = (2m - 2) / (2m cos(pi / 2m)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import alice_family, bob_family
from .network import Mode, ScenarioConfig, normalize_mode, quantum_optimum
from .sequential import UnsharpnessSchedule, simulate_sequence

MAX_OBSERVERS = 10**6


@dataclass(frozen=True)
class CapacityResult:
    m: int
    n: int
    mode: Mode
    critical_lambdas: tuple[float, ...]
    first_infeasible_lambda: float

    @property
    def k_max(self) -> int:
        return len(self.critical_lambdas)


def ratio(m: int) -> float:
    """Classical bound over quantum optimum, (2m - 2) / (2m cos(pi / 2m))."""
    return (2 * m - 2) / quantum_optimum(m)


def initial_threshold(m: int, n: int, mode: str) -> float:
    if m < 2 or n < 2:
        raise ValueError("need m >= 2 and n >= 2")
    r = ratio(m)
    return r**n if normalize_mode(mode) == "asymmetric" else r


def next_critical(lam: float) -> float:
    """The exact recursion map; returns values above 1 once sharing stops."""
    return 2 * lam / (1 + math.sqrt(max(0.0, 1 - lam * lam)))


def critical_sequence(m: int, n: int, mode: str, k_limit: int = MAX_OBSERVERS) -> CapacityResult:
    """Iterate the recursion until the required unsharpness exceeds 1.

    Raises ``RuntimeError`` if ``k_limit`` feasible positions are found
    without reaching an infeasible one.
    """
    if k_limit < 1:
        raise ValueError("k_limit must be >= 1")
    mode = normalize_mode(mode)
    lam = initial_threshold(m, n, mode)
    lams = []
    while lam <= 1.0:
        if len(lams) >= k_limit:
            raise RuntimeError(
                f"more than {k_limit} sequential observers for m={m}, n={n}, {mode}; raise k_limit"
            )
        lams.append(lam)
        lam = next_critical(lam)
    return CapacityResult(m, n, mode, tuple(lams), lam)


def capacity(m: int, n: int, mode: str) -> int:
    return critical_sequence(m, n, mode).k_max


def relaxed_next(lam: float) -> float:
    """Looser map lam / sqrt(1 - lam^2), using 1 + sqrt(1 - x^2) >= 2 sqrt(1 - x^2)."""
    if lam >= 1.0:
        return math.inf
    return lam / math.sqrt(1 - lam * lam)


def conservative_capacity_bound(m: int, n: int) -> int:
    """floor((1/r)^(2n)); never more than the exact asymmetric capacity.

    Under the relaxed map 1/lam_k^2 = 1/lam_1^2 - (k - 1), so the count of
    positions with lam_k <= 1 is floor(r^(-2n)). The relaxation overestimates
    every required unsharpness, hence the under-count for small n.
    """
    x = ratio(m) ** (-2 * n)
    # guard exact powers like (sqrt 2)^4 = 4 against rounding down
    return int(math.floor(x + 1e-9))


def required_parties(m: int, k: int) -> int:
    """Smallest n with (1/r)^(2n) >= k, clamped to a two-source network."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = math.log(k) / (2 * math.log(1 / ratio(m)))
    return max(2, math.ceil(n - 1e-12))


def critical_bisection(
    m: int,
    n: int,
    mode: str,
    k: int,
    prior_lambdas=(),
    tol: float = 1e-6,
) -> float | None:
    """Smallest lam_k for which simulated beta_k reaches 2m - 2.

    Earlier positions use ``prior_lambdas``. Returns ``None`` when even a
    sharp measurement at position k cannot reach the bound.
    """
    prior = tuple(prior_lambdas)
    if len(prior) != k - 1:
        raise ValueError(f"need {k - 1} prior lambdas for position {k}, got {len(prior)}")
    config = ScenarioConfig(n, m, mode)
    alice = alice_family(m)
    bob = bob_family(alice)
    bound = config.classical_bound

    def beta_at(lam: float) -> float:
        sched = UnsharpnessSchedule(config.mode, prior + (lam,))
        return simulate_sequence(config, sched, alice, bob)[-1].beta

    if beta_at(1.0) < bound:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if beta_at(mid) >= bound:
            hi = mid
        else:
            lo = mid
    return hi

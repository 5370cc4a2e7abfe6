"""Golden-number checks shared by ``nlshare verify`` and the acceptance tests."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .capacity import (
    capacity,
    conservative_capacity_bound,
    critical_sequence,
    required_parties,
)
from .chain import (
    BobFamily,
    ChainFamily,
    alice_family,
    anticommutator_table,
    bob_family,
    frame_average,
    sos_anticommutators,
)
from .network import (
    EdgeState,
    ScenarioConfig,
    classical_bound_enumerate,
    correlation_J,
    correlation_J_full,
    evaluate,
    optimal_setup,
    quantum_optimum,
)
from .optimizer import omega_values, optimize_angles, sos_residual
from .qops import SX, SZ, random_density
from .sequential import (
    UnsharpnessSchedule,
    degradation_predict,
    kraus_pair,
    simulate_sequence,
    unsharp_channel,
)

PERTURBATION = 0.1  # radians added to B_1 by the negative control


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.criterion:>2} {self.name}: {self.detail}"


def _bob(alice: ChainFamily, perturb: bool) -> BobFamily:
    bob = bob_family(alice)
    if not perturb:
        return bob
    angles = list(bob.angles)
    angles[0] += PERTURBATION
    return BobFamily.from_angles(angles)


def check_optimum(perturb: bool = False) -> CheckResult:
    worst = 0.0
    for m in range(2, 9):
        alice = alice_family(m)
        bob = _bob(alice, perturb)
        per_edge = 2 * math.cos(math.pi / (2 * m))
        for n in range(2, 6):
            config = ScenarioConfig(n, m)
            states = optimal_setup(config)[0]
            rep = evaluate(config, states, alice, bob)
            worst = max(worst, abs(rep.beta - quantum_optimum(m)))
            if not perturb:
                worst = max(worst, max(abs(j - per_edge**n) for j in rep.J))
            if n <= 3:
                for i in range(1, m + 1):
                    fast = correlation_J(config, states, alice, bob, i)
                    full = correlation_J_full(config, states, alice, bob, i)
                    worst = max(worst, abs(fast - full))
    b3 = evaluate(ScenarioConfig(2, 3), *optimal_setup(ScenarioConfig(2, 3))).beta
    b4 = evaluate(ScenarioConfig(2, 4), *optimal_setup(ScenarioConfig(2, 4))).beta
    ok = worst <= 1e-10 and abs(b3 - 3 * math.sqrt(3)) <= 1e-10 and abs(b4 - 7.3910) <= 1e-4
    return CheckResult(1, "optimum", ok, f"max |beta - 2m cos(pi/2m)| = {worst:.2e}; m=3 {b3:.6f}, m=4 {b4:.6f}")


def check_classical_bound() -> CheckResult:
    ok, parts = True, []
    for n in (2, 3):
        for m in (2, 3, 4):
            t0 = time.perf_counter()
            v = classical_bound_enumerate(n, m)
            dt = time.perf_counter() - t0
            good = v == 2 * m - 2 and dt < 1.0
            ok &= good
            parts.append(f"(n={n},m={m})={v:g}")
    return CheckResult(2, "classical-bound", ok, " ".join(parts))


def check_oracle_equivalence(samples: int = 100, seed: int = 2024) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for m in (3, 4, 5):
            for mode in ("symmetric", "asymmetric"):
                config = ScenarioConfig(n, m, mode)
                _, alice, bob = optimal_setup(config)
                for _ in range(samples):
                    k = int(rng.integers(1, 6))
                    sched = UnsharpnessSchedule(mode, tuple(rng.uniform(0, 1, size=k)))
                    reps = simulate_sequence(config, sched, alice, bob)
                    for pos, rep in enumerate(reps, start=1):
                        worst = max(worst, abs(rep.beta - degradation_predict(config, sched, pos)))
    return CheckResult(3, "oracle-equivalence", worst <= 1e-10, f"max |sim - closed form| = {worst:.2e}")


def check_symmetric_m3() -> CheckResult:
    res = critical_sequence(3, 2, "symmetric")
    lams = res.critical_lambdas
    ok = (
        len(lams) == 2
        and abs(lams[0] - 0.76980) <= 1e-4
        and abs(lams[1] - 0.93974) <= 1e-4
        and res.first_infeasible_lambda > 1
    )
    detail = f"lambdas {[round(x, 5) for x in lams]}, next {res.first_infeasible_lambda:.4f}, capacity {res.k_max}"
    return CheckResult(4, "critical-symmetric", ok, detail)


def check_asymmetric_m3() -> CheckResult:
    res = critical_sequence(3, 2, "asymmetric")
    reported = (0.59, 0.66, 0.75, 0.90)
    lams = res.critical_lambdas
    ok = (
        len(lams) == 4
        and all(abs(a - b) <= 0.01 for a, b in zip(lams, reported))
        and abs(res.first_infeasible_lambda - 1.25) <= 0.01
    )
    detail = f"lambdas {[round(x, 4) for x in lams]}, next {res.first_infeasible_lambda:.4f}, capacity {res.k_max}"
    return CheckResult(5, "critical-asymmetric", ok, detail)


CAPACITY_TARGETS = (
    [((3, 2, "asymmetric"), 4), ((3, 3, "asymmetric"), 7)]
    + [((3, n, "symmetric"), 2) for n in range(2, 7)]
    + [((4, n, "symmetric"), 1) for n in range(2, 7)]
    + [((4, 2, "asymmetric"), 3), ((4, 3, "asymmetric"), 5), ((4, 4, "asymmetric"), 9), ((4, 5, "asymmetric"), 13)]
)


def check_capacities() -> CheckResult:
    misses = []
    for (m, n, mode), want in CAPACITY_TARGETS:
        got = capacity(m, n, mode)
        if got != want:
            misses.append(f"m={m},n={n},{mode[:4]}: got {got}, expected {want}")
    lam2 = critical_sequence(4, 2, "symmetric").first_infeasible_lambda
    if abs(lam2 - 1.025) > 1e-3:
        misses.append(f"m=4 symmetric second value {lam2:.4f}")
    fourth = critical_sequence(4, 2, "asymmetric").first_infeasible_lambda
    if abs(fourth - 1.3) > 0.05:
        misses.append(f"m=4 asymmetric fourth value {fourth:.4f}")
    detail = "; ".join(misses) if misses else f"{len(CAPACITY_TARGETS)} cells match"
    return CheckResult(6, "capacities", not misses, detail)


def check_conservative_bounds() -> CheckResult:
    bad = [
        (m, n)
        for m in range(3, 7)
        for n in range(2, 7)
        if conservative_capacity_bound(m, n) > capacity(m, n, "asymmetric")
    ]
    rp = [required_parties(3, k) for k in range(1, 200)]
    mono = all(a <= b for a, b in zip(rp, rp[1:]))
    ok = not bad and required_parties(3, 7) == 4 and mono
    return CheckResult(7, "conservative-bounds", ok, f"violations {bad}, required_parties(3,7)={required_parties(3, 7)}")


def check_optimizer(restarts: int = 50, seed: int = 0) -> CheckResult:
    worst_gap, worst_excess = 0.0, -math.inf
    for m in (2, 3, 4, 5):
        for n in (2, 3):
            _, best = optimize_angles(ScenarioConfig(n, m), restarts=restarts, seed=seed)
            opt = quantum_optimum(m)
            worst_gap = max(worst_gap, abs(best - opt))
            worst_excess = max(worst_excess, best - opt)
    ok = worst_gap <= 1e-6 and worst_excess <= 1e-6
    return CheckResult(8, "optimizer", ok, f"max |best - optimum| = {worst_gap:.2e}")


def check_certificates(perturb: bool = False) -> CheckResult:
    worst_res, worst_omega = 0.0, 0.0
    for m in range(2, 9):
        bob = _bob(alice_family(m), perturb)
        worst_res = max(worst_res, max(sos_residual(m, bob)))
        target = 2 * math.cos(math.pi / (2 * m))
        worst_omega = max(worst_omega, max(abs(w - target) for w in omega_values(m)))
    ac = sos_anticommutators(alice_family(3))
    ac_err = max(abs(a - b) for a, b in zip(ac, (1.0, 1.0, -1.0)))
    ok = worst_res <= 1e-10 and worst_omega <= 1e-12 and ac_err <= 1e-12
    return CheckResult(
        9, "certificates", ok, f"residual {worst_res:.2e}, omega {worst_omega:.2e}, anticommutators {ac_err:.2e}"
    )


def check_channel(samples: int = 1000, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_complete, worst_trace = 0.0, 0.0
    for _ in range(samples):
        theta = rng.uniform(0, 2 * math.pi)
        lam = rng.uniform(0, 1)
        family = ChainFamily.from_angles([theta, theta + rng.uniform(0, math.pi)])
        worst_complete = max(worst_complete, kraus_pair(family.observables[0], lam).completeness_error())
        rho = EdgeState(random_density(4, rng))
        out = unsharp_channel(rho, family, lam)
        worst_trace = max(worst_trace, abs(np.trace(out.rho).real - 1.0))
    worst_frame = 0.0
    for m in range(2, 9):
        fam = alice_family(m)
        for _ in range(20):
            u = rng.normal(size=2)
            o = u[0] * SZ + u[1] * SX
            worst_frame = max(worst_frame, float(np.max(np.abs(frame_average(fam, o)))))
        anticommutator_table(fam)
    ok = worst_complete <= 1e-12 and worst_trace <= 1e-12 and worst_frame <= 1e-12
    detail = f"completeness {worst_complete:.1e}, trace {worst_trace:.1e}, tight frame {worst_frame:.1e}"
    return CheckResult(10, "channel", ok, detail)


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "optimum": check_optimum,
    "classical": check_classical_bound,
    "oracle": check_oracle_equivalence,
    "critical-sym": check_symmetric_m3,
    "critical-asym": check_asymmetric_m3,
    "capacity": check_capacities,
    "bounds": check_conservative_bounds,
    "optimizer": check_optimizer,
    "certificates": check_certificates,
    "channel": check_channel,
}

PERTURBABLE = {"optimum", "certificates"}


def run_checks(only: list[str] | None = None, perturb: bool = False) -> list[CheckResult]:
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s) {unknown}; choose from {list(CHECKS)}")
    out = []
    for name in names:
        fn = CHECKS[name]
        out.append(fn(perturb=perturb) if name in PERTURBABLE else fn())
    return out

"""Direct numerical search over x-z plane measurement angles, plus SOS checks.

The search is independent of the sum-of-squares argument: it maximizes beta
over all 2m angles on |Phi+> edges by coordinate ascent with random restarts
and should land on 2m cos(pi / 2m) without being told where it is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import BobFamily, ChainFamily, alice_family, bob_family, pair_norm_on_phi_plus
from .network import ScenarioConfig, evaluate, phi_plus_state
from .qops import I2, PHI_PLUS_KET, pauli_plane_batch

TWO_PI = 2 * math.pi
GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class AngleConfiguration:
    alice_angles: tuple[float, ...]
    bob_angles: tuple[float, ...]

    def __post_init__(self):
        if len(self.alice_angles) != len(self.bob_angles):
            raise ValueError("alice and bob need the same number of angles")
        object.__setattr__(self, "alice_angles", tuple(float(t) % TWO_PI for t in self.alice_angles))
        object.__setattr__(self, "bob_angles", tuple(float(t) % TWO_PI for t in self.bob_angles))

    @property
    def m(self) -> int:
        return len(self.alice_angles)

    def families(self) -> tuple[ChainFamily, BobFamily]:
        return ChainFamily.from_angles(self.alice_angles), BobFamily.from_angles(self.bob_angles)


def optimal_angles(m: int) -> AngleConfiguration:
    alice = alice_family(m)
    return AngleConfiguration(alice.angles, bob_family(alice).angles)


def beta_of_angles(config: ScenarioConfig, angles: AngleConfiguration) -> float:
    if angles.m != config.m:
        raise ValueError(f"expected {config.m} angles per party, got {angles.m}")
    alice, bob = angles.families()
    return evaluate(config, [phi_plus_state()] * config.n, alice, bob).beta


class _BatchObjective:
    """beta for a batch of angle vectors, shape (R, 2m) -> (R,).

    Correlators are traces against the |Phi+> density matrix, evaluated with
    einsum over stacks of 2x2 observables so many candidates go at once.
    """

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        rho = np.outer(PHI_PLUS_KET, PHI_PLUS_KET.conj())
        self._rho = rho.reshape(2, 2, 2, 2)

    def edge_values(self, x: np.ndarray) -> np.ndarray:
        m = self.m
        a = pauli_plane_batch(x[..., :m])
        b = pauli_plane_batch(x[..., m:])
        pair = a + np.concatenate([a[..., 1:, :, :], -a[..., :1, :, :]], axis=-3)
        # tr(rho (P x B)) = sum rho[i k, j l] P[j i] B[l k]
        return np.einsum("ikjl,...ji,...lk->...", self._rho, pair, b).real

    def __call__(self, x: np.ndarray) -> np.ndarray:
        e = self.edge_values(x)
        # every edge carries the same state and angles
        J = e**self.n
        return np.sum(np.abs(J) ** (1.0 / self.n), axis=-1)


def _line_search(f, x: np.ndarray, c: int, grid: int, tol: float) -> np.ndarray:
    """Maximize f along coordinate c for every row: grid scan, then golden section."""
    R = x.shape[0]
    step = TWO_PI / grid
    cand = np.repeat(x[:, None, :], grid + 1, axis=1)
    cand[:, :grid, c] = np.arange(grid) * step
    # slot `grid` keeps the current value, so a sweep never loses ground
    vals = f(cand)
    best = np.argmax(vals, axis=1)
    center = cand[np.arange(R), best, c]
    lo, hi = center - step, center + step

    def at(t):
        y = x.copy()
        y[:, c] = t
        return f(y)

    p = hi - GOLDEN * (hi - lo)
    q = lo + GOLDEN * (hi - lo)
    fp, fq = at(p), at(q)
    while np.max(hi - lo) > tol:
        left = fp > fq
        hi = np.where(left, q, hi)
        lo = np.where(left, lo, p)
        new_p = np.where(left, hi - GOLDEN * (hi - lo), q)
        new_q = np.where(left, p, lo + GOLDEN * (hi - lo))
        fnew = at(np.where(left, new_p, new_q))
        fp, fq = np.where(left, fnew, fq), np.where(left, fp, fnew)
        p, q = new_p, new_q
    t = 0.5 * (lo + hi)
    ft = at(t)
    keep = vals[np.arange(R), best] > ft
    out = x.copy()
    out[:, c] = np.where(keep, center, t) % TWO_PI
    return out


def optimize_angles(
    config: ScenarioConfig,
    restarts: int = 50,
    seed: int = 0,
    *,
    max_sweeps: int = 200,
    tol: float = 1e-9,
    grid: int = 24,
) -> tuple[AngleConfiguration, float]:
    """Coordinate ascent over all 2m angles with seeded random restarts.

    Each coordinate update scans a coarse grid then refines by golden-section
    search to ``tol``. Sweeps repeat until no restart improves by more than
    1e-14 or ``max_sweeps`` is hit. Restarts run as one vectorized batch.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = config.m
    f = _BatchObjective(config.n, m)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, TWO_PI, size=(restarts, 2 * m))
    cur = f(x)
    for _ in range(max_sweeps):
        for c in range(2 * m):
            x = _line_search(f, x, c, grid, tol)
        new = f(x)
        done = np.max(new - cur) <= 1e-14
        cur = new
        if done:
            break
    k = int(np.argmax(cur))
    angles = AngleConfiguration(tuple(x[k, :m]), tuple(x[k, m:]))
    return angles, beta_of_angles(config, angles)


def omega_values(m: int) -> list[float]:
    """||(A_i + A_{i+1})|Phi+>||_2 on the optimal chain, i = 1..m."""
    alice = alice_family(m)
    return [pair_norm_on_phi_plus(alice, i) for i in range(1, m + 1)]


def sos_residual(m: int, bob: BobFamily | None = None) -> list[float]:
    """||((A_i + A_{i+1}) / omega_i x I - I x B_i)|Phi+>|| for each i.

    All vanish exactly when the optimal value is attained. ``bob`` defaults
    to the bisecting family; pass a perturbed one to probe sensitivity.
    """
    alice = alice_family(m)
    if bob is None:
        bob = bob_family(alice)
    out = []
    for i in range(1, m + 1):
        w = pair_norm_on_phi_plus(alice, i)
        v = (np.kron(alice.pair_sum(i) / w, I2) - np.kron(I2, bob.observable(i))) @ PHI_PLUS_KET
        out.append(float(np.linalg.norm(v)))
    return out

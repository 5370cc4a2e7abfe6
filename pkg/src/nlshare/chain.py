"""Chained observable families for edge parties and the central party."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qops import I2, PHI_PLUS_KET, check_observable, pauli_plane_observable

ANTICOMM_TOL = 1e-12


@dataclass(frozen=True)
class ChainFamily:
    """m single-qubit observables A_1..A_m with the wrap rule A_{m+1} = -A_1."""

    angles: tuple[float, ...]
    observables: tuple[np.ndarray, ...] = field(repr=False)

    @classmethod
    def from_angles(cls, angles) -> "ChainFamily":
        angles = tuple(float(t) for t in angles)
        if len(angles) < 2:
            raise ValueError("a chain family needs m >= 2 observables")
        return cls(angles, tuple(pauli_plane_observable(t) for t in angles))

    @property
    def m(self) -> int:
        return len(self.observables)

    def observable(self, i: int) -> np.ndarray:
        """A_i for 1 <= i <= m + 1 (1-based, chain convention at m + 1)."""
        if i == self.m + 1:
            return -self.observables[0]
        if not 1 <= i <= self.m:
            raise IndexError(f"chain index {i} outside 1..{self.m + 1}")
        return self.observables[i - 1]

    def pair_sum(self, i: int) -> np.ndarray:
        """A_i + A_{i+1}."""
        return self.observable(i) + self.observable(i + 1)


@dataclass(frozen=True)
class BobFamily:
    """Central-party observables B_1..B_m, one per-edge qubit factor each."""

    observables: tuple[np.ndarray, ...] = field(repr=False)
    angles: tuple[float, ...] | None = None

    def __post_init__(self):
        for b in self.observables:
            check_observable(b)

    @classmethod
    def from_angles(cls, angles) -> "BobFamily":
        angles = tuple(float(t) for t in angles)
        return cls(tuple(pauli_plane_observable(t) for t in angles), angles)

    @property
    def m(self) -> int:
        return len(self.observables)

    def observable(self, i: int) -> np.ndarray:
        if not 1 <= i <= self.m:
            raise IndexError(f"input index {i} outside 1..{self.m}")
        return self.observables[i - 1]


def alice_family(m: int) -> ChainFamily:
    """Equally spaced chain: A_i at angle (i - 1) pi / m in the x-z plane."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return ChainFamily.from_angles([(i - 1) * np.pi / m for i in range(1, m + 1)])


def bob_family(alice: ChainFamily) -> BobFamily:
    """Observables nulling the SOS terms: b_i = (A_i + A_{i+1}) / ||(A_i + A_{i+1})||.

    For x-z plane observables the normalizer is sqrt(2 + c_i) where
    {A_i, A_{i+1}} = c_i I; equally spaced chains give 2 cos(pi / 2m).
    """
    cs = anticommutator_table(alice)
    obs = []
    for i, c in enumerate(cs, start=1):
        norm2 = 2.0 + c
        if norm2 <= 0:
            raise ValueError(f"A_{i} + A_{i+1} vanishes; no bisecting observable")
        obs.append(alice.pair_sum(i) / np.sqrt(norm2))
    th = list(alice.angles) + [alice.angles[0] + np.pi]
    mids = tuple(0.5 * (th[i] + th[i + 1]) for i in range(alice.m))
    return BobFamily(tuple(obs), mids)


def anticommutator_table(family: ChainFamily) -> list[float]:
    """Scalars c_i with {A_i, A_{i+1}} = c_i I, using A_{m+1} = -A_1."""
    out = []
    for i in range(1, family.m + 1):
        a, b = family.observable(i), family.observable(i + 1)
        ac = a @ b + b @ a
        d = ac.shape[0]
        c = np.trace(ac).real / d
        if np.max(np.abs(ac - c * np.eye(d))) > ANTICOMM_TOL:
            raise ValueError(f"{{A_{i}, A_{i + 1}}} is not proportional to the identity")
        out.append(float(c))
    return out


def sos_anticommutators(family: ChainFamily) -> tuple[float, float, float]:
    """({A1,A2}, {A2,A3}, {A1,A3}) scalars for a three-input chain."""
    if family.m != 3:
        raise ValueError("defined for m = 3 only")
    c = anticommutator_table(family)
    return c[0], c[1], -c[2]


def frame_average(family: ChainFamily, op: np.ndarray) -> np.ndarray:
    """(1/m) sum_x A_x op A_x on a single qubit."""
    return sum(a @ op @ a for a in family.observables) / family.m


def pair_norm_on_phi_plus(family: ChainFamily, i: int) -> float:
    """||((A_i + A_{i+1}) x I)|Phi+>||_2."""
    v = np.kron(family.pair_sum(i), I2) @ PHI_PLUS_KET
    return float(np.linalg.norm(v))

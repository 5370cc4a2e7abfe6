"""Dense complex-matrix helpers for qubit states and dichotomic observables.

Everything here works on plain ``numpy.ndarray`` values of dtype complex128.
Matrices are small (at most a few qubits), so all checks are done with dense
routines.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
INVOLUTION_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_TOL = 1e-10
IMAG_TOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PHI_PLUS_KET = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    d = a.shape[0]
    if d < 1 or d & (d - 1):
        raise ValueError(f"dimension {d} is not a power of 2")
    return a


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_observable(m, tol: float = INVOLUTION_TOL) -> bool:
    """True when ``m`` is Hermitian and squares to the identity."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[0])
    return is_hermitian(a, tol) and bool(np.max(np.abs(a @ a - eye)) <= tol)


def check_observable(m) -> np.ndarray:
    a = as_matrix(m)
    if not is_observable(a):
        raise ValueError("matrix is not a Hermitian involution")
    return a


def is_density(rho, tol: float = TRACE_TOL, eig_tol: float = EIG_TOL) -> bool:
    a = np.asarray(rho, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if not is_hermitian(a, tol) or abs(np.trace(a) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(a).min() >= -eig_tol)


def check_density(rho) -> np.ndarray:
    a = as_matrix(rho)
    if not is_density(a):
        raise ValueError("matrix is not a valid density operator")
    return a


def pauli_plane_observable(theta: float) -> np.ndarray:
    """cos(theta) sigma_z + sin(theta) sigma_x, Bloch vector (sin t, 0, cos t)."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    return np.cos(theta) * SZ + np.sin(theta) * SX


def pauli_plane_batch(thetas) -> np.ndarray:
    """Stack of x-z plane observables, shape ``thetas.shape + (2, 2)``."""
    t = np.asarray(thetas, dtype=float)
    c, s = np.cos(t), np.sin(t)
    out = np.empty(t.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = s
    out[..., 1, 1] = -c
    return out


def tensor(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of ``factors`` in order."""
    if len(factors) == 0:
        raise ValueError("tensor() needs at least one factor")
    return reduce(np.kron, [np.asarray(f, dtype=np.complex128) for f in factors])


def expectation(state, obs) -> float:
    """Re tr(state @ obs); rejects a non-negligible imaginary part."""
    rho = np.asarray(state)
    o = np.asarray(obs)
    if rho.shape != o.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape} vs observable {o.shape}")
    # tr(AB) without forming the product
    val = np.einsum("ij,ji->", rho, o)
    if abs(val.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def ket_to_density(ket) -> np.ndarray:
    v = np.asarray(ket, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def permute_subsystems(rho, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of an operator.

    ``perm[k]`` names which original subsystem ends up in slot ``k``.
    """
    dims = list(dims)
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"invalid permutation {perm}")
    a = np.asarray(rho).reshape(dims + dims)
    axes = list(perm) + [p + n for p in perm]
    d = int(np.prod(dims))
    return a.transpose(axes).reshape(d, d)


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    a = np.asarray(rho).reshape(dims + dims)
    drop = [k for k in range(n) if k not in keep]
    # trace out from the highest index so earlier axis numbers stay valid
    for k in sorted(drop, reverse=True):
        nk = a.ndim // 2
        a = np.trace(a, axis1=k, axis2=k + nk)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return a.reshape(dk, dk)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed random density matrix."""
    r = dim if rank is None else rank
    g = rng.normal(size=(dim, r)) + 1j * rng.normal(size=(dim, r))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

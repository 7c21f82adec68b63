"""State vectors and density matrices on (d path modes) x (2 polarizations).

Basis ordering is fixed throughout the package: the flat index of
``|mode, pol>`` is ``2 * mode + polbit`` with ``H -> 0`` and ``V -> 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidModeError,
    NotUnitaryError,
)

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
PSD_FLOOR = -1e-10


class Pol(enum.Enum):
    H = 0
    V = 1

    @property
    def bit(self) -> int:
        return self.value

    def other(self) -> "Pol":
        return Pol.V if self is Pol.H else Pol.H


@dataclass(frozen=True, order=True)
class BasisLabel:
    mode: int
    pol: Pol

    def index(self) -> int:
        return 2 * self.mode + self.pol.bit

    @classmethod
    def from_index(cls, k: int) -> "BasisLabel":
        return cls(k // 2, Pol(k % 2))

    def __str__(self) -> str:
        return f"{self.mode},{self.pol.name}"


def basis_labels(d: int) -> Iterator[BasisLabel]:
    for k in range(2 * d):
        yield BasisLabel.from_index(k)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"path-mode count must be an integer >= 2, got {d}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector of length ``2 * d``."""

    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_dim(self.d)
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (2 * self.d,):
            raise DimensionMismatchError(
                f"expected {2 * self.d} amplitudes for d={self.d}, got {amps.shape[0]}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, d: int, mode: int, pol: Pol) -> "PureState":
        _check_mode(mode, d)
        amps = np.zeros(2 * d, dtype=complex)
        amps[BasisLabel(mode, pol).index()] = 1.0
        return cls(d, amps)

    @classmethod
    def normalized(cls, d: int, amplitudes) -> "PureState":
        """Build a state from an unnormalized vector."""
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm < NORM_TOL:
            raise ValueError("cannot normalize the zero vector")
        return cls(d, amps / norm)

    def amplitude(self, mode: int, pol: Pol) -> complex:
        return complex(self.amplitudes[BasisLabel(mode, pol).index()])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``(d, 2)``: rows are modes, columns H/V."""
        return self.amplitudes.reshape(self.d, 2)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator."""

    entries: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(rho)) < PSD_FLOOR:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def _check_mode(mode: int, d: int) -> None:
    if not 0 <= mode < d:
        raise InvalidModeError(f"mode {mode} out of range for d={d}")


def pol_vector(pol: Pol) -> np.ndarray:
    v = np.zeros(2, dtype=complex)
    v[pol.bit] = 1.0
    return v


def tensor(path: np.ndarray, pol: np.ndarray) -> np.ndarray:
    """Kronecker product path (x) polarization in the package's index order."""
    return np.kron(np.asarray(path, dtype=complex), np.asarray(pol, dtype=complex))


def source_state(alpha: float, mode: int = 0, d: int = 2) -> PureState:
    """``sin(alpha)|mode,H> + cos(alpha)|mode,V>``."""
    _check_dim(d)
    _check_mode(mode, d)
    amps = np.zeros(2 * d, dtype=complex)
    amps[2 * mode] = np.sin(alpha)
    amps[2 * mode + 1] = np.cos(alpha)
    return PureState(d, amps)


def particle_state(theta: float, d: int = 2) -> np.ndarray:
    """Path vector ``(|0> + e^{i theta}|1>) / sqrt(2)``."""
    _check_dim(d)
    v = np.zeros(d, dtype=complex)
    v[0] = 1.0
    v[1] = np.exp(1j * theta)
    return v / np.sqrt(2.0)


def wave_state(theta: float, d: int = 2) -> np.ndarray:
    """Path vector ``e^{i theta/2}(cos(theta/2)|0> - i sin(theta/2)|1>)``.

    The global phase is kept; compare states with ``overlap`` when it
    should not matter.
    """
    _check_dim(d)
    v = np.zeros(d, dtype=complex)
    v[0] = np.cos(theta / 2)
    v[1] = -1j * np.sin(theta / 2)
    return np.exp(0.5j * theta) * v


def is_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) < tol)


def apply_unitary(state: PureState, U) -> PureState:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2 * state.d, 2 * state.d):
        raise DimensionMismatchError(
            f"operator shape {U.shape} does not act on a {2 * state.d}-dim state"
        )
    if not is_unitary(U):
        raise NotUnitaryError("operator is not unitary within tolerance")
    out = U @ state.amplitudes
    # rounding drift only; keeps long element chains inside the norm invariant
    return PureState(state.d, out / np.linalg.norm(out))


def inner(a: PureState, b: PureState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.d != b.d:
        raise DimensionMismatchError(f"dimension mismatch: d={a.d} vs d={b.d}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def overlap(a, b) -> float:
    """Phase-insensitive fidelity amplitude ``|<a|b>|`` for states or raw vectors."""
    va = a.amplitudes if isinstance(a, PureState) else np.asarray(a, dtype=complex)
    vb = b.amplitudes if isinstance(b, PureState) else np.asarray(b, dtype=complex)
    if va.shape != vb.shape:
        raise DimensionMismatchError(f"shape mismatch: {va.shape} vs {vb.shape}")
    return float(abs(np.vdot(va, vb)))


def to_density(state: PureState) -> DensityMatrix:
    return DensityMatrix(np.outer(state.amplitudes, state.amplitudes.conj()))


def partial_trace_pol(rho: DensityMatrix) -> DensityMatrix:
    """Trace out polarization: ``(rho_path)_{mn} = sum_p rho_{(m,p),(n,p)}``."""
    n = rho.dim
    if n % 2:
        raise DimensionMismatchError(f"cannot trace polarization from odd dimension {n}")
    d = n // 2
    r = rho.entries.reshape(d, 2, d, 2)
    return DensityMatrix(np.einsum("mpnp->mn", r))

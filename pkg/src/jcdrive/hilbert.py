"""Truncated Hilbert space and operator construction for a driven cavity-QED system.

The system is a single bosonic cavity mode coupled to a single two-level atom
(Jaynes-Cummings model). The bosonic mode is truncated at a maximum Fock
occupancy ``n_max``; the composite basis is ordered photon-major,

    index = 2*n + q,   n = 0..n_max photons,  q = 0 (ground) / 1 (excited),

so serialized matrices are comparable across runs. All constructors are pure
functions returning plain complex ndarrays; results are safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """Operator/state dimensions do not match."""


@dataclass(frozen=True)
class SpaceConfig:
    """Truncated Fock ⊗ qubit space with ``dim = 2*(n_max+1)``."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, n: int, q: int) -> int:
        """Basis index of |n photons, q> with q = 0 (ground) or 1 (excited)."""
        if not (0 <= n <= self.n_max and q in (0, 1)):
            raise ValueError(f"no basis state (n={n}, q={q}) for n_max={self.n_max}")
        return 2 * n + q

    def levels(self, index: int) -> tuple[int, int]:
        """Inverse of :meth:`index`: returns (n, q)."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} outside dimension {self.dim}")
        return index // 2, index % 2


@dataclass(frozen=True)
class SystemParams:
    """Rates and frequencies of the coupled cavity-atom system.

    All quantities are angular frequencies / rates in one common set of
    natural units (e.g. kappa = 1). Frequencies are interpreted in whatever
    rotating frame the caller has chosen; see ``pulses.FrameConfig``.

    omega_c : cavity mode frequency
    omega_a : atom transition frequency
    g       : coherent atom-cavity coupling rate (real, >= 0)
    kappa   : cavity energy decay rate (>= 0)
    gamma   : atom energy decay rate (>= 0)
    """

    omega_c: float
    omega_a: float
    g: float
    kappa: float
    gamma: float

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def annihilation(space: SpaceConfig) -> np.ndarray:
    """Photon annihilation operator a on the composite space.

    Matrix elements <n-1, q| a |n, q> = sqrt(n). On the truncated space the
    commutator [a, a^dag] equals the identity except on the top Fock level,
    where it equals -n_max (standard truncation artifact).
    """
    n_fock = space.n_max + 1
    a = np.diag(np.sqrt(np.arange(1, n_fock)), k=1).astype(complex)
    return np.kron(a, np.eye(2, dtype=complex))


def number_operator(space: SpaceConfig) -> np.ndarray:
    """Photon number operator a^dag a."""
    a = annihilation(space)
    return a.conj().T @ a


def lowering(space: SpaceConfig) -> np.ndarray:
    """Atomic lowering operator sigma = |g><e|, identity on photon number."""
    sm = np.array([[0, 1], [0, 0]], dtype=complex)
    return np.kron(np.eye(space.n_max + 1, dtype=complex), sm)


def pauli_z(space: SpaceConfig) -> np.ndarray:
    """sigma_z = sigma^dag sigma - sigma sigma^dag."""
    s = lowering(space)
    return s.conj().T @ s - s @ s.conj().T


def atom_population(space: SpaceConfig) -> np.ndarray:
    """Excited-state projector N = sigma^dag sigma = (sigma_z + 1)/2."""
    s = lowering(space)
    return s.conj().T @ s


def jc_hamiltonian(params: SystemParams, space: SpaceConfig) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian.

        H = omega_c a^dag a + omega_a sigma^dag sigma
            + i g (a^dag sigma - sigma^dag a)

    Hermitian by construction. At resonance the n-excitation manifold has
    eigenvalues n*omega_c ± g*sqrt(n) (polariton ladder).
    """
    a = annihilation(space)
    s = lowering(space)
    ad, sd = a.conj().T, s.conj().T
    h = (
        params.omega_c * (ad @ a)
        + params.omega_a * (sd @ s)
        + 1j * params.g * (ad @ s - sd @ a)
    )
    # symmetrize away the last bits of float asymmetry
    return 0.5 * (h + h.conj().T)


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    """Expectation value trace(op @ rho)."""
    if rho.shape != op.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(
            f"shape mismatch: rho {rho.shape} vs operator {op.shape}"
        )
    # trace of a product without forming it
    return complex(np.sum(op.T * rho))


def basis_state(space: SpaceConfig, n: int, q: int) -> np.ndarray:
    """Ket |n, q> as a dense vector."""
    psi = np.zeros(space.dim, dtype=complex)
    psi[space.index(n, q)] = 1.0
    return psi


def vacuum_state(space: SpaceConfig) -> np.ndarray:
    """Density matrix |0, g><0, g| (empty cavity, atom in ground state)."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def displacement_operator(space: SpaceConfig, alpha: complex) -> np.ndarray:
    """Truncated displacement operator D(alpha) = expm(alpha a^dag - alpha* a).

    Exactly unitary on the truncated space. Matrix elements approximate the
    infinite-dimensional displacement well only while the displaced Poisson
    distribution fits below the cutoff, |alpha|^2 + a few sqrt(|alpha|^2)
    below n_max.
    """
    from scipy.linalg import expm

    a = annihilation(space)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)

"""Pure states, density matrices, partial traces, and Bloch-sphere averages.

Conventions used throughout the package:

- qubit 0 is the leftmost ket label and the most significant bit of the
  amplitude index, so |q0 q1 ... q_{n-1}> lives at index sum_i q_i * 2**(n-1-i);
- a single-qubit pair (alpha, beta) means alpha|0> + beta|1>;
- tolerances: ATOL (1e-12) for exact algebraic identities, QUAD_TOL (1e-6)
  for Bloch-sphere quadrature results.

All objects are immutable after construction and all operations are pure
functions, so values are safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

ATOL = 1e-12
QUAD_TOL = 1e-6
MAX_QUBITS = 10

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BlochAngles:
    """Bloch-sphere coordinates: polar theta in [0, pi], azimuth phi in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class PureState:
    """Normalized complex amplitude vector over n qubits, 1 <= n <= 10."""

    __slots__ = ("_amps", "_n")

    def __init__(self, amps: Sequence[complex] | np.ndarray):
        a = np.array(amps, dtype=complex)
        if a.ndim != 1 or a.size < 2 or a.size & (a.size - 1):
            raise ValueError(f"amplitude vector length must be a power of two >= 2, got shape {a.shape}")
        n = a.size.bit_length() - 1
        if n > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits supported, got {n}")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("amplitudes must be finite")
        norm_sq = float(np.sum(np.abs(a) ** 2))
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"state is not normalized: sum |amp|^2 = {norm_sq!r}")
        self._amps = _readonly(a)
        self._n = n

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.size

    @classmethod
    def basis(cls, n_qubits: int, bits: Iterable[int] | int) -> "PureState":
        """Computational basis state, from an index or an iterable of bits (qubit 0 first)."""
        dim = 2**n_qubits
        if isinstance(bits, int):
            index = bits
        else:
            index = 0
            bits = tuple(bits)
            if len(bits) != n_qubits:
                raise ValueError(f"expected {n_qubits} bits, got {len(bits)}")
            for b in bits:
                index = (index << 1) | (b & 1)
        if not (0 <= index < dim):
            raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a)

    def inner(self, other: "PureState") -> complex:
        """<self|other>."""
        if self._n != other._n:
            raise ValueError("qubit counts differ")
        return complex(np.vdot(self._amps, other._amps))

    def __repr__(self) -> str:
        return f"PureState(n_qubits={self._n}, amps={np.array2string(self._amps, precision=6)})"


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on 1..10 qubits."""

    __slots__ = ("_entries", "_n")

    def __init__(self, entries: np.ndarray, _trusted_psd: bool = False):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2 or m.shape[0] & (m.shape[0] - 1):
            raise ValueError(f"entries must be a square matrix of power-of-two size, got {m.shape}")
        n = m.shape[0].bit_length() - 1
        if n > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits supported, got {n}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError("matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        if not _trusted_psd:
            lo = float(np.linalg.eigvalsh(m)[0])
            if lo < -ATOL:
                raise ValueError(f"matrix has a negative eigenvalue {lo!r}")
        self._entries = _readonly(m)
        self._n = n

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def bloch_state(angles: BlochAngles) -> PureState:
    """Single-qubit state with amplitudes (e^{i*phi} sin(theta/2), cos(theta/2))."""
    alpha = np.exp(1j * angles.phi) * math.sin(angles.theta / 2.0)
    beta = math.cos(angles.theta / 2.0)
    return PureState(np.array([alpha, beta]))


def conjugate_state(psi: PureState) -> PureState:
    """Entrywise complex conjugate of a state's amplitudes."""
    return PureState(np.conj(psi.amps))


def orthogonal_state(psi: PureState) -> PureState:
    """State orthogonal to a single-qubit state.

    Uses conjugated coefficients, conj(alpha)|1> - conj(beta)|0>, so the
    result is orthogonal for complex amplitudes as well; for real
    amplitudes this reduces to alpha|1> - beta|0>.
    """
    if psi.n_qubits != 1:
        raise ValueError("orthogonal_state expects a single-qubit state")
    alpha, beta = psi.amps
    return PureState(np.array([-np.conj(beta), np.conj(alpha)]))


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; a's qubits come first (most significant)."""
    if a.n_qubits + b.n_qubits > MAX_QUBITS:
        raise ValueError("tensor product exceeds the supported qubit count")
    return PureState(np.kron(a.amps, b.amps))


def density_of(psi: PureState) -> DensityMatrix:
    """Projector |psi><psi| as a density matrix."""
    return DensityMatrix(np.outer(psi.amps, psi.amps.conj()), _trusted_psd=True)


def _check_keep(n: int, keep: Sequence[int]) -> tuple[int, ...]:
    kept = tuple(keep)
    if not kept:
        raise ValueError("keep must name at least one qubit")
    if len(set(kept)) != len(kept):
        raise ValueError(f"duplicate qubit indices in keep: {kept}")
    for q in kept:
        if not (0 <= q < n):
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    return kept


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out all qubits not in `keep`; kept qubits appear in the given order."""
    n = rho.n_qubits
    kept = _check_keep(n, keep)
    t = rho.entries.reshape((2,) * (2 * n))
    row = list(range(n))
    col = list(range(n, 2 * n))
    for q in range(n):
        if q not in kept:
            col[q] = row[q]
    out = [row[q] for q in kept] + [col[q] for q in kept]
    reduced = np.einsum(t, row + col, out)
    d = 2 ** len(kept)
    return DensityMatrix(reduced.reshape(d, d), _trusted_psd=True)


def reduced_density(psi: PureState, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state; equals partial_trace(density_of(psi), keep)."""
    n = psi.n_qubits
    kept = _check_keep(n, keep)
    t = psi.amps.reshape((2,) * n)
    rest = [q for q in range(n) if q not in kept]
    m = np.transpose(t, kept + tuple(rest)).reshape(2 ** len(kept), -1)
    return DensityMatrix(m @ m.conj().T, _trusted_psd=True)


def state_fidelity(rho: DensityMatrix, psi: PureState) -> float:
    """<psi| rho |psi> as a real number."""
    if rho.dim != psi.dim:
        raise ValueError(f"dimension mismatch: rho is {rho.dim}, psi is {psi.dim}")
    return float(np.real(np.vdot(psi.amps, rho.entries @ psi.amps)))


def bloch_grid(n_theta: int, n_phi: int) -> Iterator[tuple[BlochAngles, float]]:
    """Quadrature nodes and weights for a uniform Bloch-sphere average.

    Gauss-Legendre in cos(theta) crossed with a uniform periodic grid in phi;
    weights sum to 1, so averaging is a plain weighted sum.
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("grid must be at least 2x2")
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    for u, w in zip(nodes, weights):
        theta = math.acos(float(u))
        for j in range(n_phi):
            yield BlochAngles(theta, TWO_PI * j / n_phi), float(w) / (2.0 * n_phi)


def average_fidelity(
    reduced_state_fn: Callable[[BlochAngles], DensityMatrix],
    n_theta: int = 64,
    n_phi: int = 64,
) -> float:
    """Bloch-sphere average of <psi_in| rho_out |psi_in> over all input states.

    `reduced_state_fn` maps input Bloch angles to the single-qubit output
    state whose overlap with the input is averaged.  Deterministic for a
    fixed grid; accuracy ~1e-6 at the default 64x64.
    """
    total = 0.0
    for angles, weight in bloch_grid(n_theta, n_phi):
        psi = bloch_state(angles)
        total += weight * state_fidelity(reduced_state_fn(angles), psi)
    return total


def states_equal_up_to_phase(a: PureState, b: PureState, tol: float = ATOL) -> bool:
    """True iff |<a|b>| >= 1 - tol, i.e. the states differ only by a global phase."""
    return abs(a.inner(b)) >= 1.0 - tol


def max_amplitude_error(target: PureState, candidate: PureState) -> float:
    """Largest entrywise deviation after aligning the candidate's global phase."""
    ip = complex(np.vdot(candidate.amps, target.amps))
    phase = ip / abs(ip) if abs(ip) > 1e-300 else 1.0
    return float(np.max(np.abs(target.amps - phase * candidate.amps)))

"""End-to-end cloning machine: mix, run a catalog circuit, reduce, compare.

For an input qubit alpha|0> + beta|1>, the machine tensors it with the
catalog row's prepared pair, applies the row's CNOT circuit, and should
produce

    (2 alpha|000> + beta|010> + alpha|011> + beta|100> + alpha|101>
     + 2 beta|111>) / sqrt(6),

whose copy qubits 0 and 1 each reduce to 5/6 rho_in + 1/6 rho_perp.

The ancilla qubit 2 tracks the complex conjugate of the input: its reduced
state is exactly 2/3 conj(rho_in) + 1/3 conj(rho_perp) for every input, so
its fidelity against the conjugated input is 2/3 pointwise.  Only for
real-amplitude inputs does that collapse to the unconjugated mixture
2/3 rho_in + 1/3 rho_perp; against the input itself the ancilla fidelity
deviates by (2/3)*Im(alpha*conj(beta)) and Bloch-averages to 5/9.  The
module exposes the machine, the optimal-output reference state, mixture
residuals, and Bloch-averaged fidelities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prep import CatalogRow, catalog_rows, prepare_state, solve_angles
from .states import (
    BlochAngles,
    DensityMatrix,
    PureState,
    bloch_grid,
    bloch_state,
    conjugate_state,
    reduced_density,
    state_fidelity,
    states_equal_up_to_phase,
    tensor,
)

_SQRT6 = math.sqrt(6.0)


@dataclass(frozen=True)
class CloneResult:
    """Full machine output: the 3-qubit state, reduced states, and fidelities.

    f0 and f1 are the copy fidelities against the input and f2 the
    ancilla's; f2_conj measures the ancilla against the conjugated input,
    the state it actually tracks, and equals 2/3 for every input.
    """

    output: PureState
    rho0: DensityMatrix
    rho1: DensityMatrix
    rho2: DensityMatrix
    f0: float
    f1: float
    f2: float
    f2_conj: float


def mix_input(psi: PureState, prep: PureState) -> PureState:
    """Tensor the input qubit (as qubit 0) with the prepared two-qubit state."""
    if psi.n_qubits != 1 or prep.n_qubits != 2:
        raise ValueError("mix_input expects a 1-qubit input and a 2-qubit prepared state")
    return tensor(psi, prep)


def expected_output(psi: PureState) -> PureState:
    """The optimal 3-qubit cloning output for a 1-qubit input."""
    if psi.n_qubits != 1:
        raise ValueError("expected_output takes a single-qubit state")
    alpha, beta = psi.amps
    amps = np.array([2 * alpha, 0.0, beta, alpha, beta, alpha, 0.0, 2 * beta]) / _SQRT6
    return PureState(amps)


_rows_cache: list[CatalogRow] | None = None
_kernel_cache: dict[tuple[int, str], tuple[np.ndarray, np.ndarray]] = {}


def _rows() -> list[CatalogRow]:
    global _rows_cache
    if _rows_cache is None:
        _rows_cache = catalog_rows()
    return _rows_cache


def _kernel(row: int, variant: str) -> tuple[np.ndarray, np.ndarray]:
    """Cached (prepared amplitudes, circuit permutation) for a catalog cell.

    Built once per (row, variant): picks the solver solution matching the
    row's documented sign pattern, runs the preparation circuit, and checks
    the full machine against the optimal output on two reference inputs.
    """
    if row < 1 or row > 12:
        raise ValueError(f"row must be 1..12, got {row}")
    if variant not in ("upper", "lower"):
        raise ValueError(f"variant must be 'upper' or 'lower', got {variant!r}")
    key = (row, variant)
    if key in _kernel_cache:
        return _kernel_cache[key]

    cat = _rows()[row - 1]
    pattern = cat.sign_pattern(variant)
    solutions = solve_angles(cat.coefficients)
    ordered = [s for s in solutions if s.matches_sign_pattern(pattern)]
    ordered += [s for s in solutions if s not in ordered]
    perm = cat.circuit(variant).permutation()
    target = cat.coefficients.as_array()
    references = [PureState.basis(1, 0), bloch_state(BlochAngles(1.1, 2.2))]
    for sol in ordered:
        prep_amps = prepare_state(sol).amps
        if np.max(np.abs(prep_amps - target)) > 1e-12:
            continue
        ok = True
        for ref in references:
            out = np.empty(8, dtype=complex)
            out[perm] = np.kron(ref.amps, prep_amps)
            if not states_equal_up_to_phase(PureState(out), expected_output(ref)):
                ok = False
                break
        if ok:
            cache_entry = (prep_amps.astype(complex), perm)
            _kernel_cache[key] = cache_entry
            return cache_entry
    raise RuntimeError(f"no solver solution reproduces the optimal output for row {row} {variant}")


def run_machine(psi: PureState, row: int, variant: str = "upper") -> CloneResult:
    """Clone one input state with a catalog circuit and reduce the output."""
    if psi.n_qubits != 1:
        raise ValueError("run_machine takes a single-qubit input")
    prep_amps, perm = _kernel(row, variant)
    out_amps = np.empty(8, dtype=complex)
    out_amps[perm] = np.kron(psi.amps, prep_amps)
    output = PureState(out_amps)
    rho0 = reduced_density(output, (0,))
    rho1 = reduced_density(output, (1,))
    rho2 = reduced_density(output, (2,))
    return CloneResult(
        output=output,
        rho0=rho0,
        rho1=rho1,
        rho2=rho2,
        f0=state_fidelity(rho0, psi),
        f1=state_fidelity(rho1, psi),
        f2=state_fidelity(rho2, psi),
        f2_conj=state_fidelity(rho2, conjugate_state(psi)),
    )


def mixture_residual(rho_out: DensityMatrix, rho_in: DensityMatrix, rho_perp: DensityMatrix, lam: float) -> float:
    """Max-entry deviation of rho_out from lam*rho_in + (1-lam)*rho_perp."""
    if not (rho_out.dim == rho_in.dim == rho_perp.dim):
        raise ValueError("density matrices must share a dimension")
    mix = lam * rho_in.entries + (1.0 - lam) * rho_perp.entries
    return float(np.max(np.abs(rho_out.entries - mix)))


def machine_average_fidelities(
    row: int, variant: str = "upper", n_theta: int = 64, n_phi: int = 64
) -> tuple[float, float, float]:
    """Bloch-averaged fidelities (copy 0, copy 1, ancilla) for one catalog cell.

    The copies are measured against the input state and average 5/6; the
    ancilla is measured against the conjugated input, the state it tracks,
    and averages 2/3 (measured against the input itself it would average
    5/9; see the module docstring).  One vectorized pass over the
    quadrature grid: every node's machine run is a permutation of a
    Kronecker product, and the reduced density matrices come from batched
    2x4 reshapes of the output.
    """
    prep_amps, perm = _kernel(row, variant)
    nodes = list(bloch_grid(n_theta, n_phi))
    weights = np.array([w for _, w in nodes])
    theta = np.array([a.theta for a, _ in nodes])
    phi = np.array([a.phi for a, _ in nodes])
    psi = np.stack([np.exp(1j * phi) * np.sin(theta / 2), np.cos(theta / 2) + 0j], axis=1)

    mix = psi[:, :, None] * prep_amps[None, None, :]  # (N, 2, 4)
    out = np.empty((len(nodes), 8), dtype=complex)
    out[:, perm] = mix.reshape(len(nodes), 8)
    cube = out.reshape(-1, 2, 2, 2)

    fids = []
    for qubit in range(3):
        m = np.moveaxis(cube, qubit + 1, 1).reshape(-1, 2, 4)
        rho = m @ m.conj().transpose(0, 2, 1)
        ref = psi.conj() if qubit < 2 else psi
        f = np.einsum("ni,nij,nj->n", ref, rho, ref.conj()).real
        fids.append(float(weights @ f))
    return tuple(fids)

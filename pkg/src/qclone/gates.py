"""Reversible gates on basis indices: planar rotations, CNOTs, and programs.

A CNOT permutes computational basis states: target' = target XOR control.
Either leg may carry an inversion flag (rendered in gate labels with a 'b'
suffix, e.g. P_{1b 0}).  A flag means the flagged qubit is passed through
NOT before the CNOT acts, the composition

    P_{c tb} = P_{c t} * N_t,

where N is the bit flip (the quarter-turn planar rotation, up to a sign
that is unobservable at the density-matrix level).  An inverted control
therefore fires on the flipped control bit and flips the control's own
value in the output; an inverted target flips the target before the XOR.
On a basis index this is pure bit arithmetic:

    control' = control XOR ic
    target'  = target XOR it XOR control XOR ic

where ic/it are the inversion flags.  No matrices are ever materialized;
programs act on index arrays, so applying a program to a state vector is
a single fancy-indexing permutation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .states import PureState


@dataclass(frozen=True)
class Rotation:
    """Real planar rotation [[cos, -sin], [sin, cos]] acting on one qubit."""

    cos: float
    sin: float

    def __post_init__(self) -> None:
        r = self.cos * self.cos + self.sin * self.sin
        if abs(r - 1.0) > 1e-12:
            raise ValueError(f"(cos, sin) must lie on the unit circle, got cos^2+sin^2 = {r!r}")

    @classmethod
    def from_angle(cls, angle: float) -> "Rotation":
        return cls(float(np.cos(angle)), float(np.sin(angle)))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.cos, -self.sin], [self.sin, self.cos]])


# Quarter-turn rotation: maps |0> -> |1> and |1> -> -|0>, the bit flip up
# to a sign invisible in any density matrix; realizes inverted CNOT legs.
NOT_ROTATION = Rotation(0.0, 1.0)


@dataclass(frozen=True)
class CnotGate:
    """CNOT with optional inversion flags on either leg.

    `control` and `target` are qubit positions (0 = leftmost ket label).
    """

    control: int
    target: int
    invert_control: bool = False
    invert_target: bool = False

    def __post_init__(self) -> None:
        if self.control < 0 or self.target < 0:
            raise ValueError("qubit indices must be non-negative")
        if self.control == self.target:
            raise ValueError("control and target must differ")

    def apply_index(self, index: int, n_qubits: int) -> int:
        """Image of a basis index under the gate."""
        cmask = 1 << (n_qubits - 1 - self.control)
        tmask = 1 << (n_qubits - 1 - self.target)
        cbit = (index & cmask) != 0
        new = index
        if self.invert_control:
            new ^= cmask
            cbit = not cbit
        if cbit != self.invert_target:
            new ^= tmask
        return new

    def label(self) -> str:
        """Subscript-style name, e.g. 'P_{0 1}' or 'P_{1b 2}' for an inverted control."""
        c = f"{self.control}b" if self.invert_control else f"{self.control}"
        t = f"{self.target}b" if self.invert_target else f"{self.target}"
        return f"P_{{{c} {t}}}"


@dataclass(frozen=True)
class NotGate:
    """Standalone bit flip of one qubit (the quarter-turn rotation on indices)."""

    target: int

    def __post_init__(self) -> None:
        if self.target < 0:
            raise ValueError("qubit index must be non-negative")

    def apply_index(self, index: int, n_qubits: int) -> int:
        return index ^ (1 << (n_qubits - 1 - self.target))

    def label(self) -> str:
        return f"N_{{{self.target}}}"


Gate = Union[CnotGate, NotGate]


class CnotProgram:
    """Sequence of CNOT/NOT gates stored in application order (first gate first).

    The printed product notation lists the last-applied gate leftmost, the
    usual operator-composition order.
    """

    def __init__(self, gates: Iterable[Gate], n_qubits: int):
        gs = tuple(gates)
        for g in gs:
            top = max(g.control, g.target) if isinstance(g, CnotGate) else g.target
            if top >= n_qubits:
                raise ValueError(f"gate {g.label()} references qubit {top} but the program has {n_qubits} qubits")
        self._gates = gs
        self._n = int(n_qubits)

    @property
    def gates(self) -> tuple[Gate, ...]:
        return self._gates

    @property
    def n_qubits(self) -> int:
        return self._n

    def __len__(self) -> int:
        return len(self._gates)

    def apply_index(self, index: int) -> int:
        for g in self._gates:
            index = g.apply_index(index, self._n)
        return index

    def permutation(self) -> np.ndarray:
        """Array p with p[old_index] = new_index for every basis index."""
        p = np.arange(2**self._n)
        for g in self._gates:
            if isinstance(g, NotGate):
                p ^= 1 << (self._n - 1 - g.target)
            else:
                cmask = 1 << (self._n - 1 - g.control)
                tmask = 1 << (self._n - 1 - g.target)
                cbit = (p & cmask) != 0
                fire = cbit != g.invert_target
                if g.invert_control:
                    fire = ~fire
                    p = p ^ cmask
                p = np.where(fire, p ^ tmask, p)
        return p

    def product_notation(self) -> str:
        """Right-to-left product string, last-applied gate first; 'I' if empty."""
        if not self._gates:
            return "I"
        return " ".join(g.label() for g in reversed(self._gates))

    def __repr__(self) -> str:
        return f"CnotProgram(n_qubits={self._n}, {self.product_notation()})"


def apply_rotation(psi: PureState, qubit: int, rot: Rotation) -> PureState:
    """Apply a single-qubit planar rotation to `qubit` of a multi-qubit state."""
    n = psi.n_qubits
    if not (0 <= qubit < n):
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    t = psi.amps.reshape((2,) * n)
    t = np.moveaxis(t, qubit, 0)
    out = np.empty_like(t)
    out[0] = rot.cos * t[0] - rot.sin * t[1]
    out[1] = rot.sin * t[0] + rot.cos * t[1]
    return PureState(np.moveaxis(out, 0, qubit).reshape(-1))


def apply_cnot(psi: PureState, gate: Gate) -> PureState:
    """Apply one CNOT/NOT gate to a state."""
    return apply_program(psi, CnotProgram([gate], psi.n_qubits))


def apply_program(psi: PureState, program: CnotProgram) -> PureState:
    """Apply a gate program to a state by permuting its amplitudes."""
    if program.n_qubits != psi.n_qubits:
        raise ValueError("program and state have different qubit counts")
    p = program.permutation()
    out = np.empty_like(psi.amps)
    out[p] = psi.amps
    return PureState(out)

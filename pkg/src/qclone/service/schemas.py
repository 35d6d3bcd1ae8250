"""Pydantic request/response models shared by the HTTP service and the CLI.

Every response model carries a `schema_version` field serialized as
`"schema": 1` so payloads stay parseable across releases.  Gate lists use
the CircuitDocument layout: gates in application order, each with control,
target, and the two inversion flags.
"""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..boolsynth import TruthTable
from ..gates import CnotGate, CnotProgram, NotGate
from ..prep import AngleTriple

SCHEMA_VERSION = 1


class VersionedModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")


class GateModel(BaseModel):
    """One CNOT in a serialized circuit; a NOT is its degenerate single-leg form."""

    model_config = ConfigDict(populate_by_name=True)

    control: int | None = None
    target: int
    invert_control: bool = False
    invert_target: bool = False

    @classmethod
    def from_gate(cls, gate: CnotGate | NotGate) -> "GateModel":
        if isinstance(gate, NotGate):
            return cls(control=None, target=gate.target, invert_target=True)
        return cls(
            control=gate.control,
            target=gate.target,
            invert_control=gate.invert_control,
            invert_target=gate.invert_target,
        )

    def to_gate(self) -> CnotGate | NotGate:
        if self.control is None:
            if self.invert_control or not self.invert_target:
                raise ValueError("a controlless gate must be a plain NOT (invert_target only)")
            return NotGate(self.target)
        return CnotGate(self.control, self.target, self.invert_control, self.invert_target)


class CircuitDocument(VersionedModel):
    """Serialized gate program; `order` is always 'application' (first gate first)."""

    n_qubits: int
    order: str = "application"
    gates: list[GateModel]
    product_notation: str = ""

    @classmethod
    def from_program(cls, prog: CnotProgram) -> "CircuitDocument":
        return cls(
            n_qubits=prog.n_qubits,
            gates=[GateModel.from_gate(g) for g in prog.gates],
            product_notation=prog.product_notation(),
        )

    def to_program(self) -> CnotProgram:
        if self.order != "application":
            raise ValueError(f"unsupported gate order {self.order!r}")
        return CnotProgram([g.to_gate() for g in self.gates], self.n_qubits)


class ComplexPair(BaseModel):
    re: float
    im: float


def complex_list(values) -> list[ComplexPair]:
    return [ComplexPair(re=float(v.real), im=float(v.imag)) for v in values]


class SolveRequest(BaseModel):
    coeffs: list[float] = Field(min_length=4, max_length=4)


class AngleSolutionModel(BaseModel):
    cos: list[float]
    sin: list[float]
    cos_squares: list[float]
    sign_pattern: str
    residual: float

    @classmethod
    def from_triple(cls, triple: AngleTriple, residual: float) -> "AngleSolutionModel":
        cos = [c for c, _ in triple.pairs]
        sin = [s for _, s in triple.pairs]
        marks = "".join("+" if c >= 0 else "-" for c in cos) + "," + "".join("+" if s >= 0 else "-" for s in sin)
        return cls(
            cos=cos,
            sin=sin,
            cos_squares=list(triple.cos_squares),
            sign_pattern=f"({marks})",
            residual=residual,
        )


class SolveResponse(VersionedModel):
    coeffs: list[float]
    normalized: bool
    solutions: list[AngleSolutionModel]


class SynthRequest(BaseModel):
    table: str
    all_completions: bool = False


class CompletionModel(BaseModel):
    table: list[str]
    matrix: list[list[int]]
    affine: list[int]
    circuit: CircuitDocument
    verified: bool


class SynthResponse(VersionedModel):
    n: int
    completions: list[CompletionModel]
    diagnostics: list[str] = []


class CloneRequest(BaseModel):
    theta: float
    phi: float
    row: int = 1
    variant: str = "upper"


class DensityModel(BaseModel):
    entries: list[list[ComplexPair]]


class CloneResponse(VersionedModel):
    row: int
    variant: str
    input_amps: list[ComplexPair]
    output_amps: list[ComplexPair]
    rho0: DensityModel
    rho1: DensityModel
    rho2: DensityModel
    f0: float
    f1: float
    f2: float
    f2_conj: float
    residual_copy0: float
    residual_copy1: float
    residual_ancilla_conj: float
    max_amplitude_error: float


class VerifyTableRequest(BaseModel):
    seed: int = 42
    samples: int = 100


class VerifyCellModel(BaseModel):
    row: int
    variant: str
    max_error: float
    passed: bool


class VerifyTableResponse(VersionedModel):
    seed: int
    samples: int
    cells: list[VerifyCellModel]
    all_passed: bool


class FidelityRequest(BaseModel):
    n_theta: int = 64
    n_phi: int = 64
    row: int = 1
    variant: str = "upper"


class FidelityResponse(VersionedModel):
    row: int
    variant: str
    grid: str
    f_copy0: float
    f_copy1: float
    f_ancilla: float


def truth_table_lines(t: TruthTable) -> list[str]:
    lines = []
    for i, row in enumerate(t.rows):
        out = "".join("*" if v is None else str(v) for v in row)
        lines.append(f"{format(i, f'0{t.n}b')} -> {out}")
    return lines

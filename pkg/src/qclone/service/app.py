"""FastAPI service exposing the solver, synthesizer, cloner, and verifier.

All endpoints are pure request/response over JSON; the CLI drives the same
app in-process through an ASGI transport, and `qclone serve` runs it under
uvicorn.  Domain errors surface as HTTP 422 with a machine-readable
`error` tag ('parse_error' for truth-table syntax, 'domain_error'
otherwise).
"""
from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..boolsynth import TableParseError, anf_of, enumerate_completions, is_affine, parse_truth_table, synthesize, verify_program
from ..cloner import expected_output, machine_average_fidelities, mixture_residual, run_machine
from ..prep import NoRealSolutionError, PrepCoefficients, eval_prep_equations, solve_angles
from ..states import (
    BlochAngles,
    bloch_state,
    conjugate_state,
    density_of,
    max_amplitude_error,
    orthogonal_state,
)
from .schemas import (
    AngleSolutionModel,
    CircuitDocument,
    CloneRequest,
    CloneResponse,
    CompletionModel,
    DensityModel,
    FidelityRequest,
    FidelityResponse,
    SolveRequest,
    SolveResponse,
    SynthRequest,
    SynthResponse,
    VerifyCellModel,
    VerifyTableRequest,
    VerifyTableResponse,
    complex_list,
    truth_table_lines,
)

NORMALIZE_TOL = 1e-9
PASS_TOL = 1e-12


def _density_model(rho) -> DensityModel:
    return DensityModel(entries=[complex_list(row) for row in rho.entries])


def create_app() -> FastAPI:
    app = FastAPI(title="qclone", version=__version__)

    @app.get("/api/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/v1/solve", response_model=SolveResponse, response_model_by_alias=True)
    def solve(req: SolveRequest) -> SolveResponse:
        raw = np.array(req.coeffs, dtype=float)
        norm = float(np.sqrt(np.sum(raw**2)))
        if not np.isfinite(norm) or norm == 0.0:
            raise HTTPException(422, detail={"error": "domain_error", "message": "coefficients must be finite and not all zero"})
        normalized = abs(norm - 1.0) > NORMALIZE_TOL
        c = raw / norm
        coeffs = PrepCoefficients(*c)
        try:
            solutions = solve_angles(coeffs)
        except NoRealSolutionError:
            solutions = []
        target = coeffs.as_array()
        models = []
        for s in solutions:
            residual = float(np.max(np.abs(eval_prep_equations(s).as_array() - target)))
            models.append(AngleSolutionModel.from_triple(s, residual))
        return SolveResponse(coeffs=[float(v) for v in c], normalized=normalized, solutions=models)

    @app.post("/api/v1/synthesize", response_model=SynthResponse, response_model_by_alias=True)
    def synthesize_table(req: SynthRequest) -> SynthResponse:
        try:
            table = parse_truth_table(req.table)
        except TableParseError as exc:
            raise HTTPException(422, detail={"error": "parse_error", "message": str(exc)})
        completions = enumerate_completions(table)
        diagnostics: list[str] = []
        if not completions:
            # name the monomials that block affinity, per output column, for
            # the all-zero don't-care assignment (a representative witness)
            rows = [tuple(0 if v is None else v for v in r) for r in table.rows]
            for j in range(table.n):
                p = anf_of([r[j] for r in rows])
                if not is_affine(p):
                    bad = [m for m in sorted(p.monomials, key=lambda m: (len(m), sorted(m))) if len(m) > 1]
                    terms = ", ".join("&".join(f"x{v}" for v in sorted(m)) for m in bad)
                    diagnostics.append(f"output {j} is nonlinear: degree-2+ monomials {terms}")
            if not diagnostics:
                diagnostics.append("no affine reversible completion exists for this table")
        if not req.all_completions:
            completions = completions[:1]
        models = []
        for comp in completions:
            prog = synthesize(comp.map)
            models.append(
                CompletionModel(
                    table=truth_table_lines(comp.table),
                    matrix=[list(r) for r in comp.map.matrix],
                    affine=list(comp.map.affine),
                    circuit=CircuitDocument.from_program(prog),
                    verified=verify_program(prog, comp.table),
                )
            )
        return SynthResponse(n=table.n, completions=models, diagnostics=diagnostics)

    @app.post("/api/v1/clone", response_model=CloneResponse, response_model_by_alias=True)
    def clone(req: CloneRequest) -> CloneResponse:
        try:
            angles = BlochAngles(req.theta, req.phi)
            psi = bloch_state(angles)
            result = run_machine(psi, req.row, req.variant)
        except ValueError as exc:
            raise HTTPException(422, detail={"error": "domain_error", "message": str(exc)})
        rho_in = density_of(psi)
        rho_perp = density_of(orthogonal_state(psi))
        psi_bar = conjugate_state(psi)
        rho_in_c = density_of(psi_bar)
        rho_perp_c = density_of(orthogonal_state(psi_bar))
        return CloneResponse(
            row=req.row,
            variant=req.variant,
            input_amps=complex_list(psi.amps),
            output_amps=complex_list(result.output.amps),
            rho0=_density_model(result.rho0),
            rho1=_density_model(result.rho1),
            rho2=_density_model(result.rho2),
            f0=result.f0,
            f1=result.f1,
            f2=result.f2,
            f2_conj=result.f2_conj,
            residual_copy0=mixture_residual(result.rho0, rho_in, rho_perp, 5 / 6),
            residual_copy1=mixture_residual(result.rho1, rho_in, rho_perp, 5 / 6),
            residual_ancilla_conj=mixture_residual(result.rho2, rho_in_c, rho_perp_c, 2 / 3),
            max_amplitude_error=max_amplitude_error(expected_output(psi), result.output),
        )

    @app.post("/api/v1/verify-table", response_model=VerifyTableResponse, response_model_by_alias=True)
    def verify_table(req: VerifyTableRequest) -> VerifyTableResponse:
        if req.samples < 1:
            raise HTTPException(422, detail={"error": "domain_error", "message": "samples must be >= 1"})
        rng = np.random.default_rng(req.seed)
        cells = []
        for row in range(1, 13):
            for variant in ("upper", "lower"):
                worst = 0.0
                for _ in range(req.samples):
                    psi = bloch_state(BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)))
                    out = run_machine(psi, row, variant).output
                    worst = max(worst, max_amplitude_error(expected_output(psi), out))
                cells.append(VerifyCellModel(row=row, variant=variant, max_error=worst, passed=worst <= PASS_TOL))
        return VerifyTableResponse(
            seed=req.seed, samples=req.samples, cells=cells, all_passed=all(c.passed for c in cells)
        )

    @app.post("/api/v1/fidelity", response_model=FidelityResponse, response_model_by_alias=True)
    def fidelity(req: FidelityRequest) -> FidelityResponse:
        if req.n_theta < 2 or req.n_phi < 2:
            raise HTTPException(422, detail={"error": "domain_error", "message": "grid must be at least 2x2"})
        try:
            f0, f1, f2 = machine_average_fidelities(req.row, req.variant, req.n_theta, req.n_phi)
        except ValueError as exc:
            raise HTTPException(422, detail={"error": "domain_error", "message": str(exc)})
        return FidelityResponse(
            row=req.row,
            variant=req.variant,
            grid=f"{req.n_theta}x{req.n_phi}",
            f_copy0=f0,
            f_copy1=f1,
            f_ancilla=f2,
        )

    return app


app = create_app()

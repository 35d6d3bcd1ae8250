"""Command-line front end.

The CLI is a thin client: every subcommand posts a request to the FastAPI
service in-process (no socket, no server) and formats the response, so the
command line and the HTTP API expose exactly the same behavior.  `qclone
serve` runs the same app under uvicorn.

Exit codes: 0 success, 2 empty result (no solutions, no completions, or a
failed verification sweep), 64 usage error, 65 unreadable/unparseable
truth-table data.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys

import httpx

from . import __version__
from .service.app import create_app

EXIT_OK = 0
EXIT_EMPTY = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70


class CliParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 64 instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _coeffs_arg(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated numbers, e.g. 0.8164966,0.4082483,0.4082483,0")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse {text!r} as four numbers")
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError("coefficients must be finite")
    return values


def _row_arg(text: str) -> int:
    try:
        row = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"row must be an integer, got {text!r}")
    if not 1 <= row <= 12:
        raise argparse.ArgumentTypeError(f"row must be between 1 and 12, got {row}")
    return row


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        n_theta, n_phi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x64, got {text!r}")
    if n_theta < 2 or n_phi < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2x2")
    return n_theta, n_phi


def _default_seed() -> int:
    try:
        return int(os.environ["QCLONE_SEED"])
    except (KeyError, ValueError):
        return 42


def _call_service(path: str, payload: dict) -> dict:
    """POST to the in-process app; map 422 responses onto CLI exit codes."""

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://qclone") as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(go())
    if resp.status_code == 200:
        return resp.json()
    if resp.status_code == 422:
        detail = resp.json().get("detail")
        if isinstance(detail, dict):
            message = detail.get("message", str(detail))
            code = EXIT_DATA if detail.get("error") == "parse_error" else EXIT_USAGE
        else:
            message = json.dumps(detail)
            code = EXIT_USAGE
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(code)
    print(f"error: service returned status {resp.status_code}", file=sys.stderr)
    raise SystemExit(EXIT_INTERNAL)


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _fmt_complex(entry: dict) -> str:
    return f"{entry['re']:+.9f}{entry['im']:+.9f}j"


def _fmt_density(rho: dict) -> str:
    rows = ["  [" + ", ".join(_fmt_complex(e) for e in row) + "]" for row in rho["entries"]]
    return "\n".join(rows)


def _fmt_gate(gate: dict) -> str:
    if gate["control"] is None:
        return f"NOT(target={gate['target']})"
    flags = []
    if gate["invert_control"]:
        flags.append("invert_control")
    if gate["invert_target"]:
        flags.append("invert_target")
    extra = ", " + ", ".join(flags) if flags else ""
    return f"CNOT(control={gate['control']}, target={gate['target']}{extra})"


def cmd_solve(args: argparse.Namespace) -> int:
    payload = _call_service("/api/v1/solve", {"coeffs": args.coeffs})
    if payload["normalized"]:
        print("warning: coefficients were not unit-norm; normalized before solving", file=sys.stderr)
    if args.json:
        _print_json(payload)
        return EXIT_OK if payload["solutions"] else EXIT_EMPTY
    c = payload["coeffs"]
    print("coefficients: " + ", ".join(f"C{i + 1}={v:.9f}" for i, v in enumerate(c)))
    if not payload["solutions"]:
        print("no angle triple reproduces these coefficients")
        return EXIT_EMPTY
    print(f"{len(payload['solutions'])} solution(s):")
    for i, sol in enumerate(payload["solutions"], start=1):
        thetas = [math.atan2(s, co) for co, s in zip(sol["cos"], sol["sin"])]
        cos2 = ", ".join(f"{v:.9f}" for v in sol["cos_squares"])
        angles = ", ".join(f"{t:.9f}" for t in thetas)
        print(f"  [{i}] cos^2 = ({cos2})  signs {sol['sign_pattern']}  residual {sol['residual']:.3e}")
        print(f"      theta = ({angles}) rad")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        with open(args.table, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read table file: {exc}", file=sys.stderr)
        return EXIT_DATA
    payload = _call_service("/api/v1/synthesize", {"table": text, "all_completions": args.all_completions})
    if args.json:
        _print_json(payload)
        return EXIT_OK if payload["completions"] else EXIT_EMPTY
    if not payload["completions"]:
        print("no affine reversible completion exists for this table", file=sys.stderr)
        for line in payload["diagnostics"]:
            print(f"  {line}", file=sys.stderr)
        return EXIT_EMPTY
    print(f"{len(payload['completions'])} completion(s) on {payload['n']} bits:")
    for i, comp in enumerate(payload["completions"], start=1):
        status = "verified" if comp["verified"] else "VERIFICATION FAILED"
        print(f"completion {i} ({status}):")
        for line in comp["table"]:
            print(f"  {line}")
        print("  matrix: " + "; ".join(",".join(str(v) for v in row) for row in comp["matrix"]))
        print("  affine: " + ",".join(str(v) for v in comp["affine"]))
        gates = comp["circuit"]["gates"]
        if gates:
            print("  circuit (application order): " + "; ".join(_fmt_gate(g) for g in gates))
        else:
            print("  circuit (application order): identity, no gates")
        print("  product notation: " + comp["circuit"]["product_notation"])
    return EXIT_OK


def cmd_clone(args: argparse.Namespace) -> int:
    payload = _call_service(
        "/api/v1/clone",
        {"theta": args.theta, "phi": args.phi, "row": args.row, "variant": args.variant},
    )
    if args.json:
        _print_json(payload)
        return EXIT_OK
    print(f"input theta={args.theta:.9f} phi={args.phi:.9f}, catalog row {args.row} ({args.variant})")
    print("input amplitudes: " + ", ".join(_fmt_complex(e) for e in payload["input_amps"]))
    print("output amplitudes:")
    for i, entry in enumerate(payload["output_amps"]):
        print(f"  |{i:03b}>  {_fmt_complex(entry)}")
    for name in ("rho0", "rho1", "rho2"):
        print(f"{name}:")
        print(_fmt_density(payload[name]))
    print(f"fidelity copy 0 vs input:   {payload['f0']:.9f}")
    print(f"fidelity copy 1 vs input:   {payload['f1']:.9f}")
    print(f"fidelity ancilla vs input:  {payload['f2']:.9f}")
    print(f"fidelity ancilla vs conj:   {payload['f2_conj']:.9f}")
    print(f"mixture residual copy 0 (5/6 input + 1/6 orthogonal):        {payload['residual_copy0']:.3e}")
    print(f"mixture residual copy 1 (5/6 input + 1/6 orthogonal):        {payload['residual_copy1']:.3e}")
    print(f"mixture residual ancilla (2/3 conjugate + 1/3 conj orth):    {payload['residual_ancilla_conj']:.3e}")
    print(f"max amplitude error vs expected output: {payload['max_amplitude_error']:.3e}")
    return EXIT_OK


def cmd_verify_table(args: argparse.Namespace) -> int:
    payload = _call_service("/api/v1/verify-table", {"seed": args.seed, "samples": args.samples})
    if args.json:
        _print_json(payload)
        return EXIT_OK if payload["all_passed"] else EXIT_EMPTY
    print(f"seed {payload['seed']}, {payload['samples']} random inputs per cell")
    passed = 0
    for cell in payload["cells"]:
        mark = "PASS" if cell["passed"] else "FAIL"
        passed += cell["passed"]
        print(f"row {cell['row']:2d} {cell['variant']:<5}  max amplitude error {cell['max_error']:.3e}  {mark}")
    print(f"{passed}/{len(payload['cells'])} cells passed")
    return EXIT_OK if payload["all_passed"] else EXIT_EMPTY


def cmd_fidelity(args: argparse.Namespace) -> int:
    n_theta, n_phi = args.grid
    payload = _call_service(
        "/api/v1/fidelity",
        {"n_theta": n_theta, "n_phi": n_phi, "row": args.row, "variant": args.variant},
    )
    if args.json:
        _print_json(payload)
        return EXIT_OK
    print(f"catalog row {payload['row']} ({payload['variant']}), quadrature grid {payload['grid']}")
    print(f"average fidelity copy 0:  {payload['f_copy0']:.9f}")
    print(f"average fidelity copy 1:  {payload['f_copy1']:.9f}")
    print(f"average fidelity ancilla (vs conjugated input): {payload['f_ancilla']:.9f}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> CliParser:
    parser = CliParser(prog="qclone", description="Qubit cloning machine: solver, synthesizer, verifier.")
    parser.add_argument("--version", action="version", version=f"qclone {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("solve", help="solve the preparation-angle system for target coefficients")
    p.add_argument("--coeffs", type=_coeffs_arg, required=True, metavar="C1,C2,C3,C4")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("synth", help="synthesize CNOT circuits from a truth-table file")
    p.add_argument("--table", required=True, metavar="FILE")
    p.add_argument("--all-completions", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("clone", help="run the cloning machine on one Bloch input")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--row", type=_row_arg, default=1)
    p.add_argument("--variant", choices=("upper", "lower"), default="upper")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_clone)

    p = sub.add_parser("verify-table", help="sweep all 12 rows and both variants on random inputs")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_table)

    p = sub.add_parser("fidelity", help="Bloch-averaged fidelities for one catalog cell")
    p.add_argument("--grid", type=_grid_arg, default=(64, 64), metavar="NxM")
    p.add_argument("--row", type=_row_arg, default=1)
    p.add_argument("--variant", choices=("upper", "lower"), default="upper")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

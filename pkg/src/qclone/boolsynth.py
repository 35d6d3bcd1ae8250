"""Boolean synthesis: truth tables -> ANF -> GF(2) maps -> CNOT programs.

Pipeline: a reversible n-bit specification arrives as a truth table whose
cells may contain don't-cares.  Each output column is converted to its
algebraic normal form (ANF, an XOR of AND-monomials) by the Moebius
butterfly over GF(2).  A map is realizable by CNOT/NOT gates exactly when
every column is affine (degree <= 1); the linear part is then a bit matrix
over GF(2) and the constant part an inversion vector.  Gaussian elimination
over GF(2) turns an invertible matrix into a CNOT program, and inversions
become target-inverted CNOTs or standalone NOTs.

Bit order matches the package convention: table row index i encodes input
bits big-endian, so input variable v is bit (n-1-v) of i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gates import CnotGate, CnotProgram, NotGate


class NotReversibleError(ValueError):
    """The linear map's matrix is singular over GF(2)."""


class TableParseError(ValueError):
    """A truth-table text document is malformed."""


DONT_CARE = None


@dataclass(frozen=True)
class TruthTable:
    """2^n rows of n-bit outputs; a cell is 0, 1, or None for don't-care."""

    n: int
    rows: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one variable")
        if len(self.rows) != 2**self.n:
            raise ValueError(f"expected {2**self.n} rows, got {len(self.rows)}")
        for r in self.rows:
            if len(r) != self.n or any(v not in (0, 1, None) for v in r):
                raise ValueError(f"bad row {r!r}")

    @property
    def has_dont_cares(self) -> bool:
        return any(v is None for r in self.rows for v in r)

    def column(self, j: int) -> tuple[int | None, ...]:
        return tuple(r[j] for r in self.rows)


@dataclass(frozen=True)
class AnfPolynomial:
    """XOR of AND-monomials; each monomial is a frozenset of variable indices."""

    n: int
    monomials: frozenset[frozenset[int]]

    def evaluate(self, bits: Sequence[int]) -> int:
        acc = 0
        for mono in self.monomials:
            term = 1
            for v in mono:
                term &= bits[v]
            acc ^= term
        return acc

    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        names = []
        for mono in sorted(self.monomials, key=lambda m: (len(m), sorted(m))):
            names.append("1" if not mono else "&".join(f"x{v}" for v in sorted(mono)))
        return " ^ ".join(names)


@dataclass(frozen=True)
class LinearMap:
    """Affine map over GF(2): out_j = XOR_i matrix[j][i] x_i XOR affine[j]."""

    matrix: tuple[tuple[int, ...], ...]
    affine: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.matrix)
        if n == 0 or any(len(r) != n for r in self.matrix) or len(self.affine) != n:
            raise ValueError("matrix must be square and match the affine vector")
        for v in itertools.chain(self.affine, *self.matrix):
            if v not in (0, 1):
                raise ValueError("entries must be bits")

    @property
    def n(self) -> int:
        return len(self.matrix)

    def apply(self, bits: Sequence[int]) -> tuple[int, ...]:
        out = []
        for row, a in zip(self.matrix, self.affine):
            v = a
            for m, x in zip(row, bits):
                v ^= m & x
            out.append(v)
        return tuple(out)

    def is_invertible(self) -> bool:
        m = [list(r) for r in self.matrix]
        n = self.n
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col]), None)
            if pivot is None:
                return False
            m[col], m[pivot] = m[pivot], m[col]
            for r in range(n):
                if r != col and m[r][col]:
                    m[r] = [a ^ b for a, b in zip(m[r], m[col])]
        return True

    def to_table(self) -> TruthTable:
        n = self.n
        rows = []
        for i in range(2**n):
            bits = index_to_bits(i, n)
            rows.append(self.apply(bits))
        return TruthTable(n, tuple(rows))


@dataclass(frozen=True)
class Completion:
    """A fully assigned table together with the affine map that realizes it."""

    table: TruthTable
    map: LinearMap


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    """Big-endian bits of an index: bit 0 of the result is the most significant."""
    return tuple((index >> (n - 1 - v)) & 1 for v in range(n))


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | (b & 1)
    return index


def anf_of(column: Sequence[int]) -> AnfPolynomial:
    """Algebraic normal form of one output column (no don't-cares allowed).

    Runs the Moebius butterfly over GF(2) on the column, then converts each
    surviving index mask into a monomial over the big-endian variables.
    """
    size = len(column)
    if size < 2 or size & (size - 1):
        raise ValueError(f"column length must be a power of two >= 2, got {size}")
    n = size.bit_length() - 1
    coeffs = []
    for v in column:
        if v not in (0, 1):
            raise ValueError(f"column contains a non-bit value {v!r}; complete don't-cares first")
        coeffs.append(v)
    half = 1
    while half < size:
        for start in range(0, size, 2 * half):
            for k in range(start, start + half):
                coeffs[k + half] ^= coeffs[k]
        half *= 2
    monomials = set()
    for mask, c in enumerate(coeffs):
        if c:
            monomials.add(frozenset(v for v in range(n) if (mask >> (n - 1 - v)) & 1))
    return AnfPolynomial(n, frozenset(monomials))


def is_affine(p: AnfPolynomial) -> bool:
    """True iff every monomial has degree <= 1 (realizable by CNOT/NOT gates)."""
    return p.degree() <= 1


def _affine_map_of(polys: Sequence[AnfPolynomial]) -> LinearMap:
    n = len(polys)
    matrix = []
    affine = []
    for p in polys:
        row = [0] * n
        a = 0
        for mono in p.monomials:
            if not mono:
                a = 1
            else:
                (v,) = mono
                row[v] = 1
        matrix.append(tuple(row))
        affine.append(a)
    return LinearMap(tuple(matrix), tuple(affine))


def enumerate_completions(t: TruthTable) -> list[Completion]:
    """All don't-care assignments that are affine in every output and reversible.

    Assignments are tried in lexicographic order over the starred cells read
    row-major, so the result order is deterministic.
    """
    starred = [(i, j) for i, row in enumerate(t.rows) for j, v in enumerate(row) if v is None]
    completions = []
    for assignment in itertools.product((0, 1), repeat=len(starred)):
        rows = [list(r) for r in t.rows]
        for (i, j), v in zip(starred, assignment):
            rows[i][j] = v
        full = TruthTable(t.n, tuple(tuple(r) for r in rows))
        polys = [anf_of(full.column(j)) for j in range(t.n)]
        if not all(is_affine(p) for p in polys):
            continue
        m = _affine_map_of(polys)
        if not m.is_invertible():
            continue
        completions.append(Completion(full, m))
    return completions


def synthesize(m: LinearMap) -> CnotProgram:
    """CNOT(+NOT) program computing the affine map on every basis state.

    The linear part comes from GF(2) Gaussian elimination: forward
    elimination fixes missing pivots by row addition (never by swapping,
    which a CNOT cannot express), back-substitution clears the upper
    triangle, and the recorded row operations reversed give the program.
    Inversion bits become a target-inverted flag on the last gate writing
    that bit when nothing later reads it as a control, else a NOT gate.
    """
    n = m.n
    a = [list(r) for r in m.matrix]
    ops: list[tuple[int, int]] = []  # (source_row, dest_row): dest ^= source

    def add_row(src: int, dst: int) -> None:
        a[dst] = [x ^ y for x, y in zip(a[dst], a[src])]
        ops.append((src, dst))

    for col in range(n):
        if not a[col][col]:
            pivot = next((r for r in range(col + 1, n) if a[r][col]), None)
            if pivot is None:
                raise NotReversibleError("matrix is singular over GF(2)")
            add_row(pivot, col)
        for r in range(col + 1, n):
            if a[r][col]:
                add_row(col, r)
    for col in range(n - 1, 0, -1):
        for r in range(col - 1, -1, -1):
            if a[r][col]:
                add_row(col, r)

    # The ops turn the matrix into the identity; the matrix itself is the
    # product of the same elementary additions in reverse, and a row
    # addition dst ^= src is exactly CNOT(control=src, target=dst).
    gates: list[CnotGate | NotGate] = [CnotGate(control=c, target=t) for c, t in reversed(ops)]

    for bit in range(n):
        if not m.affine[bit]:
            continue
        placed = False
        for k in range(len(gates) - 1, -1, -1):
            g = gates[k]
            if isinstance(g, CnotGate) and g.target == bit:
                later = gates[k + 1 :]
                if all(not (isinstance(h, CnotGate) and h.control == bit) for h in later):
                    gates[k] = CnotGate(g.control, g.target, g.invert_control, invert_target=True)
                    placed = True
                break
        if not placed:
            gates.append(NotGate(bit))
    return CnotProgram(gates, n_qubits=n)


def verify_program(prog: CnotProgram, table: TruthTable) -> bool:
    """True iff the program maps every input row to the table's output bits."""
    if table.has_dont_cares:
        raise ValueError("verification needs a fully assigned table")
    n = table.n
    if prog.n_qubits != n:
        return False
    for i, out_bits in enumerate(table.rows):
        if prog.apply_index(i) != bits_to_index(out_bits):
            return False
    return True


def parse_truth_table(text: str) -> TruthTable:
    """Parse the text format: one `<bits> -> <bits>` line per input row.

    `*` marks a don't-care output bit and `#` starts a comment.  Every input
    pattern must appear exactly once and all 2^n of them must be present.
    """
    assignments: dict[int, tuple[int | None, ...]] = {}
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("->")
        if len(parts) != 2:
            raise TableParseError(f"line {lineno}: expected '<bits> -> <bits>', got {raw!r}")
        lhs, rhs = parts[0].strip(), parts[1].strip()
        if not lhs or any(ch not in "01" for ch in lhs):
            raise TableParseError(f"line {lineno}: input pattern must be 0/1 bits, got {lhs!r}")
        if n is None:
            n = len(lhs)
        if len(lhs) != n or len(rhs) != n:
            raise TableParseError(f"line {lineno}: expected {n} input and {n} output bits")
        out: list[int | None] = []
        for ch in rhs:
            if ch == "*":
                out.append(None)
            elif ch in "01":
                out.append(int(ch))
            else:
                raise TableParseError(f"line {lineno}: output bits must be 0, 1, or *, got {rhs!r}")
        idx = int(lhs, 2)
        if idx in assignments:
            raise TableParseError(f"line {lineno}: duplicate input pattern {lhs!r}")
        assignments[idx] = tuple(out)
    if n is None:
        raise TableParseError("no table rows found")
    missing = [i for i in range(2**n) if i not in assignments]
    if missing:
        pats = ", ".join(format(i, f"0{n}b") for i in missing[:4])
        raise TableParseError(f"missing input patterns: {pats}" + ("..." if len(missing) > 4 else ""))
    return TruthTable(n, tuple(assignments[i] for i in range(2**n)))


def format_truth_table(t: TruthTable) -> str:
    """Render a table in the text format accepted by parse_truth_table."""
    lines = []
    for i, row in enumerate(t.rows):
        out = "".join("*" if v is None else str(v) for v in row)
        lines.append(f"{format(i, f'0{t.n}b')} -> {out}")
    return "\n".join(lines) + "\n"

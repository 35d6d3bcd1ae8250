"""Preparation-angle solving and the catalog of admissible coefficient rows.

The two-qubit preparation circuit

    R(theta1) on qubit 0, CNOT(0 -> 1), R(theta2) on qubit 1,
    CNOT(1 -> 0), R(theta3) on qubit 0,

applied to |00>, produces the state C1|00> + C2|01> + C3|10> + C4|11> with

    C1 = c1 c2 c3 + s1 s2 s3        C3 = c1 c2 s3 - s1 s2 c3
    C2 = s1 c2 c3 - c1 s2 s3        C4 = c1 s2 c3 + s1 c2 s3

where ci = cos(theta_i), si = sin(theta_i).  This module solves that system
for the angles given target coefficients: a closed form for the generic
case, a damped Gauss-Newton fallback where the closed form's denominators
vanish, and a sign sweep that keeps exactly the assignments reproducing the
targets.  It also ships the catalog of the 12 admissible coefficient rows
of the cloning machine, with their closed-form cos^2 values, sign patterns,
and both published circuit variants per row.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gates import CnotGate, CnotProgram, Rotation, apply_cnot, apply_rotation
from .states import ATOL, PureState

RESIDUAL_TOL = 1e-9
SINGULAR_TOL = 1e-9
FALLBACK_TOL = 1e-10


class NoRealSolutionError(ValueError):
    """The closed-form discriminant is negative: no real angles exist."""


@dataclass(frozen=True)
class PrepCoefficients:
    """Real target amplitudes (C1, C2, C3, C4) with sum of squares 1."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self) -> None:
        total = self.c1**2 + self.c2**2 + self.c3**2 + self.c4**2
        if abs(total - 1.0) > ATOL:
            raise ValueError(f"coefficients must have unit sum of squares, got {total!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4])


@dataclass(frozen=True)
class SignPattern:
    """Signs of (cos theta_i) and (sin theta_i) for i = 1..3, each +1 or -1."""

    cos_signs: tuple[int, int, int]
    sin_signs: tuple[int, int, int]

    def __post_init__(self) -> None:
        for s in self.cos_signs + self.sin_signs:
            if s not in (-1, 1):
                raise ValueError(f"signs must be +1 or -1, got {s}")

    @classmethod
    def from_string(cls, text: str) -> "SignPattern":
        """Parse '(---,+++)' or '---,+++': cos signs first, sin signs second."""
        t = text.strip().strip("()").replace(" ", "")
        cos_part, sin_part = t.split(",")
        conv = {"+": 1, "-": -1}
        try:
            return cls(tuple(conv[ch] for ch in cos_part), tuple(conv[ch] for ch in sin_part))
        except KeyError as exc:
            raise ValueError(f"bad sign character in {text!r}") from exc

    def __str__(self) -> str:
        mark = {1: "+", -1: "-"}
        return "(" + "".join(mark[s] for s in self.cos_signs) + "," + "".join(mark[s] for s in self.sin_signs) + ")"


@dataclass(frozen=True)
class AngleTriple:
    """Three (cos, sin) pairs, one per preparation angle, each on the unit circle."""

    pairs: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]

    def __post_init__(self) -> None:
        for c, s in self.pairs:
            if abs(c * c + s * s - 1.0) > ATOL:
                raise ValueError(f"(cos, sin) = ({c}, {s}) is not on the unit circle")

    @classmethod
    def from_angles(cls, theta1: float, theta2: float, theta3: float) -> "AngleTriple":
        return cls(tuple((math.cos(t), math.sin(t)) for t in (theta1, theta2, theta3)))

    @property
    def cos_squares(self) -> tuple[float, float, float]:
        return tuple(c * c for c, _ in self.pairs)

    def matches_sign_pattern(self, pattern: SignPattern, tol: float = ATOL) -> bool:
        """True iff every cos/sin either carries the pattern's sign or is zero."""
        for (c, s), sc, ss in zip(self.pairs, pattern.cos_signs, pattern.sin_signs):
            if c * sc < -tol or s * ss < -tol:
                return False
        return True


def eval_prep_equations(angles: AngleTriple) -> PrepCoefficients:
    """Coefficients produced by the preparation circuit for the given angles."""
    v = _equation_values(angles.pairs)
    return PrepCoefficients(*v)


def _equation_values(pairs: Sequence[tuple[float, float]]) -> np.ndarray:
    (c1, s1), (c2, s2), (c3, s3) = pairs
    return np.array(
        [
            c1 * c2 * c3 + s1 * s2 * s3,
            s1 * c2 * c3 - c1 * s2 * s3,
            c1 * c2 * s3 - s1 * s2 * c3,
            c1 * s2 * c3 + s1 * c2 * s3,
        ]
    )


def prepare_state(angles: AngleTriple) -> PureState:
    """Run the five-gate preparation circuit on |00>."""
    (c1, s1), (c2, s2), (c3, s3) = angles.pairs
    psi = PureState.basis(2, 0)
    psi = apply_rotation(psi, 0, Rotation(c1, s1))
    psi = apply_cnot(psi, CnotGate(control=0, target=1))
    psi = apply_rotation(psi, 1, Rotation(c2, s2))
    psi = apply_cnot(psi, CnotGate(control=1, target=0))
    psi = apply_rotation(psi, 0, Rotation(c3, s3))
    return psi


def _clamp01(x: float, tol: float = 1e-9) -> float | None:
    """Snap x into [0, 1]; None if it misses by more than tol."""
    if x < -tol or x > 1.0 + tol:
        return None
    return min(max(x, 0.0), 1.0)


def closed_form_cos_squares(c1: float, c2: float, c3: float, c4: float) -> list[tuple[float, float, float]]:
    """Both closed-form branches of (cos^2 theta_1, theta_2, theta_3).

    The equations satisfy three product identities:

        C1 C4 - C2 C3 = cos(t2) sin(t2)
        C3^2 + C4^2   = cos^2(t2) sin^2(t3) + sin^2(t2) cos^2(t3)
        C1^2 + C3^2   = cos^2(t1) cos^2(t2) + sin^2(t1) sin^2(t2)

    so cos^2(t2) solves a quadratic with discriminant
    1 - 4 (C1 C4 - C2 C3)^2, and the other two squares follow linearly.
    Raises NoRealSolutionError when the discriminant is negative (impossible
    for unit-norm coefficients, where |C1 C4 - C2 C3| <= 1/2) and ValueError
    at the double root cos^2(t2) = 1/2, where the remaining angles are only
    jointly constrained and callers fall back to the numerical search.
    """
    p = c1 * c4 - c2 * c3
    disc = 1.0 - 4.0 * p * p
    if disc < -SINGULAR_TOL:
        raise NoRealSolutionError(f"discriminant {disc!r} is negative; no real angles solve the system")
    root = math.sqrt(max(disc, 0.0))
    if root < SINGULAR_TOL:
        raise ValueError("singular denominator in the closed form")
    s34 = c3 * c3 + c4 * c4
    s13 = c1 * c1 + c3 * c3
    branches = []
    for sign in (-1.0, 1.0):
        t2 = 0.5 * (1.0 + sign * root)
        denom = 1.0 - 2.0 * t2
        t3 = (s34 - t2) / denom
        t1 = (1.0 - t2 - s13) / denom
        t1_c, t2_c, t3_c = _clamp01(t1), _clamp01(t2), _clamp01(t3)
        if t1_c is None or t2_c is None or t3_c is None:
            continue
        branches.append((t1_c, t2_c, t3_c))
    return branches


def _sign_sweep(cos_squares: tuple[float, float, float], target: np.ndarray, tol: float) -> list[AngleTriple]:
    """All sign assignments of (cos_i, sin_i) that reproduce the target."""
    mags = [(math.sqrt(q), math.sqrt(max(1.0 - q, 0.0))) for q in cos_squares]
    found = []
    for signs in itertools.product((1.0, -1.0), repeat=6):
        pairs = tuple((signs[2 * i] * mags[i][0], signs[2 * i + 1] * mags[i][1]) for i in range(3))
        if np.max(np.abs(_equation_values(pairs) - target)) <= tol:
            found.append(AngleTriple(pairs))
    return found


def _jacobian(pairs: Sequence[tuple[float, float]]) -> np.ndarray:
    """4x3 Jacobian of the equation values w.r.t. the three angles.

    Differentiating in theta_i replaces (cos_i, sin_i) by (-sin_i, cos_i)
    in that angle's factors.
    """
    cols = []
    for i in range(3):
        d = list(pairs)
        d[i] = (-pairs[i][1], pairs[i][0])
        cols.append(_equation_values(d))
    return np.column_stack(cols)


_FALLBACK_STARTS = tuple(
    itertools.product((0.8, 2.5), (0.8, 2.5, 4.2, 5.9), (0.8, 4.2))
)


def _solve_fallback(target: np.ndarray) -> list[AngleTriple]:
    """Damped Gauss-Newton on the 4-equation system from 16 fixed starts."""
    solutions: dict[tuple, AngleTriple] = {}
    for start in _FALLBACK_STARTS:
        thetas = np.array(start)
        pairs = [(math.cos(t), math.sin(t)) for t in thetas]
        res = _equation_values(pairs) - target
        err = float(np.max(np.abs(res)))
        for _ in range(100):
            if err < 1e-13:
                break
            step, *_ = np.linalg.lstsq(_jacobian(pairs), -res, rcond=None)
            scale = 1.0
            improved = False
            for _ in range(20):
                trial = thetas + scale * step
                t_pairs = [(math.cos(t), math.sin(t)) for t in trial]
                t_res = _equation_values(t_pairs) - target
                t_err = float(np.max(np.abs(t_res)))
                if t_err < err:
                    thetas, pairs, res, err = trial, t_pairs, t_res, t_err
                    improved = True
                    break
                scale *= 0.5
            if not improved:
                break
        if err < FALLBACK_TOL:
            triple = AngleTriple(tuple(pairs))
            key = tuple(round(v, 9) for pair in triple.pairs for v in pair)
            solutions.setdefault(key, triple)
    return [solutions[k] for k in sorted(solutions)]


def solve_angles(c: PrepCoefficients, residual_tol: float = RESIDUAL_TOL) -> list[AngleTriple]:
    """All angle triples reproducing the target coefficients.

    Uses the closed form plus a sign sweep in the generic case; near the
    closed form's singular denominators it switches to the Gauss-Newton
    fallback.  Every returned triple satisfies
    max |eval_prep_equations(triple) - c| <= residual_tol.
    """
    target = c.as_array()
    try:
        branches = closed_form_cos_squares(c.c1, c.c2, c.c3, c.c4)
    except NoRealSolutionError:
        raise
    except ValueError:
        return _solve_fallback(target)
    results: dict[tuple, AngleTriple] = {}
    for cos_squares in branches:
        for triple in _sign_sweep(cos_squares, target, residual_tol):
            key = tuple(round(v, 12) for pair in triple.pairs for v in pair)
            results.setdefault(key, triple)
    if not results:
        # Near the singular double root the branch formulas lose precision
        # and the sign sweep can miss; the numerical search still applies.
        return _solve_fallback(target)
    return list(results.values())


# --- the 12-row catalog -----------------------------------------------------

_SQRT2 = math.sqrt(2.0)
_SQRT5 = math.sqrt(5.0)
_SQRT6 = math.sqrt(6.0)


def _minus_plus(x: float) -> tuple[float, float]:
    """(upper, lower) pair for a column printed as (1 -/+ x)/2."""
    return (0.5 * (1.0 - x), 0.5 * (1.0 + x))


def _plus_minus(x: float) -> tuple[float, float]:
    """(upper, lower) pair for a column printed as (1 +/- x)/2."""
    return (0.5 * (1.0 + x), 0.5 * (1.0 - x))


@dataclass(frozen=True)
class CatalogRow:
    """One admissible coefficient row with both circuit variants.

    cos_squares holds three (upper, lower) pairs, one per angle; the
    sign_patterns and circuits tuples are (upper, lower) as well.  Circuits
    are stored as CnotPrograms in application order.
    """

    index: int
    coefficients: PrepCoefficients
    cos_squares: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    sign_patterns: tuple[SignPattern, SignPattern]
    circuits: tuple[CnotProgram, CnotProgram]

    def circuit(self, variant: str) -> CnotProgram:
        if variant == "upper":
            return self.circuits[0]
        if variant == "lower":
            return self.circuits[1]
        raise ValueError(f"variant must be 'upper' or 'lower', got {variant!r}")

    def sign_pattern(self, variant: str) -> SignPattern:
        return self.sign_patterns[0 if variant == "upper" else 1]


def _parse_gate(token: str) -> CnotGate:
    """'21' -> CNOT(2, 1); a 'b' suffix on a digit marks an inverted leg, '1b0'."""
    legs = []
    i = 0
    while i < len(token):
        q = int(token[i])
        i += 1
        inverted = i < len(token) and token[i] == "b"
        if inverted:
            i += 1
        legs.append((q, inverted))
    (c, ic), (t, it) = legs
    return CnotGate(control=c, target=t, invert_control=ic, invert_target=it)


def _program(tokens: Sequence[str]) -> CnotProgram:
    """Build a program from product-order tokens (leftmost gate applied last)."""
    return CnotProgram([_parse_gate(t) for t in reversed(tokens)], n_qubits=3)


# Each entry: coefficient numerators over sqrt(6); (upper, lower) cos^2 pairs
# per angle; (upper, lower) sign patterns; (upper, lower) circuits in product
# order.  Every cos^2 value equals the closed form evaluated at the row's
# coefficients; the test suite re-derives all of them independently.
_CATALOG_SPEC = [
    (
        (2, 1, 1, 0),
        (_minus_plus(1 / _SQRT2), _minus_plus(2 * _SQRT2 / 3), _minus_plus(1 / _SQRT2)),
        ("---,+++", "+++,+-+"),
        (("21", "02", "10"), ("12", "20", "01")),
    ),
    (
        (2, 1, 0, 1),
        (_minus_plus(1 / _SQRT5), _minus_plus(_SQRT5 / 3), _minus_plus(2 / _SQRT5)),
        ("+++,-+-", "+++,+++"),
        (("21", "10", "02"), ("10", "20", "02", "01")),
    ),
    (
        (2, 0, 1, 1),
        (_minus_plus(2 / _SQRT5), _minus_plus(_SQRT5 / 3), _minus_plus(1 / _SQRT5)),
        ("+++,-+-", "+++,+++"),
        (("12", "01", "20"), ("01", "02", "20", "10")),
    ),
    (
        (1, 2, 1, 0),
        (_plus_minus(1 / _SQRT5), _minus_plus(_SQRT5 / 3), _minus_plus(2 / _SQRT5)),
        ("---,+++", "+++,+-+"),
        (("20", "10", "01", "02b"), ("21", "10", "02b")),
    ),
    (
        (1, 2, 0, 1),
        (_plus_minus(1 / _SQRT2), _minus_plus(2 * _SQRT2 / 3), _minus_plus(1 / _SQRT2)),
        ("+++,-+-", "+++,+++"),
        (("12", "2b0", "01"), ("21", "02b", "10")),
    ),
    (
        (1, 1, 2, 0),
        (_minus_plus(2 / _SQRT5), _minus_plus(_SQRT5 / 3), _plus_minus(1 / _SQRT5)),
        ("---,+++", "+++,+-+"),
        (("01", "02", "20", "1b0"), ("12", "01b", "20")),
    ),
    (
        (1, 1, 0, 2),
        (_plus_minus(2 / _SQRT5), _minus_plus(_SQRT5 / 3), _plus_minus(1 / _SQRT5)),
        ("+++,-+-", "+++,+++"),
        (("12", "01b", "2b0"), ("01", "02", "2b0", "1b0")),
    ),
    (
        (1, 0, 2, 1),
        (_minus_plus(1 / _SQRT2), _minus_plus(2 * _SQRT2 / 3), _plus_minus(1 / _SQRT2)),
        ("+++,-+-", "+++,+++"),
        (("21", "02", "1b0"), ("12", "20", "01b")),
    ),
    (
        (1, 0, 1, 2),
        (_plus_minus(1 / _SQRT5), _minus_plus(_SQRT5 / 3), _plus_minus(2 / _SQRT5)),
        ("+++,-+-", "+++,+++"),
        (("21", "1b0", "02b"), ("20", "10", "01b", "02b")),
    ),
    (
        (0, 1, 1, 2),
        (_plus_minus(1 / _SQRT2), _minus_plus(2 * _SQRT2 / 3), _plus_minus(1 / _SQRT2)),
        ("---,+++", "+++,+-+"),
        (("21", "02b", "1b0"), ("12", "2b0", "01b")),
    ),
    (
        (0, 1, 2, 1),
        (_minus_plus(1 / _SQRT5), _minus_plus(_SQRT5 / 3), _plus_minus(2 / _SQRT5)),
        ("---,+++", "+++,+-+"),
        (("21", "1b0", "02"), ("20", "10", "01b", "02")),
    ),
    (
        (0, 2, 1, 1),
        (_plus_minus(2 / _SQRT5), _minus_plus(_SQRT5 / 3), _minus_plus(1 / _SQRT5)),
        ("---,+++", "+++,+-+"),
        (("12", "01", "2b0"), ("01", "02", "2b0", "10")),
    ),
]


def catalog_rows() -> list[CatalogRow]:
    """The 12 admissible coefficient rows, 1-indexed, with both circuit variants."""
    rows = []
    for i, (nums, cos_sq, signs, circuits) in enumerate(_CATALOG_SPEC, start=1):
        rows.append(
            CatalogRow(
                index=i,
                coefficients=PrepCoefficients(*(v / _SQRT6 for v in nums)),
                cos_squares=cos_sq,
                sign_patterns=tuple(SignPattern.from_string(s) for s in signs),
                circuits=tuple(_program(tokens) for tokens in circuits),
            )
        )
    return rows

"""Tests for cloner: machine outputs, reduced-state mixtures, fidelities."""
import math

import numpy as np
import pytest

from qclone.cloner import (
    expected_output,
    machine_average_fidelities,
    mix_input,
    mixture_residual,
    run_machine,
)
from qclone.states import (
    ATOL,
    BlochAngles,
    PureState,
    average_fidelity,
    bloch_state,
    conjugate_state,
    density_of,
    max_amplitude_error,
    orthogonal_state,
    states_equal_up_to_phase,
)

SQRT6 = math.sqrt(6.0)


def random_bloch(rng):
    return BlochAngles(float(rng.uniform(0.0, math.pi)), float(rng.uniform(0.0, 2.0 * math.pi)))


def random_input(rng):
    return bloch_state(random_bloch(rng))


class TestExpectedOutput:
    def test_alpha_one(self):
        out = expected_output(PureState(np.array([1.0, 0.0])))
        assert np.allclose(out.amps, np.array([2, 0, 0, 1, 0, 1, 0, 0]) / SQRT6, atol=ATOL)

    def test_beta_one(self):
        out = expected_output(PureState(np.array([0.0, 1.0])))
        assert np.allclose(out.amps, np.array([0, 0, 1, 0, 1, 0, 0, 2]) / SQRT6, atol=ATOL)

    def test_always_normalized(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            out = expected_output(random_input(rng))
            assert np.sum(np.abs(out.amps) ** 2) == pytest.approx(1.0, abs=ATOL)

    def test_rejects_multi_qubit_input(self):
        with pytest.raises(ValueError):
            expected_output(PureState.basis(2, 0))


class TestMixInput:
    def test_one_on_row1_preparation(self):
        prep = PureState(np.array([2, 1, 1, 0]) / SQRT6)
        mixed = mix_input(PureState.basis(1, 1), prep)
        assert np.allclose(mixed.amps, np.array([0, 0, 0, 0, 2, 1, 1, 0]) / SQRT6, atol=ATOL)

    def test_input_is_leftmost_qubit(self):
        mixed = mix_input(PureState.basis(1, 1), PureState.basis(2, 2))
        assert np.allclose(mixed.amps, PureState.basis(3, 6).amps, atol=ATOL)

    def test_size_validation(self):
        with pytest.raises(ValueError):
            mix_input(PureState.basis(2, 0), PureState.basis(2, 0))
        with pytest.raises(ValueError):
            mix_input(PureState.basis(1, 0), PureState.basis(1, 0))


class TestRunMachine:
    def test_row1_upper_on_zero_ket(self):
        res = run_machine(PureState.basis(1, 0), 1, "upper")
        assert np.max(np.abs(res.output.amps - expected_output(PureState.basis(1, 0)).amps)) < ATOL
        assert res.f0 == pytest.approx(5 / 6, abs=ATOL)
        assert res.f1 == pytest.approx(5 / 6, abs=ATOL)
        assert res.f2 == pytest.approx(2 / 3, abs=ATOL)
        assert res.f2_conj == pytest.approx(2 / 3, abs=ATOL)

    def test_all_cells_reproduce_optimal_output(self):
        rng = np.random.default_rng(31)
        for row in range(1, 13):
            for variant in ("upper", "lower"):
                psi = random_input(rng)
                res = run_machine(psi, row, variant)
                assert max_amplitude_error(res.output, expected_output(psi)) < ATOL

    def test_copies_are_symmetric(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            res = run_machine(random_input(rng), 1)
            assert np.max(np.abs(res.rho0.entries - res.rho1.entries)) < ATOL

    def test_copy_fidelities_are_constant(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            res = run_machine(random_input(rng), 7, "lower")
            assert res.f0 == pytest.approx(5 / 6, abs=ATOL)
            assert res.f1 == pytest.approx(5 / 6, abs=ATOL)
            assert res.f2_conj == pytest.approx(2 / 3, abs=ATOL)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            run_machine(PureState.basis(2, 0), 1)
        with pytest.raises(ValueError):
            run_machine(PureState.basis(1, 0), 0)
        with pytest.raises(ValueError):
            run_machine(PureState.basis(1, 0), 13)
        with pytest.raises(ValueError):
            run_machine(PureState.basis(1, 0), 1, "middle")

    def test_linearity_of_the_machine(self):
        # The full machine is a fixed linear map of the input amplitudes, so
        # superpositions clone to the matching superposition of outputs.
        rng = np.random.default_rng(43)
        basis0 = run_machine(PureState.basis(1, 0), 4, "lower").output.amps
        basis1 = run_machine(PureState.basis(1, 1), 4, "lower").output.amps
        for _ in range(50):
            psi = random_input(rng)
            a, b = psi.amps
            out = run_machine(psi, 4, "lower").output.amps
            assert np.max(np.abs(out - (a * basis0 + b * basis1))) < ATOL


class TestMixtures:
    def test_copies_are_shrunk_inputs(self):
        # Each copy equals 5/6 of the input state plus 1/6 of its orthogonal
        # complement, for every input on the sphere.
        rng = np.random.default_rng(47)
        for _ in range(200):
            psi = random_input(rng)
            res = run_machine(psi, 2, "upper")
            rho_in = density_of(psi)
            rho_perp = density_of(orthogonal_state(psi))
            assert mixture_residual(res.rho0, rho_in, rho_perp, 5 / 6) < ATOL
            assert mixture_residual(res.rho1, rho_in, rho_perp, 5 / 6) < ATOL

    def test_ancilla_tracks_conjugated_input(self):
        rng = np.random.default_rng(53)
        for _ in range(200):
            psi = random_input(rng)
            res = run_machine(psi, 2, "upper")
            conj = conjugate_state(psi)
            assert mixture_residual(res.rho2, density_of(conj), density_of(orthogonal_state(conj)), 2 / 3) < ATOL

    def test_ancilla_against_raw_input_misses_by_imaginary_cross_term(self):
        # Written against the unconjugated input the 2/3 mixture fails for
        # complex states; the deviation is exactly (2/3)|Im(alpha*conj(beta))|.
        rng = np.random.default_rng(59)
        for _ in range(200):
            psi = random_input(rng)
            res = run_machine(psi, 2, "upper")
            residual = mixture_residual(res.rho2, density_of(psi), density_of(orthogonal_state(psi)), 2 / 3)
            alpha, beta = psi.amps
            assert residual == pytest.approx(2 / 3 * abs((alpha * np.conj(beta)).imag), abs=ATOL)

    def test_ancilla_mixture_holds_as_written_for_real_inputs(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            theta = float(rng.uniform(0.0, math.pi))
            psi = bloch_state(BlochAngles(theta, 0.0))
            res = run_machine(psi, 2, "upper")
            assert mixture_residual(res.rho2, density_of(psi), density_of(orthogonal_state(psi)), 2 / 3) < ATOL

    def test_perfect_copy_mixture_is_impossible(self):
        # lambda = 1 would mean a perfect clone; the residual stays bounded
        # away from zero on every input.
        rng = np.random.default_rng(67)
        for _ in range(50):
            psi = random_input(rng)
            res = run_machine(psi, 1)
            rho_in = density_of(psi)
            rho_perp = density_of(orthogonal_state(psi))
            assert mixture_residual(res.rho0, rho_in, rho_perp, 1.0) > 1e-3

    def test_dimension_mismatch_rejected(self):
        res = run_machine(PureState.basis(1, 0), 1)
        with pytest.raises(ValueError):
            mixture_residual(density_of(res.output), res.rho0, res.rho1, 0.5)


class TestAverageFidelities:
    def test_row1_upper(self):
        f0, f1, f2 = machine_average_fidelities(1, "upper")
        assert f0 == pytest.approx(5 / 6, abs=1e-6)
        assert f1 == pytest.approx(5 / 6, abs=1e-6)
        assert f2 == pytest.approx(2 / 3, abs=1e-6)

    def test_row7_lower(self):
        f0, f1, f2 = machine_average_fidelities(7, "lower")
        assert f0 == pytest.approx(5 / 6, abs=1e-6)
        assert f1 == pytest.approx(5 / 6, abs=1e-6)
        assert f2 == pytest.approx(2 / 3, abs=1e-6)

    def test_pointwise_constant_integrands_are_exact_on_tiny_grids(self):
        f0, f1, f2 = machine_average_fidelities(3, "lower", n_theta=2, n_phi=2)
        assert f0 == pytest.approx(5 / 6, abs=1e-9)
        assert f1 == pytest.approx(5 / 6, abs=1e-9)
        assert f2 == pytest.approx(2 / 3, abs=1e-9)

    def test_ancilla_against_raw_input_averages_five_ninths(self):
        # Scalar-path cross-check of the vectorized average: measured against
        # the unconjugated input the ancilla averages 5/9, not 2/3.
        avg = average_fidelity(lambda ang: run_machine(bloch_state(ang), 1).rho2, n_theta=8, n_phi=8)
        assert avg == pytest.approx(5 / 9, abs=1e-6)

    def test_copies_cross_checked_against_scalar_average(self):
        avg = average_fidelity(lambda ang: run_machine(bloch_state(ang), 5, "lower").rho0, n_theta=8, n_phi=8)
        assert avg == pytest.approx(5 / 6, abs=1e-6)


class TestPhaseFreedom:
    def test_outputs_agree_across_variants_up_to_phase(self):
        rng = np.random.default_rng(71)
        for row in (1, 6, 9, 12):
            psi = random_input(rng)
            upper = run_machine(psi, row, "upper").output
            lower = run_machine(psi, row, "lower").output
            assert states_equal_up_to_phase(upper, lower)

"""Unit tests for the estimation primitives: excited-state preparation,
SWAP-test overlaps, LCU application, and the energy estimator built on them."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdrq import pauli as pl
from gdrq.algorithms import (
    energy_expectation,
    lcu_apply,
    prepare_excited,
    swap_test,
    transition_strength,
)
from gdrq.encoding import BasisWindow, NucleusConfig, build_dipole, build_hamiltonian
from gdrq.errors import (
    AnnihilatedStateError,
    PreparationError,
    SizeError,
    ValidationError,
)
from gdrq.statevector import RngStream, StateVector, init_basis_state


def random_state(rng: np.random.Generator, nqubits: int) -> StateVector:
    amps = rng.normal(size=2**nqubits) + 1j * rng.normal(size=2**nqubits)
    return StateVector(nqubits, amps / np.linalg.norm(amps))


def random_hermitian_sum(rng: np.random.Generator, nqubits: int, max_terms: int) -> pl.PauliSum:
    """Random real-weighted Pauli sum (every plain string is Hermitian)."""
    n_terms = int(rng.integers(1, min(max_terms, 4**nqubits) + 1))
    seen: dict[str, float] = {}
    while len(seen) < n_terms:
        axes = "".join(rng.choice(list("IXYZ"), size=nqubits))
        seen[axes] = float(rng.uniform(0.25, 2.0)) * float(rng.choice([-1.0, 1.0]))
    return pl.PauliSum(nqubits, tuple(pl.PauliTerm(c, axes) for axes, c in seen.items()))


def sin_oracle(op: pl.PauliSum, gamma: float, psi: StateVector) -> np.ndarray:
    """Dense sin(gamma * M) |psi>, unnormalized."""
    mat = pl.dense_matrix(op)
    w, v = np.linalg.eigh(mat)
    return (v * np.sin(gamma * w)) @ v.conj().T @ psi.amplitudes


class TestPrepareExcited:
    def test_matches_dense_sine_including_sign(self):
        config = NucleusConfig(A=120, Z=50, kappa=0.5, basis=BasisWindow(3, 5))
        dipole = build_dipole(config.basis, config)
        psi0 = init_basis_state(3, "011")
        gamma = 0.1
        prepared = prepare_excited(psi0, dipole, gamma)
        target = sin_oracle(dipole, gamma, psi0)
        norm2 = float(np.vdot(target, target).real)
        assert prepared.success_probability == pytest.approx(norm2, abs=1e-12)
        assert np.allclose(prepared.state.amplitudes, target / np.sqrt(norm2), atol=1e-9)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_random_operators_match_oracle(self, seed):
        rng = np.random.default_rng(seed)
        op = random_hermitian_sum(rng, 2, 4)
        psi0 = random_state(rng, 2)
        gamma = float(rng.uniform(0.05, 0.5))
        target = sin_oracle(op, gamma, psi0)
        norm2 = float(np.vdot(target, target).real)
        if norm2 < 1e-8:
            return
        prepared = prepare_excited(psi0, op, gamma)
        assert prepared.success_probability == pytest.approx(norm2, abs=1e-10)
        assert np.allclose(prepared.state.amplitudes, target / np.sqrt(norm2), atol=1e-9)

    def test_sampled_mode_reaches_same_state(self):
        config = NucleusConfig(A=120, Z=50, kappa=0.5, basis=BasisWindow(3, 5))
        dipole = build_dipole(config.basis, config)
        psi0 = init_basis_state(3, "011")
        exact = prepare_excited(psi0, dipole, 0.1)
        sampled = prepare_excited(psi0, dipole, 0.1, mode="sampled", rng=RngStream(3))
        assert sampled.attempts >= 1
        assert np.allclose(sampled.state.amplitudes, exact.state.amplitudes)
        assert sampled.success_probability == exact.success_probability

    def test_annihilated_input_rejected(self):
        config = NucleusConfig(A=120, Z=50, kappa=0.5, basis=BasisWindow(3, 4))
        dipole = build_dipole(config.basis, config)
        # both shells occupied: no hop survives, sin(gamma D)|11> = 0
        with pytest.raises(PreparationError):
            prepare_excited(init_basis_state(2, "11"), dipole, 0.1)

    def test_argument_validation(self):
        op = pl.PauliSum(1, (pl.PauliTerm(1.0, "X"),))
        psi = init_basis_state(1, "0")
        with pytest.raises(ValidationError):
            prepare_excited(psi, op, 0.0)
        with pytest.raises(ValidationError):
            prepare_excited(psi, op, 0.1, mode="bogus")
        with pytest.raises(ValidationError):
            prepare_excited(psi, op, 0.1, mode="sampled", rng=None)
        with pytest.raises(SizeError):
            prepare_excited(init_basis_state(2, "00"), op, 0.1)


class TestSwapTest:
    def test_identical_states_give_one(self):
        rng = np.random.default_rng(11)
        psi = random_state(rng, 2)
        est = swap_test(psi, psi, shots=0)
        assert est.raw == pytest.approx(1.0, abs=1e-12)
        assert est.clamped == pytest.approx(1.0, abs=1e-12)
        assert est.standard_error == 0.0

    def test_orthogonal_states_give_zero(self):
        est = swap_test(init_basis_state(2, "00"), init_basis_state(2, "11"), shots=0)
        assert est.raw == pytest.approx(0.0, abs=1e-12)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_exact_mode_matches_inner_product(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_state(rng, 2), random_state(rng, 2)
        expected = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
        est = swap_test(a, b, shots=0)
        assert est.raw == pytest.approx(expected, abs=1e-10)

    def test_sampled_mode_reports_error_bar(self):
        rng = np.random.default_rng(2)
        a, b = random_state(rng, 2), random_state(rng, 2)
        est = swap_test(a, b, shots=4000, mode="sampled", rng=RngStream(2))
        assert est.shots == 4000
        assert est.standard_error > 0.0
        assert 0.0 <= est.clamped <= 1.0
        again = swap_test(a, b, shots=4000, mode="sampled", rng=RngStream(2))
        assert est.raw == again.raw

    def test_validation(self):
        a = init_basis_state(1, "0")
        with pytest.raises(SizeError):
            swap_test(a, init_basis_state(2, "00"), shots=0)
        with pytest.raises(ValidationError):
            swap_test(a, a, shots=0, mode="sampled", rng=RngStream(1))


class TestLcuApply:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_matches_direct_application(self, seed):
        rng = np.random.default_rng(seed)
        nqubits = int(rng.integers(1, 4))
        op = random_hermitian_sum(rng, nqubits, 5)
        psi = random_state(rng, nqubits)
        image = pl.dense_matrix(op) @ psi.amplitudes
        norm = np.linalg.norm(image)
        if norm < 1e-6:
            return
        result = lcu_apply(op, psi)
        lam = sum(abs(t.coefficient) for t in op.terms)
        assert result.lam == pytest.approx(lam)
        assert result.success_probability == pytest.approx(norm**2 / lam**2, abs=1e-12)
        assert np.allclose(result.state.amplitudes, image / norm, atol=1e-9)

    def test_single_term_shortcut(self):
        op = pl.PauliSum(2, (pl.PauliTerm(-2.0, "XI"),))
        psi = init_basis_state(2, "00")
        result = lcu_apply(op, psi)
        assert result.success_probability == pytest.approx(1.0)
        # -2 X0 |00> normalized = -|01>
        assert np.allclose(result.state.amplitudes, [0, -1, 0, 0])

    def test_sampled_mode_replays_attempts(self):
        op = pl.PauliSum(2, (pl.PauliTerm(1.0, "XI"), pl.PauliTerm(1.0, "IX")))
        psi = init_basis_state(2, "00")
        exact = lcu_apply(op, psi)
        sampled = lcu_apply(op, psi, mode="sampled", rng=RngStream(4))
        assert np.allclose(sampled.state.amplitudes, exact.state.amplitudes)
        assert sampled.success_probability == exact.success_probability

    def test_annihilating_operator_rejected(self):
        # (I - Z)/2 is the occupation of qubit 0; it kills |00>
        number = pl.PauliSum(2, (pl.PauliTerm(0.5, "II"), pl.PauliTerm(-0.5, "ZI")))
        with pytest.raises(AnnihilatedStateError):
            lcu_apply(number, init_basis_state(2, "00"))
        with pytest.raises(AnnihilatedStateError):
            lcu_apply(pl.PauliSum(2), init_basis_state(2, "00"))

    def test_imaginary_weight_rejected(self):
        op = pl.PauliSum(1, (pl.PauliTerm(1.0, "Y", 1j),))
        with pytest.raises(ValidationError):
            lcu_apply(op, init_basis_state(1, "0"))

    def test_size_mismatch_rejected(self):
        op = pl.PauliSum(2, (pl.PauliTerm(1.0, "XI"),))
        with pytest.raises(SizeError):
            lcu_apply(op, init_basis_state(1, "0"))


class TestEnergyExpectation:
    def test_hamiltonian_eigenstates_golden(self):
        h4 = build_hamiltonian(BasisWindow(0, 3), 1.0)
        assert energy_expectation(h4, init_basis_state(4, "0100"), shots=0) == pytest.approx(3.5)
        assert energy_expectation(h4, init_basis_state(4, "1000"), shots=0) == pytest.approx(4.5)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_exact_mode_recovers_absolute_expectation(self, seed):
        rng = np.random.default_rng(seed)
        op = random_hermitian_sum(rng, 2, 4)
        psi = random_state(rng, 2)
        expected = abs(np.vdot(psi.amplitudes, pl.dense_matrix(op) @ psi.amplitudes).real)
        if np.linalg.norm(pl.dense_matrix(op) @ psi.amplitudes) < 1e-6:
            return
        got = energy_expectation(op, psi, shots=0)
        assert got == pytest.approx(expected, abs=1e-8)

    def test_sampled_mode_is_deterministic_per_stream(self):
        h = build_hamiltonian(BasisWindow(3, 5), 1.0).without_identity()
        psi = init_basis_state(3, "011")
        a = energy_expectation(h, psi, shots=2000, mode="sampled", rng=RngStream(9))
        b = energy_expectation(h, psi, shots=2000, mode="sampled", rng=RngStream(9))
        assert a == b


class TestTransitionStrength:
    def test_small_gamma_recovers_matrix_element(self):
        config = NucleusConfig(A=120, Z=50, kappa=0.5, basis=BasisWindow(3, 5))
        dipole = build_dipole(config.basis, config)
        psi0 = init_basis_state(3, "011")
        excited = init_basis_state(3, "101")
        element = abs(
            np.vdot(excited.amplitudes, pl.dense_matrix(dipole) @ psi0.amplitudes)
        ) ** 2
        # gamma must be small against 1/||D|| (matrix elements are tens of fm)
        got = transition_strength(psi0, dipole, excited, gamma=1e-5, shots=0)
        assert got == pytest.approx(element, rel=1e-5)

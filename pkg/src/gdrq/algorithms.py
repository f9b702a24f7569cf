"""Circuit-level estimation primitives.

Three building blocks, each usable in two modes:

- "exact": amplitudes are read off the simulated circuit, so estimators return
  their analytic values (success probabilities, overlaps) with zero variance;
- "sampled": every classically-random step (post-selection attempts, shot
  histograms) is drawn from an RngStream, modelling a finite-shot experiment.

All circuits place ancillas above the system register and remove them again by
post-selection, so callers only ever see system-sized states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli as pl
from .errors import AnnihilatedStateError, PreparationError, SizeError, ValidationError
from .statevector import (
    POSTSELECT_TOL,
    RngStream,
    StateVector,
    apply_multiplexed,
    apply_unitary,
    init_basis_state,
    measure_probability,
    post_select,
    sample,
)

MAX_ATTEMPTS = 1000

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]


@dataclass(frozen=True)
class PreparedState:
    """Post-selected output state with its success probability."""

    state: StateVector
    success_probability: float
    attempts: int


@dataclass(frozen=True)
class OverlapEstimate:
    """Squared-overlap estimate from a SWAP test."""

    raw: float
    clamped: float
    shots: int
    standard_error: float


@dataclass(frozen=True)
class LcuResult:
    """Normalized A|psi>/||A|psi>|| with the all-zero ancilla probability."""

    state: StateVector
    success_probability: float
    lam: float


def _check_mode(mode: str, rng: RngStream | None) -> None:
    if mode not in ("exact", "sampled"):
        raise ValidationError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    if mode == "sampled" and rng is None:
        raise ValidationError("sampled mode requires an RngStream")


def _hermitian_dense(op: pl.PauliSum) -> np.ndarray:
    mat = pl.dense_matrix(op)
    defect = np.max(np.abs(mat - mat.conj().T))
    if defect > 1e-10:
        raise ValidationError(f"operator is not Hermitian (defect {defect:.2e})")
    return mat


def _evolution(mat: np.ndarray, angle: float) -> np.ndarray:
    """exp(-i * angle * mat) for Hermitian mat, via its eigendecomposition."""
    w, v = np.linalg.eigh(mat)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def prepare_excited(
    psi0: StateVector,
    operator: pl.PauliSum,
    gamma: float,
    mode: str = "exact",
    rng: RngStream | None = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> PreparedState:
    """Post-select sin(gamma O)|psi0> (normalized) with one ancilla.

    The circuit is H on the ancilla, the multiplexed pair exp(+i gamma O) /
    exp(-i gamma O), H again, then post-selection of the ancilla on |1>; the
    surviving branch is i*sin(gamma O)|psi0>, rephased to drop the i.  In
    sampled mode post-selection is repeated until the |1> outcome occurs, up
    to max_attempts.
    """
    _check_mode(mode, rng)
    if gamma <= 0:
        raise ValidationError("gamma must be positive")
    if operator.nqubits != psi0.nqubits:
        raise SizeError(f"operator on {operator.nqubits} qubits, state on {psi0.nqubits}")
    n = psi0.nqubits
    mat = _hermitian_dense(operator)
    u_forward = _evolution(mat, gamma)
    u_backward = u_forward.conj().T
    full = psi0.tensor(init_basis_state(1, "0"))
    full = apply_unitary(full, _HADAMARD, [n])
    # ancilla 0 -> exp(+i gamma O), ancilla 1 -> exp(-i gamma O); the |1> branch
    # then carries i*sin(gamma O)|psi0> after the closing Hadamard
    full = apply_multiplexed(full, [u_backward, u_forward], controls=[n], targets=list(range(n)))
    full = apply_unitary(full, _HADAMARD, [n])
    p1 = measure_probability(full, n, 1)
    if p1 < POSTSELECT_TOL:
        raise PreparationError(f"sin(gamma O) annihilates the input state (p = {p1:.3e})")
    attempts = 1
    if mode == "sampled":
        assert rng is not None
        attempts = 0
        while True:
            attempts += 1
            if attempts > max_attempts:
                raise PreparationError(
                    f"post-selection failed {max_attempts} times (p = {p1:.3e})"
                )
            hist = sample(full, [n], 1, rng)
            if hist.counts.get("1", 0) == 1:
                break
    state, prob = post_select(full, n, 1)
    state = StateVector(n, state.amplitudes * (-1j))
    return PreparedState(state=state, success_probability=prob, attempts=attempts)


def swap_test(
    psi: StateVector,
    phi: StateVector,
    shots: int,
    mode: str = "exact",
    rng: RngStream | None = None,
) -> OverlapEstimate:
    """Estimate |<psi|phi>|^2 via the SWAP test.

    The ancilla's |0> probability is (1 + |<psi|phi>|^2) / 2; the raw estimate
    2*p0 - 1 can leave [0, 1] at finite shots, so a clamped copy is reported
    alongside.  The standard error uses the add-one (Laplace) rate, keeping it
    positive at extreme counts.  In exact mode shots is ignored and the error
    is zero.
    """
    _check_mode(mode, rng)
    if psi.nqubits != phi.nqubits:
        raise SizeError("swap test requires equal register sizes")
    n = psi.nqubits
    anc = 2 * n
    full = psi.tensor(phi).tensor(init_basis_state(1, "0"))
    full = apply_unitary(full, _HADAMARD, [anc])
    for j in range(n):
        full = apply_multiplexed(full, [np.eye(4, dtype=complex), _SWAP], [anc], [j, n + j])
    full = apply_unitary(full, _HADAMARD, [anc])
    if mode == "exact":
        p0 = measure_probability(full, anc, 0)
        raw = 2.0 * p0 - 1.0
        return OverlapEstimate(raw=raw, clamped=min(max(raw, 0.0), 1.0), shots=0, standard_error=0.0)
    assert rng is not None
    if shots < 1:
        raise ValidationError("sampled mode requires shots >= 1")
    hist = sample(full, [anc], shots, rng)
    k0 = hist.counts.get("0", 0)
    raw = 2.0 * k0 / shots - 1.0
    smoothed = (k0 + 1.0) / (shots + 2.0)
    se = 2.0 * float(np.sqrt(smoothed * (1.0 - smoothed) / shots))
    return OverlapEstimate(raw=raw, clamped=min(max(raw, 0.0), 1.0), shots=shots, standard_error=se)


def _prep_unitary(amps: np.ndarray) -> np.ndarray:
    """Real orthogonal matrix with first column `amps` (Householder reflection)."""
    dim = amps.size
    e0 = np.zeros(dim)
    e0[0] = 1.0
    v = e0 - amps
    nrm = np.linalg.norm(v)
    if nrm < 1e-14:
        return np.eye(dim, dtype=complex)
    v = v / nrm
    return (np.eye(dim) - 2.0 * np.outer(v, v)).astype(complex)


def lcu_apply(
    op: pl.PauliSum,
    psi: StateVector,
    mode: str = "exact",
    rng: RngStream | None = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> LcuResult:
    """Apply a real-weighted Pauli sum as a linear combination of unitaries.

    Prepare-select-unprepare over ceil(log2 k) ancillas: the prepare unitary
    loads sqrt(|c_i| / lambda), the multiplexer applies sign(c_i) * P_i, and
    post-selecting all ancillas on |0> leaves A|psi>/||A|psi>|| with success
    probability ||A|psi>||^2 / lambda^2, lambda = sum |c_i|.  The reported
    probability is the exact circuit value; sampled mode only replays the
    post-selection as Bernoulli attempts (up to max_attempts).
    """
    _check_mode(mode, rng)
    if op.nqubits != psi.nqubits:
        raise SizeError(f"operator on {op.nqubits} qubits, state on {psi.nqubits}")
    if not op.is_real_weighted():
        raise ValidationError("LCU needs a real-weighted (Hermitian-combination) Pauli sum")
    if len(op.terms) == 0:
        raise AnnihilatedStateError("empty operator annihilates every state")
    n = psi.nqubits
    lam = float(sum(abs(t.coefficient) for t in op.terms))
    image = pl.apply(op, psi)
    nrm2 = float(np.vdot(image.amplitudes, image.amplitudes).real)
    p_success = nrm2 / lam**2
    if p_success < POSTSELECT_TOL:
        raise AnnihilatedStateError(f"operator annihilates the state (p = {p_success:.3e})")
    if mode == "sampled":
        assert rng is not None
        attempts = 0
        while True:
            attempts += 1
            if attempts > max_attempts:
                raise PreparationError(
                    f"LCU post-selection failed {max_attempts} times (p = {p_success:.3e})"
                )
            if rng.generator.random() < p_success:
                break
    k = len(op.terms)
    if k == 1:
        # single unitary: no ancilla, success is certain up to rounding
        term = op.terms[0]
        u = term.matrix() / term.weight * np.sign(term.coefficient)
        out = apply_unitary(psi, u, list(range(n)))
        return LcuResult(state=out, success_probability=p_success, lam=lam)
    na = (k - 1).bit_length()
    amps = np.zeros(2**na)
    amps[:k] = [np.sqrt(abs(t.coefficient) / lam) for t in op.terms]
    prep = _prep_unitary(amps)
    full = psi.tensor(init_basis_state(na, "0" * na))
    ancillas = list(range(n, n + na))
    full = apply_unitary(full, prep, ancillas)
    selected = [t.matrix() / t.weight * np.sign(t.coefficient) for t in op.terms]
    full = apply_multiplexed(full, selected, controls=ancillas, targets=list(range(n)))
    full = apply_unitary(full, prep.conj().T, ancillas)
    total = 1.0
    for anc in reversed(ancillas):
        full, prob = post_select(full, anc, 0)
        total *= prob
    assert abs(total - p_success) < 1e-9
    return LcuResult(state=full, success_probability=p_success, lam=lam)


def energy_expectation(
    op: pl.PauliSum,
    psi: StateVector,
    shots: int,
    mode: str = "exact",
    rng: RngStream | None = None,
) -> float:
    """|<psi|A|psi>| from the LCU success rate and a SWAP test.

    |<psi|A|psi>| = lambda * sqrt(p_success) * |<psi|chi>| with chi the LCU
    output; in sampled mode the success rate is re-estimated from `shots`
    Bernoulli draws so both factors carry shot noise.
    """
    _check_mode(mode, rng)
    result = lcu_apply(op, psi, mode=mode, rng=rng)
    overlap = swap_test(psi, result.state, shots, mode=mode, rng=rng)
    if mode == "sampled":
        assert rng is not None
        if shots < 1:
            raise ValidationError("sampled mode requires shots >= 1")
        hits = rng.generator.binomial(shots, result.success_probability)
        p_hat = hits / shots
    else:
        p_hat = result.success_probability
    return result.lam * float(np.sqrt(p_hat)) * float(np.sqrt(overlap.clamped))


def transition_strength(
    psi0: StateVector,
    dipole: pl.PauliSum,
    excited: StateVector,
    gamma: float,
    shots: int,
    mode: str = "exact",
    rng: RngStream | None = None,
) -> float:
    """|<nu|D|psi0>|^2 up to O(gamma^2): swap-test the sin(gamma D) state.

    The prepared state is sin(gamma D)|psi0> normalized; its overlap with the
    target, scaled by the preparation success probability over gamma^2,
    recovers the squared matrix element as gamma -> 0.
    """
    prep = prepare_excited(psi0, dipole, gamma, mode=mode, rng=rng)
    est = swap_test(prep.state, excited, shots, mode=mode, rng=rng)
    return est.clamped * prep.success_probability / gamma**2

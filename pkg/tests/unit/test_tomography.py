"""
Unit tests for populations, reduced states, Choi matrices and fidelities
"""

import math

import numpy as np
import pytest

from giantcz.errors import ConfigurationError, NumericalIntegrityError, SectorMismatchError
from giantcz.hilbert import AtomsOnly, OnePhoton, TwoPhoton, enumerate_basis
from giantcz.operators import build_effective_hamiltonian, build_hamiltonian
from giantcz.propagator import StateVector, TimeGrid, evolve
from giantcz.tomography import (
    CZ_UNITARY,
    IDENTITY_UNITARY,
    ChoiMatrix,
    GateResult,
    apply_output_unitary,
    average_fidelity,
    build_choi,
    correct_local_phases,
    cz_choi,
    gate_point,
    leaked_population,
    local_phase_unitary,
    m_matrix,
    population_02,
    population_11,
    population_20,
    process_fidelity,
    reduce,
    unitary_choi,
)

from tests.fixtures.sample_systems import (
    create_random_state,
    create_random_system,
    create_sample_system,
)

LABELS = ("11", "10", "01", "00")


def computational_inputs(num_sites, time=0.0):
    """Un-evolved computational basis states."""
    states = {}
    for label in LABELS:
        n1, n2 = int(label[0]), int(label[1])
        basis = enumerate_basis(num_sites, n1 + n2)
        states[label] = StateVector.basis_state(basis, AtomsOnly(n1, n2), time=time)
    return states


def phased_inputs(num_sites, phases):
    """Computational inputs multiplied by the given phases (a diagonal unitary)."""
    states = computational_inputs(num_sites)
    for label, phase in zip(LABELS, phases):
        states[label].amplitudes *= phase
    return states


def random_choi(seed):
    rng = np.random.default_rng(seed)
    w = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    matrix = w @ w.conj().T
    return ChoiMatrix(matrix / np.trace(matrix).real)


class TestPopulations:
    """Atomic populations of two-excitation states"""

    def test_single_basis_states(self):
        basis = enumerate_basis(5, 2)
        psi = StateVector.basis_state(basis, AtomsOnly(2, 0))
        assert population_20(psi) == 1.0
        assert population_11(psi) == 0.0
        assert population_02(psi) == 0.0

    def test_superposition(self):
        basis = enumerate_basis(5, 2)
        psi = StateVector.superposition(basis, {AtomsOnly(1, 1): 1.0, AtomsOnly(0, 2): -1.0})
        assert population_11(psi) == pytest.approx(0.5)
        assert population_02(psi) == pytest.approx(0.5)

    def test_requires_two_excitations(self):
        basis = enumerate_basis(5, 1)
        psi = StateVector.basis_state(basis, AtomsOnly(1, 0))
        with pytest.raises(SectorMismatchError):
            population_20(psi)


class TestReduce:
    """Tracing out the cavities"""

    def test_product_state(self):
        basis = enumerate_basis(5, 2)
        rho = reduce(StateVector.basis_state(basis, AtomsOnly(1, 1))).matrix
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(rho, expected)

    def test_second_level_is_invisible(self):
        basis = enumerate_basis(5, 2)
        reduced = reduce(StateVector.basis_state(basis, AtomsOnly(2, 0)))
        np.testing.assert_allclose(reduced.matrix, np.zeros((4, 4)))
        assert reduced.trace_deficit == pytest.approx(1.0)

    def test_shared_photon_gives_coherence(self):
        basis = enumerate_basis(5, 2)
        psi = StateVector.superposition(basis, {OnePhoton(1, 0, 2): 1.0, OnePhoton(0, 1, 2): 1.0})
        rho = reduce(psi).matrix
        expected = np.zeros((4, 4))
        expected[1:3, 1:3] = 0.5
        np.testing.assert_allclose(rho, expected, atol=1e-15)

    def test_different_photons_give_no_coherence(self):
        basis = enumerate_basis(5, 2)
        psi = StateVector.superposition(basis, {OnePhoton(1, 0, 2): 1.0, OnePhoton(0, 1, 3): 1.0})
        rho = reduce(psi).matrix
        assert rho[1, 2] == 0
        assert rho[1, 1] == pytest.approx(0.5)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_trace_accounting(self, seed):
        basis = enumerate_basis(6, 2)
        psi = create_random_state(basis, seed=seed)
        reduced = reduce(psi)
        assert reduced.is_physical()
        assert reduced.trace + population_20(psi) + population_02(psi) == pytest.approx(1.0, abs=1e-12)
        assert reduced.trace_deficit == pytest.approx(leaked_population(psi), abs=1e-12)

    def test_m_matrix_shape(self):
        basis = enumerate_basis(4, 1)
        psi = StateVector.basis_state(basis, OnePhoton(0, 0, 2))
        m = m_matrix(psi)
        assert m.shape == (4, 1 + 4 + 10)
        assert m[3, 3] == 1.0

    def test_two_photon_bath(self):
        basis = enumerate_basis(4, 2)
        psi = StateVector.basis_state(basis, TwoPhoton(1, 3))
        assert reduce(psi).matrix[3, 3] == pytest.approx(1.0)


class TestChoi:
    """Choi matrices from evolved inputs"""

    def test_identity_channel(self):
        choi = build_choi(computational_inputs(4))
        np.testing.assert_allclose(choi.matrix, unitary_choi(IDENTITY_UNITARY).matrix, atol=1e-15)
        assert choi.trace == pytest.approx(1.0)
        assert choi.purity == pytest.approx(1.0)
        choi.validate()

    def test_missing_input(self):
        states = computational_inputs(4)
        del states["01"]
        with pytest.raises(ConfigurationError, match="01"):
            build_choi(states)

    def test_times_must_agree(self):
        states = computational_inputs(4)
        states["10"].time = 3.0
        with pytest.raises(NumericalIntegrityError):
            build_choi(states)

    def test_lattices_must_agree(self):
        states = computational_inputs(4)
        states["00"] = StateVector.basis_state(enumerate_basis(5, 0), AtomsOnly(0, 0))
        with pytest.raises(SectorMismatchError):
            build_choi(states)

    def test_blocks(self):
        choi = build_choi(computational_inputs(4))
        block = choi.block(0, 0)
        assert block[0, 0] == pytest.approx(0.25)

    def test_shape_check(self):
        with pytest.raises(SectorMismatchError):
            ChoiMatrix(np.eye(4))

    def test_validate_rejects_negative_eigenvalue(self):
        matrix = np.eye(16) / 16
        matrix[0, 0] = -0.1
        with pytest.raises(NumericalIntegrityError):
            ChoiMatrix(matrix).validate()

    def test_decayed_channel_has_trace_deficit(self):
        states = computational_inputs(4)
        states["11"].amplitudes *= math.sqrt(0.8)
        choi = build_choi(states)
        assert choi.trace == pytest.approx(1.0 - 0.2 / 4)
        choi.validate()


class TestProcessFidelity:
    """Uhlmann fidelity between Choi matrices"""

    def test_self_fidelity(self):
        assert process_fidelity(cz_choi(), cz_choi()) == pytest.approx(1.0)

    def test_defaults_to_cz(self):
        assert process_fidelity(cz_choi()) == pytest.approx(1.0)

    def test_identity_versus_cz(self):
        assert process_fidelity(unitary_choi(IDENTITY_UNITARY)) == pytest.approx(0.25)

    def test_depolarized(self):
        depolarized = np.eye(16) / 16
        assert process_fidelity(depolarized, cz_choi()) == pytest.approx(1 / 16)

    @pytest.mark.parametrize("seed", [3, 4, 5])
    def test_symmetric(self, seed):
        a, b = random_choi(seed), random_choi(seed + 100)
        assert process_fidelity(a, b) == pytest.approx(process_fidelity(b, a), abs=1e-9)
        assert 0.0 <= process_fidelity(a, b) <= 1.0

    def test_rejects_non_positive(self):
        matrix = np.eye(16) / 16
        matrix[0, 0] = -0.01
        with pytest.raises(NumericalIntegrityError):
            process_fidelity(matrix)

    def test_accepts_plain_arrays(self):
        assert process_fidelity(cz_choi().matrix, cz_choi().matrix) == pytest.approx(1.0)


class TestLocalPhaseCorrection:
    """Optimal single-qubit Z corrections"""

    def test_aligned_gate_needs_no_correction(self):
        choi = unitary_choi(CZ_UNITARY)
        corrected, phi1, phi2 = correct_local_phases(choi)
        assert abs(phi1) < 1e-6 and abs(phi2) < 1e-6
        assert process_fidelity(corrected) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("a,b", [(0.4, -1.1), (2.5, 0.3), (-3.0, 3.0)])
    def test_recovers_applied_phases(self, a, b):
        choi = unitary_choi(local_phase_unitary(a, b) @ CZ_UNITARY)
        corrected, phi1, phi2 = correct_local_phases(choi)
        assert process_fidelity(corrected) == pytest.approx(1.0, abs=1e-9)
        assert np.exp(1j * phi1) == pytest.approx(np.exp(-1j * a), abs=1e-6)
        assert np.exp(1j * phi2) == pytest.approx(np.exp(-1j * b), abs=1e-6)

    def test_phases_are_wrapped(self):
        choi = unitary_choi(local_phase_unitary(3.0, -3.0) @ CZ_UNITARY)
        _, phi1, phi2 = correct_local_phases(choi)
        assert -math.pi < phi1 <= math.pi
        assert -math.pi < phi2 <= math.pi

    def test_free_evolution_is_local(self):
        spec = create_sample_system(num_sites=4, atom1=((0, 0.0),), atom2=((3, 0.0),), omega1=0.7, omega2=-0.2)
        grid = TimeGrid(9.0, 10)
        evolved = {}
        for label in LABELS:
            n1, n2 = int(label[0]), int(label[1])
            hamiltonian = build_hamiltonian(spec, n1 + n2)
            psi0 = StateVector.basis_state(hamiltonian.basis, AtomsOnly(n1, n2))
            evolved[label] = evolve(hamiltonian, psi0, grid)[-1]
        fidelity, _, _, deficit = gate_point(evolved, IDENTITY_UNITARY)
        assert fidelity == pytest.approx(1.0, abs=1e-9)
        assert deficit == pytest.approx(0.0, abs=1e-12)

    def test_global_phase_is_irrelevant(self):
        choi = build_choi(phased_inputs(4, [-1j, 1j, 1j, 1j]))
        assert process_fidelity(choi) == pytest.approx(1.0, abs=1e-12)

    def test_output_unitary_preserves_trace(self):
        choi = random_choi(9)
        rotated = apply_output_unitary(choi, local_phase_unitary(0.3, 1.2))
        assert rotated.trace == pytest.approx(choi.trace)


class TestAverageFidelity:
    """Average gate fidelity"""

    @pytest.mark.parametrize(
        "process,expected", [(0.942, 0.9536), (0.971, 0.9768), (1.0, 1.0), (0.25, 0.4)]
    )
    def test_values(self, process, expected):
        assert average_fidelity(process) == pytest.approx(expected, abs=5e-5)

    def test_gate_result_derives_average(self):
        result = GateResult(gate_time=74.0, process_fidelity=0.942, local_phases=(0.1, -0.2))
        assert result.average_fidelity == pytest.approx(0.9536)
        data = result.to_dict()
        assert data["local_phases"] == [0.1, -0.2]
        assert data["average_fidelity"] == pytest.approx(0.9536)


def evolved_inputs(spec, t_end):
    """Computational inputs propagated to ``t_end`` under the no-jump Hamiltonian."""
    grid = TimeGrid.from_spacing(t_end, t_end)
    states = {}
    for label in LABELS:
        n1, n2 = int(label[0]), int(label[1])
        hamiltonian = build_effective_hamiltonian(spec, n1 + n2)
        psi0 = StateVector.basis_state(hamiltonian.basis, AtomsOnly(n1, n2))
        states[label] = evolve(hamiltonian, psi0, grid)[-1]
    return states


class TestGatePoint:
    """Per-sample fidelity with the Choi checks"""

    def test_decayed_inputs_are_accepted(self):
        states = computational_inputs(4)
        states["11"].amplitudes *= math.sqrt(0.8)
        fidelity, _, _, deficit = gate_point(states)
        assert deficit == pytest.approx(0.05)
        assert 0.0 <= fidelity <= 1.0

    def test_norm_gain_is_rejected(self):
        states = computational_inputs(4)
        states["11"].amplitudes *= math.sqrt(1.2)
        with pytest.raises(NumericalIntegrityError, match="trace"):
            gate_point(states)


class TestChoiProperties:
    """Choi matrices of random lossy gates stay physical"""

    @pytest.mark.parametrize("seed", range(100))
    def test_random_gate_is_physical(self, seed):
        rng = np.random.default_rng(1000 + seed)
        spec = create_random_system(
            10,
            seed=seed,
            qubit_decay=float(rng.uniform(0.0, 0.05)),
            cavity_decay=float(rng.uniform(0.0, 0.05)),
        )
        states = evolved_inputs(spec, float(rng.uniform(0.5, 8.0)))

        choi = build_choi(states).validate(1e-9)
        assert np.linalg.eigvalsh(choi.matrix).min() >= -1e-10
        assert choi.trace <= 1.0 + 1e-9
        fidelity, _, _, deficit = gate_point(states)
        assert 0.0 <= fidelity <= 1.0 + 1e-9
        assert deficit >= -1e-9

import numpy as np
import pytest

from core.config import settings
from core.errors import VanishingPostselectionError
from models.enums import EngineKind, EvolutionMode, NoiseModel, RunStatus
from schemas.hamiltonians import Schedule
from schemas.simulator import NoiseConfig
from services.block_encoding import BlockEncodingService
from services.dynamic_engine import DynamicEngineService
from services.evolution import EvolutionService
from services.hamiltonians import HamiltonianService
from services.problems import ProblemService

GAUSSIAN = NoiseConfig(model=NoiseModel.MEASUREMENT_GAUSSIAN, strength=1e-3)


def test_identity_system_stays_solved(identity_instance):
    """With A = I the initial vector is already the solution and every segment keeps it."""
    # 1. Setup
    schedule = Schedule(steps=25, dt=0.1)
    expected = np.concatenate([identity_instance.b, [0.0, 0.0]])

    # 2. Action
    trace = DynamicEngineService.run_segmented_solve(identity_instance, schedule)

    # 3. Assertions
    assert len(trace.records) == 25
    for record in trace.records:
        assert np.allclose(record.vector, expected, atol=1e-12)
    assert trace.status == RunStatus.OK
    assert trace.fidelity == pytest.approx(1.0, abs=1e-12)


def test_records_are_well_formed(medium_instance, short_schedule):
    trace = DynamicEngineService.run_segmented_solve(medium_instance, short_schedule)

    assert [record.step for record in trace.records] == list(range(1, short_schedule.steps + 1))
    for record in trace.records:
        assert record.vector.shape == (8,)
        assert np.linalg.norm(record.vector) == pytest.approx(1.0, abs=1e-10)
        assert set(np.unique(record.signs)) <= {-1.0, 1.0}
        assert record.probabilities.sum() == pytest.approx(1.0)
        assert 0 < record.success_probability <= 1
    assert np.array_equal(trace.final_state, trace.records[-1].vector)


def test_circuit_and_dense_engines_agree(small_instance):
    """Gate-level simulation and the direct R_k product produce the same segments."""
    schedule = Schedule(steps=30, dt=0.1)

    circuit = DynamicEngineService.run_segmented_solve(small_instance, schedule, engine=EngineKind.CIRCUIT)
    dense = DynamicEngineService.run_segmented_solve(small_instance, schedule, engine=EngineKind.DENSE)

    for a, b in zip(circuit.records, dense.records):
        assert np.allclose(a.vector, b.vector, atol=1e-9)
        assert np.array_equal(a.signs, b.signs)
        assert a.success_probability == pytest.approx(b.success_probability, abs=1e-12)


def test_engines_agree_under_measurement_noise(small_instance):
    schedule = Schedule(steps=15, dt=0.1)

    circuit = DynamicEngineService.run_segmented_solve(
        small_instance, schedule, noise=GAUSSIAN, engine=EngineKind.CIRCUIT, seed=5,
    )
    dense = DynamicEngineService.run_segmented_solve(
        small_instance, schedule, noise=GAUSSIAN, engine=EngineKind.DENSE, seed=5,
    )
    assert np.allclose(circuit.final_state, dense.final_state, atol=1e-9)


ORACLE_CASES = [
    (dim, kappa, seed, EngineKind.CIRCUIT if dim <= 4 else EngineKind.DENSE)
    for dim in (2, 4, 8, 16)
    for kappa in (10.0, 50.0)
    for seed in (0, 1, 2)
]


@pytest.mark.parametrize("dim, kappa, seed, engine", ORACLE_CASES)
def test_noiseless_engine_follows_first_order_reference(dim, kappa, seed, engine):
    """At the shipped dt, predicted signs rebuild the renormalized first-order product at every step."""
    # 1. Setup
    instance = ProblemService.generate_instance(dim, kappa, seed)
    schedule = Schedule(steps=500, dt=settings.DEFAULT_DT)

    # 2. Action
    trace = DynamicEngineService.run_segmented_solve(instance, schedule, engine=engine)
    reference = EvolutionService.evolve_product(instance, schedule, EvolutionMode.FIRST_ORDER)

    # 3. Assertions
    cosines = []
    for record, state in zip(trace.records, reference.states[1:]):
        u, v = EvolutionService.real_coordinates(state)
        oracle = np.concatenate([u, v])
        cosines.append(abs(np.dot(record.vector, oracle)) / np.linalg.norm(oracle))
    assert len(cosines) == schedule.steps
    assert min(cosines) >= 0.999
    assert cosines[-1] >= 0.9999


def test_first_segment_signs_are_classical(small_instance, short_schedule):
    pair = HamiltonianService.build_pair(small_instance)
    H1 = HamiltonianService.interpolate(pair, short_schedule.s_at(1))
    R1 = BlockEncodingService.step_operator_matrix(H1, short_schedule.dt)
    w0 = np.concatenate([small_instance.b, [0.0, 0.0]])

    trace = DynamicEngineService.run_segmented_solve(small_instance, short_schedule)
    assert np.array_equal(trace.records[0].signs, np.where(R1 @ w0 >= 0, 1.0, -1.0))


def test_literal_bootstrap_persists_zero_signs(small_instance, short_schedule):
    trace = DynamicEngineService.run_segmented_solve(small_instance, short_schedule, classical_bootstrap=False)
    # the v half starts at exactly zero, so its guide is zero
    assert np.array_equal(trace.records[0].signs[2:], [1.0, 1.0])


def test_noise_is_reproducible_per_seed(small_instance, short_schedule):
    first = DynamicEngineService.run_segmented_solve(small_instance, short_schedule, noise=GAUSSIAN, seed=11)
    again = DynamicEngineService.run_segmented_solve(small_instance, short_schedule, noise=GAUSSIAN, seed=11)
    other = DynamicEngineService.run_segmented_solve(small_instance, short_schedule, noise=GAUSSIAN, seed=12)

    assert np.array_equal(first.final_state, again.final_state)
    assert not np.array_equal(first.records[0].probabilities, other.records[0].probabilities)
    assert first.delta == pytest.approx(0.01)


def test_depolarizing_run_completes(small_instance, short_schedule):
    noise = NoiseConfig(model=NoiseModel.DEPOLARIZING, strength=0.05)
    trace = DynamicEngineService.run_segmented_solve(small_instance, short_schedule, noise=noise, seed=2)

    assert len(trace.records) == short_schedule.steps
    assert 0.0 <= trace.result.fidelity_before_truncation <= 1.0


def test_vanishing_postselection_names_the_step(small_instance, short_schedule, monkeypatch):
    def vanish(w, R, n, engine):
        raise VanishingPostselectionError("post-selection probability vanished", probability=0.0)

    monkeypatch.setattr(DynamicEngineService, "_encoded_step", staticmethod(vanish))

    with pytest.raises(VanishingPostselectionError) as exc_info:
        DynamicEngineService.run_segmented_solve(small_instance, short_schedule)
    assert exc_info.value.detail["step"] == 1
    assert exc_info.value.detail["probability"] == 0.0


# --- depth report ---

def test_depth_of_two_dimensional_system(small_instance):
    report = DynamicEngineService.depth_report(small_instance, Schedule(steps=100, dt=0.1))

    # 4^2 rotations + two Hadamard layers + swap layer + state preparation
    assert report.segment_depth == 20
    assert report.dynamic_total == 20
    assert report.conventional_total == 2000
    assert report.gate_count == 22
    assert report.qubits == 5


def test_dynamic_depth_is_independent_of_steps(small_instance):
    short = DynamicEngineService.depth_report(small_instance, Schedule(steps=200, dt=0.1))
    long = DynamicEngineService.depth_report(small_instance, Schedule(steps=2000, dt=0.1))

    assert short.dynamic_total == long.dynamic_total
    assert long.conventional_total == 10 * short.conventional_total


def test_segment_depth_grows_with_dimension(small_instance, medium_instance):
    schedule = Schedule(steps=10, dt=0.1)
    assert DynamicEngineService.depth_report(medium_instance, schedule).segment_depth == 4**3 + 4
    assert (
        DynamicEngineService.depth_report(medium_instance, schedule).segment_depth
        > DynamicEngineService.depth_report(small_instance, schedule).segment_depth
    )

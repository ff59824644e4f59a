"""Count simulation, NDJSON round trips and witness estimation."""

from __future__ import annotations

import numpy as np
import pytest

from symwit.compiler import LocalTerm, Schedule, Setting, compile_operator
from symwit.counts import (
    CountRecord,
    CountsDataset,
    evaluate_counts,
    evaluate_witness_counts,
    simulate_counts,
)
from symwit.linalg import DenseOperator, StateVector, op_power
from symwit.symmetric import collective_j, dicke
from symwit.witnesses import NoiseModel, catalog


def single_term_schedule(num_qubits: int, n_ints, coeff=1.0, scale=1.0, w=0.0) -> Schedule:
    return Schedule(num_qubits, [LocalTerm(coeff, Setting.from_ints(n_ints), scale, w)])


def test_simulate_z_basis_is_deterministic_for_basis_states():
    # |01> measured along z gives the pattern "+-" every shot
    state = StateVector(np.array([0.0, 1.0, 0.0, 0.0]))  # |01>, qubit 1 = MSB
    schedule = single_term_schedule(2, (0, 0, 1))
    data = simulate_counts(state, schedule, shots_per_setting=100, seed=0)
    assert len(data.records) == 1
    assert data.records[0].outcomes == "+-"
    assert data.records[0].count == 100


def test_simulate_x_basis_on_bell_state():
    # |Phi+> is a +1 eigenstate of XX: the two outcomes always agree
    bell = StateVector(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
    schedule = single_term_schedule(2, (1, 0, 0))
    data = simulate_counts(bell, schedule, shots_per_setting=2000, seed=1)
    assert {rec.outcomes for rec in data.records} == {"++", "--"}
    result = evaluate_counts(schedule, data, bootstrap_samples=50, seed=1)
    assert abs(result.witness_value - 1.0) < 1e-12  # exactly 1 shot by shot


def test_estimator_matches_dense_oracle_within_errors():
    target = dicke(4, 2)
    op = op_power(collective_j(4, "x"), 2)
    schedule = compile_operator(op)
    oracle = float(np.real(op.expectation(target)))
    data = simulate_counts(target, schedule, shots_per_setting=50_000, seed=7)
    result = evaluate_counts(schedule, data, seed=7)
    assert abs(result.witness_value - oracle) < 4 * result.standard_error
    assert result.standard_error < 0.05


def test_estimator_is_exactly_linear_in_coefficients():
    target = dicke(4, 2)
    op = op_power(collective_j(4, "x"), 2)
    schedule = compile_operator(op)
    scaled = Schedule(4, [
        LocalTerm(3.0 * float(t.coefficient), t.setting, t.scale, t.identity_weight)
        for t in schedule.terms
    ])
    data = simulate_counts(target, schedule, shots_per_setting=2_000, seed=3)
    a = evaluate_counts(schedule, data, bootstrap_samples=0)
    b = evaluate_counts(scaled, data, bootstrap_samples=0)
    assert b.witness_value == pytest.approx(3.0 * a.witness_value, abs=1e-12)


def test_per_term_breakdown_sums_exactly():
    w = catalog("WP3_D63")
    schedule = compile_operator(w.dense).merged()
    data = simulate_counts(dicke(6, 3), schedule, shots_per_setting=5_000, seed=5)
    result = evaluate_counts(schedule, data, seed=5)
    total = sum(t.contribution for t in result.per_term)
    assert total == result.witness_value


def test_bootstrap_is_seed_deterministic():
    w = catalog("WP_D42")
    schedule = compile_operator(w.dense).merged()
    data = simulate_counts(dicke(4, 2), schedule, shots_per_setting=2_000, seed=9)
    r1 = evaluate_counts(schedule, data, seed=123)
    r2 = evaluate_counts(schedule, data, seed=123)
    r3 = evaluate_counts(schedule, data, seed=124)
    assert r1.standard_error == r2.standard_error
    assert r1.standard_error != r3.standard_error
    assert r1.witness_value == r3.witness_value  # value has no randomness


def test_ndjson_round_trip_is_byte_stable():
    schedule = compile_operator(catalog("WP_D42").dense).merged()
    data = simulate_counts(dicke(4, 2), schedule, shots_per_setting=500, seed=2)
    text = data.to_ndjson()
    back = CountsDataset.from_ndjson(text)
    assert back.to_ndjson() == text
    assert back.num_qubits == 4


def test_ndjson_sign_convention_flip():
    line = '{"setting": [0, 0, 1], "outcomes": "+-", "count": 5}'
    flipped = '{"setting": [0, 0, -1], "outcomes": "-+", "count": 5}'
    a = CountsDataset.from_ndjson(line)
    b = CountsDataset.from_ndjson(flipped)
    assert a.records[0].outcomes == b.records[0].outcomes == "+-"
    assert a.records[0].setting.matches(b.records[0].setting)


def test_ndjson_rejects_malformed_lines():
    with pytest.raises(ValueError):
        CountsDataset.from_ndjson('{"setting": [0, 0], "outcomes": "++", "count": 1}')
    with pytest.raises(ValueError):
        CountsDataset.from_ndjson('{"outcomes": "++", "count": 1}')
    with pytest.raises(ValueError):
        CountsDataset.from_ndjson("")
    with pytest.raises(ValueError):
        CountRecord(Setting.from_ints((0, 0, 1)), "+0-", 1)


def test_evaluate_requires_matching_settings():
    schedule = single_term_schedule(2, (1, 0, 0))
    data = CountsDataset(2, (CountRecord(Setting.from_ints((0, 0, 1)), "++", 10),))
    with pytest.raises(ValueError):
        evaluate_counts(schedule, data, bootstrap_samples=0)


def test_evaluate_rejects_wrong_width():
    schedule = single_term_schedule(3, (1, 0, 0))
    data = CountsDataset(2, (CountRecord(Setting.from_ints((1, 0, 0)), "++", 10),))
    with pytest.raises(ValueError):
        evaluate_counts(schedule, data, bootstrap_samples=0)


def test_simulate_accepts_density_matrices():
    w = catalog("WP_D42")
    noise = NoiseModel.white(4)
    rho = DenseOperator(0.8 * dicke(4, 2).density().mat + 0.2 * noise.rho_noise.mat)
    schedule = compile_operator(w.dense).merged()
    oracle = float(np.real((w.dense @ rho).trace()))
    data = simulate_counts(rho, schedule, shots_per_setting=50_000, seed=13)
    result = evaluate_counts(schedule, data, seed=13)
    assert abs(result.witness_value - oracle) < 4 * result.standard_error


def test_witness_wrapper_adds_fidelity_fields():
    w = catalog("WP3_D63")
    schedule = compile_operator(w.dense).merged()
    data = simulate_counts(dicke(6, 3), schedule, shots_per_setting=20_000, seed=17)
    result = evaluate_witness_counts(w, data, schedule=schedule, seed=17)
    want = w.lambda_sq - result.witness_value / w.alpha
    assert result.fidelity_bound == pytest.approx(want, abs=1e-12)
    assert result.fidelity_bound_error == pytest.approx(
        result.standard_error / w.alpha, abs=1e-15
    )
    # a certificate-free witness leaves the fields empty
    w2 = catalog("WI2_D63")
    schedule2 = compile_operator(w2.dense).merged()
    data2 = simulate_counts(dicke(6, 3), schedule2, shots_per_setting=1_000, seed=19)
    result2 = evaluate_witness_counts(w2, data2, schedule=schedule2, seed=19)
    assert result2.fidelity_bound is None
    assert result2.fidelity_bound_error is None


def test_evaluation_result_json():
    w = catalog("WP_D42")
    schedule = compile_operator(w.dense).merged()
    data = simulate_counts(dicke(4, 2), schedule, shots_per_setting=1_000, seed=23)
    result = evaluate_witness_counts(w, data, schedule=schedule, seed=23)
    payload = result.to_json()
    assert payload["witness_value"] == result.witness_value
    assert len(payload["per_term"]) == len(result.per_term)

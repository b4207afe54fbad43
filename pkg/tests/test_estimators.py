import math

import numpy as np
import pytest

from qpe import qstate
from qpe import rng as qrng
from qpe.errors import ResourceError, ValidationError
from qpe.qcircuit import gate
from qpe.qpea import (PhaseProblem, analytic_pj, ancilla_step, aspuru_guzik, bits_of,
                      circular_distance, constraint_arcs, feedback_angle, intersect_arcs, ipea,
                      ipea_oracle_batch, ipea_outcome_distribution, kitaev_pea,
                      qft_pea_distribution, qft_pea_result, uniform_plan)


def phase_gate_problem(phi, m):
    """Explicit two-qubit unitary with eigenstate |11> and eigenphase phi."""
    u = np.diag([1, np.exp(0.3j), np.exp(-1.1j), np.exp(2j * math.pi * phi)])
    return PhaseProblem(m, unitary=u, eigenstate=qstate.basis_state(2, "11"))


@pytest.mark.parametrize("phi", [0.0, 0.3, 0.61803, 0.999])
@pytest.mark.parametrize("m", [1, 3, 5])
def test_qft_distribution_three_routes(phi, m):
    oracle = qft_pea_distribution(PhaseProblem(m, phi=phi))
    circuit = qft_pea_distribution(phase_gate_problem(phi, m))
    closed = [analytic_pj(phi, m, j) for j in range(2 ** m)]
    assert np.allclose(oracle, closed, atol=1e-10)
    assert np.allclose(circuit, closed, atol=1e-10)


def test_qft_result_majority_readout(rng):
    res = qft_pea_result(PhaseProblem(4, phi=5 / 16), rng, shots=7)
    assert res.estimate == 5 / 16 and res.success
    assert res.extra["counts"] == {"0101": 7}


def test_feedback_angle_values():
    assert feedback_angle([]) == 0.0
    assert feedback_angle([1]) == pytest.approx(-math.pi / 2)
    assert feedback_angle([1, 1]) == pytest.approx(-2 * math.pi * 0.375)


def test_ancilla_step_oracle_and_circuit_agree():
    phi = 0.3719
    for power in (1, 2, 8):
        for omega in (0.0, -1.0):
            a, _ = ancilla_step(PhaseProblem(4, phi=phi), power, omega)
            b, _ = ancilla_step(phase_gate_problem(phi, 4), power, omega)
            assert a == pytest.approx(b, abs=1e-12)
            assert a == pytest.approx(math.cos(math.pi * ((power * phi) % 1) + omega / 2) ** 2)


@pytest.mark.parametrize("m", [1, 4, 6])
def test_ipea_exact_phases_are_deterministic(m, rng):
    for j in range(2 ** m):
        r = ipea(PhaseProblem(m, phi=j / 2 ** m), rng)
        assert r.bits == bits_of(j, m)
        assert all(rec.freq == 1.0 for rec in r.per_bit)


def test_ipea_distribution_oracle_matches_circuit():
    phi = 0.2871
    a = ipea_outcome_distribution(PhaseProblem(4, phi=phi))
    b = ipea_outcome_distribution(phase_gate_problem(phi, 4))
    assert a.sum() == pytest.approx(1.0)
    assert np.allclose(a, b, atol=1e-12)


def test_ipea_sampling_matches_exact_distribution():
    phi, m, n = 0.2871, 4, 40000
    exact = ipea_outcome_distribution(PhaseProblem(m, phi=phi))
    out = ipea_oracle_batch(phi, m, qrng.stream(9), n)
    js = out @ (1 << np.arange(m - 1, -1, -1))
    freq = np.bincount(js, minlength=2 ** m) / n
    sigma = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(freq - exact) <= 4 * sigma + 1e-9)


def test_ipea_reuse_keeps_eigenstate():
    prob = phase_gate_problem(11 / 32, 5)
    r = ipea(prob, qrng.stream(1), uniform_plan(5, 3), reuse=True)
    assert r.estimate == 11 / 32 and r.shots == 15


def test_ipea_batch_matches_scalar_path():
    phi, m = 0.7123, 5
    g = qrng.stream(3)
    batch = ipea_oracle_batch(phi, m, g, 20000)
    scalar = np.array([ipea(PhaseProblem(m, phi=phi), qrng.stream(4, i)).bits
                       for i in range(2000)])
    assert np.allclose(batch.mean(axis=0), scalar.mean(axis=0), atol=0.04)


def test_constraint_arcs_cover_half_circle():
    for mult in (1, 2, 4, 8):
        for bit in (0, 1):
            arcs = constraint_arcs(mult, 0.0, bit)
            assert sum(w for _, w in arcs) == pytest.approx(0.5)
            # every arc centre satisfies the constraint
            for s, w in arcs:
                c = (mult * (s + w / 2)) % 1.0
                assert circular_distance(c, bit / 2) == pytest.approx(0.0, abs=1e-12)


def test_intersection_narrows_to_two_mirror_arcs():
    phi, m = int("110110", 2) / 64, 6
    region = [(0.0, 1.0)]
    for k in range(1, m + 1):
        frac = (2 ** (k - 1) * phi) % 1.0
        x = 0 if circular_distance(frac, 0.0) <= 0.25 else 1
        region = intersect_arcs(region, constraint_arcs(2 ** (k - 1), 0.0, x))
    assert len(region) == 2
    assert all(w == pytest.approx(2.0 ** -(m + 1)) for _, w in region)
    centres = sorted((s + w / 2) % 1 for s, w in region)
    assert centres[0] + centres[1] == pytest.approx(1.0)


@pytest.mark.parametrize("phi", [0.0, 0.5])
def test_kitaev_single_trial_exact_when_probabilities_are_sharp(phi):
    for seed in range(20):
        r = kitaev_pea(PhaseProblem(6, phi=phi), qrng.stream(seed), 1)
        assert circular_distance(r.estimate, phi) < 2 ** -6


def test_kitaev_many_trials_recovers_dyadic_phase():
    phi = int("110110", 2) / 64
    ok = sum(circular_distance(kitaev_pea(PhaseProblem(6, phi=phi), qrng.stream(s), 101).estimate,
                               phi) < 2 ** -6 for s in range(30))
    assert ok >= 27


def test_kitaev_rejects_even_trials():
    with pytest.raises(ValidationError):
        kitaev_pea(PhaseProblem(3, phi=0.1), qrng.stream(0), 4)


def test_aspuru_guzik_exact_phase():
    r = aspuru_guzik(PhaseProblem(6, phi=45 / 64), qrng.stream(0), mode="most_likely")
    assert r.estimate == 45 / 64


def test_aspuru_guzik_circuit_route():
    phi = 0.40625
    r = aspuru_guzik(phase_gate_problem(phi, 3), qrng.stream(0), ancilla_bits=3,
                     mode="most_likely")
    assert circular_distance(r.estimate, phi) < 2 ** -3


def test_resource_limit():
    big = PhaseProblem(19, unitary=np.eye(4), eigenstate=qstate.basis_state(2, "00"))
    with pytest.raises(ResourceError):
        qft_pea_distribution(big)


def test_result_json_round_trip(rng):
    import json
    r = ipea(PhaseProblem(3, phi=0.25), rng)
    d = json.loads(r.to_json())
    assert d["bits"] == [0, 1, 0] and d["success"] is True

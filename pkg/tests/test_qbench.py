import math

import numpy as np
import pytest

from qpe import qbench
from qpe import rng as qrng
from qpe.errors import ValidationError
from qpe.qnoise import NoiseModel
from qpe.qpea import PhaseProblem, ancilla_step


@pytest.mark.parametrize("bid", qbench.IDS)
def test_noiseless_steps_follow_ipea_law(bid):
    # Oracle: ideal single-ancilla round on the abstract phase alpha / 2 pi.
    spec = qbench.BenchmarkSpec(id=bid, m=6)
    g = np.random.default_rng(0)
    for _ in range(20):
        alpha = g.uniform(0, 2 * math.pi)
        k = int(g.integers(1, 7))
        omega = g.uniform(-math.pi, 0)
        ideal, _ = ancilla_step(PhaseProblem(6, phi=alpha / (2 * math.pi)), 2 ** (k - 1), omega)
        assert qbench.step_p0(spec, k, omega, alpha, None) == pytest.approx(ideal, abs=1e-10)


def test_aliases_and_validation():
    assert qbench.BenchmarkSpec(id="III").id == "III_unknown_gamma"
    assert qbench.BenchmarkSpec(id="III", gamma_t=0.4).alpha == pytest.approx(0.8)
    with pytest.raises(ValidationError):
        qbench.BenchmarkSpec(id="IV")
    with pytest.raises(ValidationError):
        qbench.BenchmarkSpec(trials=0)


def test_dump_of_step_lists_figure_gates():
    c = qbench.build_benchmark_step(qbench.BenchmarkSpec(id="II_zz", m=3), 2, 0.5, 1.0)
    assert [o.gate.name for o in c.ops] == ["Rx", "ZZ", "Rz", "Rx"]


def test_noiseless_run_exact_grid_succeeds():
    spec = qbench.BenchmarkSpec(id="I", m=6, alpha=2 * math.pi * 37 / 64, trials=5)
    r = qbench.run_benchmark(spec)
    assert r.success_rate == 1.0 and r.per_bit_freq == [1.0] * 6


@pytest.mark.parametrize("delta_frac", [0.2, 0.8])
def test_analytic_law_matches_simulation_both_sides_of_half(delta_frac):
    m = 5
    alpha = 2 * math.pi * (11 + delta_frac) / 2 ** m
    noise = NoiseModel(sigma_x=0.2, dephasing_ratio=0.01)
    spec = qbench.BenchmarkSpec(id="III", m=m, alpha=alpha, noise=noise)
    for k in (1, 3, 5):
        sim = qbench.bit_success_rate(spec, k, 3000, seed=k, alpha=alpha)
        exp = qbench.analytic_p_err(alpha, m, k, 0.2, 0.01)
        assert abs(sim - exp) <= 4 * math.sqrt(exp * (1 - exp) / 3000) + 1e-3


def test_analytic_law_limits():
    assert qbench.analytic_p_err(2 * math.pi * 3 / 16, 4, 2) == pytest.approx(1.0)
    # large dephasing washes the bit out to a coin flip
    assert qbench.analytic_p_err(3.0, 4, 4, 0.0, 10.0) == pytest.approx(0.5, abs=1e-6)


def test_budget_grows_with_dephasing():
    base = qbench.BenchmarkSpec(id="III", m=6)
    totals = [qbench.measurement_budget(base.with_(noise=NoiseModel(dephasing_ratio=r))).total
              for r in (0.01, 0.02, 0.05)]
    assert totals == sorted(totals)
    maxes = [qbench.max_bits_under_budget(base.with_(noise=NoiseModel(dephasing_ratio=r)))
             for r in (0.01, 0.1)]
    assert maxes[0] > maxes[1] >= 1


def test_planned_run_uses_plan_total():
    spec = qbench.BenchmarkSpec(id="III", m=4, trials=8, use_plan=True,
                                noise=NoiseModel(dephasing_ratio=0.02))
    r = qbench.run_benchmark(spec)
    assert r.total_measurements == r.plan.total > 4


def test_run_is_reproducible_and_order_free():
    spec = qbench.BenchmarkSpec(id="II_xx", m=5, trials=30, noise=NoiseModel(delta={"XX": 0.3}))
    assert qbench.run_benchmark(spec).to_dict() == qbench.run_benchmark(spec).to_dict()
    # Trial i depends only on (seed, i): a shorter run is a prefix.
    a = [qbench._run_trial(spec, i, None, 0) for i in range(10)]
    b = [qbench._run_trial(spec.with_(trials=10), i, None, 0) for i in range(10)]
    assert a == b


def test_sweep_rows_sorted_and_schema():
    spec = qbench.BenchmarkSpec(id="I", m=3, trials=4)
    rows = qbench.sweep(spec, "delta_all", [0.3, 0.0, 0.1])
    assert [r["value"] for r in rows] == [0.0, 0.1, 0.3]
    assert all(set(r) == set(qbench.CSV_HEADER) for r in rows)
    with pytest.raises(ValidationError):
        qbench.sweep(spec, "banana", [1])


def test_uniform_noise_hurts_success():
    spec = qbench.BenchmarkSpec(id="I", m=6, trials=200, alpha=2 * math.pi * 21 / 64)
    clean = qbench.run_benchmark(spec).success_rate
    noisy = qbench.run_benchmark(spec.with_(noise=NoiseModel(
        delta={c: 0.5 for c in ("Rz", "Rx", "XX")}))).success_rate
    assert clean == 1.0 and noisy < clean


def test_presets_are_valid_specs():
    for name, pre in qbench.PRESETS.items():
        pre = dict(pre)
        param, values = pre.pop("param"), pre.pop("values")
        if "noise" in pre:
            pre["noise"] = NoiseModel.from_dict(pre["noise"])
        spec = qbench.BenchmarkSpec(**pre)
        for v in values:
            qbench.spec_with_param(spec, param, v)


def test_budget_search_skips_unplannable_small_m():
    # alpha = pi/2 is phi = 1/4: at m = 1 the only bit is a coin flip.
    spec = qbench.BenchmarkSpec(id="III", alpha=math.pi / 2,
                                noise=NoiseModel(dephasing_ratio=0.05))
    with pytest.raises(ValidationError):
        qbench.measurement_budget(spec.with_(m=1))
    assert qbench.max_bits_under_budget(spec) >= 4

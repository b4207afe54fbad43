"""How far can the iterative estimator be pushed on noisy two-qubit hardware?

Sweeps uniform gate-angle noise on the XX-coupled benchmark, then shows the
majority-vote measurement budget under dephasing for the coupling-strength
benchmark.
"""
from qpe import qbench
from qpe.qnoise import NoiseModel

spec = qbench.BenchmarkSpec(id="I_xx_cnots", m=8, trials=200, seed=1)
print("relative angle noise  ->  success rate (8 bits, 200 runs)")
for row in qbench.sweep(spec, "delta_all", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]):
    bar = "#" * int(40 * row["success_rate"])
    print(f"  {row['value']:.1f}  {row['success_rate']:.3f} {bar}")

print("\ndephasing ratio  ->  bits reachable with 10^4 measurements")
for ratio in (0.005, 0.01, 0.02, 0.05, 0.1):
    s = qbench.BenchmarkSpec(id="III", noise=NoiseModel(dephasing_ratio=ratio))
    print(f"  {ratio:<6}  {qbench.max_bits_under_budget(s, 10_000)}")

plan = qbench.measurement_budget(qbench.BenchmarkSpec(id="III", m=6,
                                                      noise=NoiseModel(dephasing_ratio=0.05)))
print("\nrepetitions per bit at ratio 0.05, m=6:", list(plan.n), "total", plan.total)

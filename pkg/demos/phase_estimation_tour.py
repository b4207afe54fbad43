"""Four ways to read an eigenphase, side by side.

Runs the QFT-based estimator, the single-ancilla iterative scheme, Kitaev's
interval intersection and the Aspuru-Guzik recursion on the same phase and
prints what each one reports.
"""
import math

from qpe import rng
from qpe.qpea import (PhaseProblem, analytic_bounds, aspuru_guzik, ipea, kitaev_pea,
                      qft_pea_result, split_phase)

PHI = 0.3719
M = 6

prob = PhaseProblem(M, phi=PHI)
j, delta = split_phase(PHI, M)
down, up = analytic_bounds(delta, M)
print(f"phi = {PHI}  ->  nearest {M}-bit neighbours {j}/{2 ** M} and {j + 1}/{2 ** M}")
print(f"closed form: P(down)={down:.3f}  P(up)={up:.3f}  (limit 8/pi^2 = {8 / math.pi ** 2:.3f})\n")

runs = {
    "QFT, 9 shots": qft_pea_result(prob, rng.stream(1), shots=9),
    "iterative, 1 shot/bit": ipea(prob, rng.stream(2)),
    "Kitaev, 15 trials/bit": kitaev_pea(prob, rng.stream(3), 15),
    "Aspuru-Guzik, 4 ancillas": aspuru_guzik(prob, rng.stream(4), mode="most_likely"),
}
for name, r in runs.items():
    err = min(abs(r.estimate - PHI), 1 - abs(r.estimate - PHI))
    print(f"{name:26s} estimate {r.estimate:.6f}  error {err:.5f}  "
          f"measurements {r.shots:4d}  flags {r.flags or '-'}")

ok = sum(min(abs(r.estimate - PHI), 1 - abs(r.estimate - PHI)) < 2 ** -M
         for r in (aspuru_guzik(prob, rng.stream(100, s)) for s in range(300)))
print(f"\nsampled Aspuru-Guzik runs within 2^-{M}: {ok}/300 "
      "(a rare far-off readout in one round spoils the whole run)")

print("\nAspuru-Guzik round by round (most likely readouts):")
for row in runs["Aspuru-Guzik, 4 ancillas"].extra["table"]:
    print(f"  k={row['k']}  working phase {row['working_phase']:.5f}  read {row['result']}  "
          f"running estimate {row['estimate']}")

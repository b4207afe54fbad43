"""Factoring-style order finding: the period of 7^x mod 15 from phase readouts."""
from qpe import rng
from qpe.qpea import continued_fraction, order_finding_demo

res = order_finding_demo(7, 15, 11, rng.stream(2024), shots=8)
print("readouts j (of 2^11):", res["samples"])
for j in sorted(set(res["samples"])):
    conv = continued_fraction(j, 2 ** 11) if j else [(0, 1)]
    print(f"  j={j:5d}  convergents {conv}")
print("votes per candidate order:", res["votes"])
print("order r =", res["r"], " check 7^r mod 15 =", pow(7, res["r"], 15))

"""Entanglement-keyed authentication, a forging attack, hidden bits in a
repetition code, and superdense coding."""
import numpy as np

from qpe import qcrypto
from qpe.qcircuit import gate

plus = np.full((2, 2), 0.5, dtype=complex)
auth = qcrypto.report_auth(rho_m=plus)
print(f"authentication: tag accepted with p={auth['verify_probability']:.3f}, "
      f"message distortion {auth['message_trace_distance']:.1e}")

attack = qcrypto.report_attack(gate("X").matrix)
print(f"X attack on a product code: tag accepted with p={attack['verify_probability']:.3f} "
      f"while the message moved by {attack['message_trace_distance']:.2f} in trace distance")

for msg in ("00", "01", "10", "11"):
    r = qcrypto.report_stego(0.6, 0.8, msg)
    print(f"hidden '{msg}' -> syndrome '{r['recovered_message']}', "
          f"logical qubit error {r['logical_error']:.1e}")

for msg in ("00", "01", "10", "11"):
    r = qcrypto.report_superdense(msg)
    print(f"superdense '{msg}' -> '{r['decoded']}', eavesdropper sees I/2 within "
          f"{r['eve_trace_distance_to_mixed']:.1e}")

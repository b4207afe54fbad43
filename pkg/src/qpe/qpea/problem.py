"""Phase-estimation problem description and result records."""
import json
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np

from .. import qmath, qstate
from ..errors import ResourceError, ValidationError

MAX_SIM_QUBITS = 20


class PhaseProblem:
    """Either an abstract phase oracle ``phi`` or an explicit unitary with an
    eigenstate preparer; ``m`` is the number of bits wanted."""

    def __init__(self, m, phi=None, unitary=None, eigenstate=None):
        if int(m) != m or m < 1:
            raise ValidationError(f"m must be a positive integer, got {m}")
        self.m = int(m)
        if (phi is None) == (unitary is None):
            raise ValidationError("give exactly one of phi or unitary")
        self.phi = None
        self.unitary = None
        self._prep = None
        self._powers = {}
        if phi is not None:
            phi = float(phi)
            if not 0.0 <= phi < 1.0:
                raise ValidationError(f"phi={phi} outside [0, 1)")
            self.phi = phi
            self.n_system = 0
            return
        u = qmath.require_unitary(qmath.as_matrix(unitary), "unitary")
        self.unitary = u
        self.n_system = qmath.n_qubits_of(u.shape[0])
        if eigenstate is None:
            raise ValidationError("an explicit unitary needs an eigenstate preparer")
        if callable(eigenstate):
            self._prep = eigenstate
        else:
            s = eigenstate if isinstance(eigenstate, qstate.StateVector) else qstate.StateVector(eigenstate)
            if s.n_qubits != self.n_system:
                raise ValidationError("eigenstate size does not match the unitary")
            self._prep = lambda: s
        self._powers[1] = u

    @property
    def is_oracle(self):
        return self.phi is not None

    def prepare(self):
        s = self._prep()
        if not isinstance(s, qstate.StateVector):
            s = qstate.StateVector(s)
        return s

    def power(self, e):
        """U^e for e a power of two, by repeated squaring."""
        if e in self._powers:
            return self._powers[e]
        half = self.power(e // 2)
        self._powers[e] = half @ half
        return self._powers[e]

    def check_size(self, n_ancilla):
        if n_ancilla + self.n_system > MAX_SIM_QUBITS:
            raise ResourceError(
                f"{n_ancilla} ancillas + {self.n_system} system qubits exceeds {MAX_SIM_QUBITS}")


@dataclass
class BitRecord:
    k: int
    omega_k: float
    n_k: int
    freq: float          # fraction of the n_k shots that agreed with the decided bit
    bit: int

    def to_dict(self):
        return {"k": self.k, "omega_k": self.omega_k, "n_k": self.n_k, "freq": self.freq,
                "bit": self.bit}


@dataclass
class PhaseRunResult:
    algorithm: str
    m: int
    bits: List[int]
    estimate: float
    shots: int
    per_bit: List[BitRecord] = field(default_factory=list)
    phi_true: Optional[float] = None
    flags: List[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def success(self):
        """True when the estimate is within 2^-m of the true phase (mod 1)."""
        if self.phi_true is None:
            return None
        d = abs(self.estimate - self.phi_true) % 1.0
        return min(d, 1.0 - d) < 2.0 ** -self.m

    def to_dict(self):
        d = {"algorithm": self.algorithm, "m": self.m}
        if self.phi_true is not None:
            d["phi_true"] = self.phi_true
        d.update({"bits": list(self.bits), "estimate": self.estimate, "shots": self.shots,
                  "per_bit": [b.to_dict() for b in self.per_bit]})
        if self.phi_true is not None:
            d["success"] = bool(self.success)
        if self.flags:
            d["flags"] = list(self.flags)
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

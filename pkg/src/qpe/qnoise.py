"""Gate-angle noise and pure dephasing for the benchmark circuits.

Each parametric gate draws one uniform and one normal variate whether or not
its class is noisy, so switching one noise class on leaves the samples seen
by every other class unchanged for the same seed.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import qstate
from .errors import ValidationError
from .qcircuit import rotation_matrix

CLASSES = ("Rz", "Rx", "ZZ", "XX")
COUPLING = ("ZZ", "XX")


@dataclass(frozen=True)
class NoiseModel:
    delta: dict = field(default_factory=dict)      # class -> relative uniform width
    sigma_x: float = 0.0                           # std-dev of additive noise on Rx
    dephasing_ratio: float = 0.0                   # Gamma_phi / gamma
    enabled: frozenset = frozenset(CLASSES)

    def __post_init__(self):
        d = dict(self.delta)
        for k, v in d.items():
            if k not in CLASSES:
                raise ValidationError(f"unknown noise class {k!r}")
            if v < 0:
                raise ValidationError(f"negative noise width for {k}")
        if self.sigma_x < 0 or self.dephasing_ratio < 0:
            raise ValidationError("noise strengths must be non-negative")
        en = frozenset(self.enabled)
        if en - set(CLASSES):
            raise ValidationError(f"unknown classes in enabled: {sorted(en - set(CLASSES))}")
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "enabled", en)

    @property
    def is_zero(self):
        return (not any(self.delta.values())) and self.sigma_x == 0 and self.dephasing_ratio == 0

    def width(self, cls):
        return self.delta.get(cls, 0.0) if cls in self.enabled else 0.0

    def replace(self, **kw):
        d = dict(delta=self.delta, sigma_x=self.sigma_x, dephasing_ratio=self.dephasing_ratio,
                 enabled=self.enabled)
        d.update(kw)
        return NoiseModel(**d)

    def to_dict(self):
        out = {"delta": dict(self.delta), "sigma_x": self.sigma_x,
               "dephasing_ratio": self.dephasing_ratio}
        if self.enabled != frozenset(CLASSES):
            out["enabled"] = sorted(self.enabled)
        return out

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"delta", "sigma_x", "dephasing_ratio", "enabled"}
        if unknown:
            raise ValidationError(f"unknown noise keys: {sorted(unknown)}")
        delta = d.get("delta", {})
        if not isinstance(delta, dict):
            raise ValidationError("noise 'delta' must be an object")
        try:
            return cls(delta={k: float(v) for k, v in delta.items()},
                       sigma_x=float(d.get("sigma_x", 0.0)),
                       dephasing_ratio=float(d.get("dephasing_ratio", 0.0)),
                       enabled=frozenset(d.get("enabled", CLASSES)))
        except (TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f"bad noise value: {e}") from None

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def perturb_angle_uniform(phi, delta, rng):
    """phi (1 + u), u ~ U(-delta/2, delta/2)."""
    if delta < 0:
        raise ValidationError("delta must be >= 0")
    return phi * (1.0 + delta * (rng.random() - 0.5))


def perturb_angle_gauss(phi, sigma, rng):
    if sigma < 0:
        raise ValidationError("sigma must be >= 0")
    return phi + sigma * rng.standard_normal()


def dephase(rho, qubit, factor):
    """Scale the coherences between qubit=0 and qubit=1 blocks by ``factor``."""
    if not 0.0 <= factor <= 1.0:
        raise ValidationError(f"dephasing factor {factor} outside [0, 1]")
    if not isinstance(rho, qstate.DensityMatrix):
        raise ValidationError("dephasing needs a DensityMatrix")
    n = rho.n_qubits
    if not 0 <= qubit < n:
        raise ValidationError("qubit out of range")
    bit = (np.arange(1 << n) >> (n - 1 - qubit)) & 1
    mask = np.where(bit[:, None] == bit[None, :], 1.0, factor)
    return qstate.DensityMatrix(rho.mat * mask, check=False)


def dephasing_factor(coupling_angle, ratio):
    """Coherence left after a coupling of nominal angle gamma*t.

    Normalised so that the benchmark-III ancilla at step k (angle
    alpha 2^{k-2}) decays by exp(-|alpha| 2^k ratio).
    """
    return math.exp(-4.0 * abs(coupling_angle) * ratio)


def gate_class(op):
    if op.noise_class is not None:
        return op.noise_class
    name = op.gate.name
    for c in CLASSES:
        if name.startswith(c):
            return c
    return None


def apply_noisy(circuit, initial, model, rng):
    """Run ``circuit`` with every rotation angle resampled from ``model``."""
    if initial.n_qubits != circuit.n_qubits:
        raise ValidationError("state and circuit sizes differ")
    if model.dephasing_ratio > 0 and not isinstance(initial, qstate.DensityMatrix):
        raise ValidationError("dephasing needs a DensityMatrix input")
    s = initial
    for op in circuit.ops:
        cls = gate_class(op)
        g = op.gate
        if cls is not None and len(g.params) == 1:
            u = rng.random() - 0.5
            z = rng.standard_normal()
            angle = g.params[0]
            nominal = angle
            width = model.width(cls)
            if width:
                angle = angle * (1.0 + width * u)
            if cls == "Rx" and "Rx" in model.enabled and model.sigma_x:
                angle = angle + model.sigma_x * z
            mat = rotation_matrix(g.name, angle) if angle != nominal else g.matrix
            s = qstate.apply(s, mat, op.targets, check=False)
            if cls in COUPLING and model.dephasing_ratio > 0:
                f = dephasing_factor(nominal, model.dephasing_ratio)
                for q in op.targets:
                    s = dephase(s, q, f)
        else:
            s = qstate.apply(s, g.matrix, op.targets, check=False)
    return s

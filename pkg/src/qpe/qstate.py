"""Pure and mixed register states, projective measurement, Bloch vectors."""
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import qmath
from .errors import ResourceError, ValidationError

MAX_PURE_QUBITS = 20
MAX_MIXED_QUBITS = 10


class StateVector:
    """Normalised amplitude vector of an n-qubit register."""

    __slots__ = ("n_qubits", "amps")

    def __init__(self, amps, check=True):
        a = np.array(amps, dtype=complex).reshape(-1)
        n = qmath.n_qubits_of(a.size)
        if n > MAX_PURE_QUBITS:
            raise ResourceError(f"{n} qubits exceeds the pure-state limit {MAX_PURE_QUBITS}")
        if check and abs(np.linalg.norm(a) - 1) > qmath.TOL:
            raise ValidationError(f"state norm {np.linalg.norm(a):.3g} is not 1")
        a.setflags(write=False)
        self.n_qubits = n
        self.amps = a

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


class DensityMatrix:
    __slots__ = ("n_qubits", "mat")

    def __init__(self, mat, check=True):
        m = np.array(mat, dtype=complex)
        if not qmath.is_square(m):
            raise ValidationError("density matrix must be square")
        n = qmath.n_qubits_of(m.shape[0])
        if n > MAX_MIXED_QUBITS:
            raise ResourceError(f"{n} qubits exceeds the mixed-state limit {MAX_MIXED_QUBITS}")
        if check and not qmath.is_density(m):
            raise ValidationError("matrix is not a valid density operator")
        m.setflags(write=False)
        self.n_qubits = n
        self.mat = m

    def purity(self):
        return float(np.real(np.trace(self.mat @ self.mat)))

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits})"


State = Union[StateVector, DensityMatrix]


@dataclass(frozen=True)
class MeasureOutcome:
    label: str
    probability: float
    post_state: State


def basis_state(n, label):
    label = str(label)
    if len(label) != n or set(label) - {"0", "1"}:
        raise ValidationError(f"label {label!r} is not an {n}-bit string")
    a = np.zeros(1 << n, dtype=complex)
    a[int(label, 2) if n else 0] = 1.0
    return StateVector(a)


def zero_state(n):
    return basis_state(n, "0" * n)


def to_density(state):
    if isinstance(state, DensityMatrix):
        return state
    a = state.amps
    return DensityMatrix(np.outer(a, a.conj()), check=False)


def _check_targets(n, targets):
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValidationError(f"repeated target in {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise ValidationError(f"targets {targets} out of range for {n} qubits")
    return targets


def _apply_tensor(t, gate, axes):
    """Contract ``gate`` (2^k x 2^k) into tensor ``t`` on ``axes``."""
    k = len(axes)
    g = gate.reshape((2,) * (2 * k))
    out = np.tensordot(g, t, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply(state, gate, targets, check=True):
    """Apply ``gate`` to ``targets`` (in gate-local MSB-first order)."""
    gate = np.asarray(gate, dtype=complex)
    n = state.n_qubits
    targets = _check_targets(n, targets)
    if gate.shape != (1 << len(targets),) * 2:
        raise ValidationError(f"gate of shape {gate.shape} does not act on {len(targets)} qubits")
    if check:
        qmath.require_unitary(gate, "gate")
    if isinstance(state, StateVector):
        t = _apply_tensor(state.amps.reshape((2,) * n), gate, targets)
        return StateVector(t.reshape(-1), check=False)
    t = state.mat.reshape((2,) * (2 * n))
    t = _apply_tensor(t, gate, targets)
    t = _apply_tensor(t, gate.conj(), [n + q for q in targets])
    return DensityMatrix(t.reshape(1 << n, 1 << n), check=False)


def _marginal(state, qubits):
    n = state.n_qubits
    if isinstance(state, StateVector):
        p = np.abs(state.amps) ** 2
    else:
        p = np.real(np.diag(state.mat)).clip(min=0.0)
    p = p.reshape((2,) * n)
    rest = tuple(q for q in range(n) if q not in qubits)
    p = p.sum(axis=rest)
    # remaining axes are in ascending qubit order; put them in request order
    order = sorted(qubits)
    p = np.transpose(p, [order.index(q) for q in qubits])
    return p.reshape(-1)


def outcome_distribution(state, qubits, drop_zeros=False):
    """Exact (label, probability) pairs for measuring ``qubits``."""
    qubits = _check_targets(state.n_qubits, qubits)
    p = _marginal(state, qubits)
    k = len(qubits)
    out = [(format(i, f"0{k}b") if k else "", float(v)) for i, v in enumerate(p)]
    if drop_zeros:
        out = [(lab, v) for lab, v in out if v > 1e-15]
    return out


def project(state, qubits, label):
    """Unnormalised projection onto ``label`` of ``qubits`` plus its probability."""
    n = state.n_qubits
    mask = np.ones((2,) * n, dtype=bool)
    for q, b in zip(qubits, label):
        sl = [slice(None)] * n
        sl[q] = 1 - int(b)
        mask[tuple(sl)] = False
    mask = mask.reshape(-1)
    if isinstance(state, StateVector):
        a = np.where(mask, state.amps, 0)
        return a, float(np.vdot(a, a).real)
    m = state.mat * np.outer(mask, mask)
    return m, float(np.trace(m).real)


def measure_qubits(state, qubits, rng):
    qubits = _check_targets(state.n_qubits, qubits)
    p = _marginal(state, qubits)
    p = p / p.sum()
    idx = int(rng.choice(p.size, p=p))
    label = format(idx, f"0{len(qubits)}b") if qubits else ""
    proj, prob = project(state, qubits, label)
    if isinstance(state, StateVector):
        post = StateVector(proj / np.sqrt(prob), check=False)
    else:
        post = DensityMatrix(proj / prob, check=False)
    return MeasureOutcome(label, prob, post)


def bloch(state):
    if not isinstance(state, StateVector) or state.n_qubits != 1:
        raise ValidationError("bloch needs a single-qubit StateVector")
    a, b = state.amps
    c = np.conj(a) * b
    return (float(2 * c.real), float(2 * c.imag), float(abs(a) ** 2 - abs(b) ** 2))


def reduced(state, keep):
    """Density matrix of the qubits in ``keep`` (ascending order)."""
    rho = to_density(state).mat
    n = state.n_qubits
    traced = [q for q in range(n) if q not in set(keep)]
    return DensityMatrix(qmath.partial_trace(rho, n, traced), check=False)


def product(*states):
    """Tensor product of states; mixing in a DensityMatrix yields a DensityMatrix."""
    if all(isinstance(s, StateVector) for s in states):
        return StateVector(qmath.kron_all(*[s.amps.reshape(-1, 1) for s in states]).reshape(-1))
    return DensityMatrix(qmath.kron_all(*[to_density(s).mat for s in states]))

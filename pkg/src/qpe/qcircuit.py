"""Gate library, circuit programs, QFT/AQFT and Grover builders."""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from . import qmath, qstate
from .errors import ValidationError

_SQ2 = 1 / np.sqrt(2)


def _rx(p):
    c, s = np.cos(p / 2), np.sin(p / 2)
    return [[c, -1j * s], [-1j * s, c]]


def _ry(p):
    c, s = np.cos(p / 2), np.sin(p / 2)
    return [[c, -s], [s, c]]


def _rz(p):
    return [[np.exp(-0.5j * p), 0], [0, np.exp(0.5j * p)]]


def _zz(gt):
    a, b = np.exp(-1j * gt), np.exp(1j * gt)
    return np.diag([a, b, b, a])


def _xx(gt):
    i1, i2 = np.cos(gt), -1j * np.sin(gt)
    return [[i1, 0, 0, i2], [0, i1, i2, 0], [0, i2, i1, 0], [i2, 0, 0, i1]]


_FIXED = {
    "I": np.eye(2),
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
    "H": [[_SQ2, _SQ2], [_SQ2, -_SQ2]],
    "S": [[1, 0], [0, 1j]],
    "Sdg": [[1, 0], [0, -1j]],
    "T": [[1, 0], [0, np.exp(0.25j * np.pi)]],
    "Tdg": [[1, 0], [0, np.exp(-0.25j * np.pi)]],
    "CNOT": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
}

_PARAM = {
    "Rx": _rx,
    "Ry": _ry,
    "Rz": _rz,
    "P": lambda t: [[1, 0], [0, np.exp(1j * t)]],
    "Rk": lambda k: [[1, 0], [0, np.exp(2j * np.pi / 2 ** k)]],
    "Rkdg": lambda k: [[1, 0], [0, np.exp(-2j * np.pi / 2 ** k)]],
    "GPhase": lambda d: [[np.exp(1j * d), 0], [0, np.exp(1j * d)]],
    "ZZ": _zz,
    "XX": _xx,
}

# Names whose single parameter is an angle that flips sign under inversion.
_ROTATIONS = {"Rx", "Ry", "Rz", "P", "GPhase", "ZZ", "XX"}
_INVERSE_NAME = {"S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T", "Rk": "Rkdg", "Rkdg": "Rk"}


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    params: Tuple[float, ...]
    matrix: np.ndarray = field(repr=False)
    arity: int

    def dagger(self):
        if self.name in _ROTATIONS:
            return gate(self.name, *[-p for p in self.params])
        if self.name in _INVERSE_NAME:
            return gate(_INVERSE_NAME[self.name], *self.params)
        if self.name in _FIXED and qmath.is_hermitian(self.matrix):
            return self
        if self.name.startswith("C") and getattr(self, "_base", None) is not None:
            return controlled(self._base.dagger())
        return from_matrix(qmath.dagger(self.matrix), self.name + "dg", self.params)

    def label(self):
        if not self.params:
            return self.name
        return f"{self.name}({','.join(_fmt(p) for p in self.params)})"


def _fmt(p):
    return repr(float(p)) if not float(p).is_integer() else str(int(p))


def _freeze(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=4096)
def _cached(name, params):
    if name in _FIXED:
        if params:
            raise ValidationError(f"gate {name} takes no parameters")
        m = _FIXED[name]
    elif name in _PARAM:
        if len(params) != 1:
            raise ValidationError(f"gate {name} takes exactly one parameter")
        m = _PARAM[name](params[0])
    else:
        raise ValidationError(f"unknown gate {name!r}")
    m = _freeze(m)
    return Gate(name, params, m, qmath.n_qubits_of(m.shape[0]))


def gate(name, *params):
    """Library gate by name, e.g. ``gate("Rz", 0.3)`` or ``gate("Rk", 3)``."""
    return _cached(str(name), tuple(float(p) for p in params))


def rotation_matrix(name, angle):
    """Uncached matrix of a one-parameter library gate (for sampled angles)."""
    if name not in _PARAM:
        raise ValidationError(f"{name!r} is not a parametric gate")
    return np.array(_PARAM[name](angle), dtype=complex)


def from_matrix(matrix, name="U", params=()):
    m = qmath.require_unitary(qmath.as_matrix(matrix), f"gate {name}")
    return Gate(name, tuple(params), _freeze(m), qmath.n_qubits_of(m.shape[0]))


def controlled(g):
    """block-diag(I, g); the new first qubit is the control."""
    d = g.matrix.shape[0]
    m = np.eye(2 * d, dtype=complex)
    m[d:, d:] = g.matrix
    out = Gate("C" + g.name, g.params, _freeze(m), g.arity + 1)
    object.__setattr__(out, "_base", g)
    return out


@dataclass(frozen=True)
class Op:
    gate: Gate
    targets: Tuple[int, ...]
    noise_class: Optional[str] = None


class Circuit:
    """Ordered list of gate applications on ``n_qubits`` qubits."""

    def __init__(self, n_qubits, ops=()):
        if n_qubits < 1:
            raise ValidationError("circuit needs at least one qubit")
        self.n_qubits = int(n_qubits)
        self._ops = []
        for op in ops:
            self._push(op)

    def _push(self, op):
        t = op.targets
        if len(set(t)) != len(t) or any(q < 0 or q >= self.n_qubits for q in t):
            raise ValidationError(f"bad targets {t} for {self.n_qubits} qubits")
        if len(t) != op.gate.arity:
            raise ValidationError(f"{op.gate.name} acts on {op.gate.arity} qubits, got {len(t)}")
        self._ops.append(op)

    def add(self, g, *targets, noise_class=None):
        if isinstance(g, str):
            g = gate(g)
        self._push(Op(g, tuple(int(t) for t in targets), noise_class))
        return self

    def extend(self, other):
        for op in other.ops:
            self._push(op)
        return self

    @property
    def ops(self):
        return tuple(self._ops)

    def __len__(self):
        return len(self._ops)

    def inverse(self):
        return Circuit(self.n_qubits, [Op(o.gate.dagger(), o.targets, o.noise_class)
                                        for o in reversed(self._ops)])

    def unitary(self):
        dim = 1 << self.n_qubits
        u = np.eye(dim, dtype=complex).reshape((2,) * self.n_qubits + (dim,))
        for op in self._ops:
            u = qstate._apply_tensor(u, op.gate.matrix, list(op.targets))
        return u.reshape(dim, dim)

    def dump(self):
        return "\n".join(
            f"{o.gate.label()} " + " ".join(f"q{t}" for t in o.targets) for o in self._ops)


def run(circuit, initial, rng=None, model=None):
    """Execute ``circuit`` on ``initial``; with a noise model, angles are sampled."""
    if initial.n_qubits != circuit.n_qubits:
        raise ValidationError(
            f"state has {initial.n_qubits} qubits, circuit has {circuit.n_qubits}")
    if model is not None:
        if rng is None:
            raise ValidationError("a noise model needs an rng")
        from .qnoise import apply_noisy
        return apply_noisy(circuit, initial, model, rng)
    s = initial
    for op in circuit.ops:
        s = qstate.apply(s, op.gate.matrix, op.targets, check=False)
    return s


# --- QFT ---------------------------------------------------------------------

def build_qft(m, truncate_k=None, include_final_swaps=True):
    """Product-form QFT on ``m`` qubits.

    ``truncate_k`` drops every controlled-R_k with k >= truncate_k (AQFT).
    """
    if int(m) != m or m < 1:
        raise ValidationError(f"QFT size must be a positive integer, got {m}")
    if truncate_k is not None and truncate_k < 2:
        raise ValidationError("truncate_k must be at least 2")
    m = int(m)
    c = Circuit(m)
    for j in range(m):
        c.add("H", j)
        for k in range(2, m - j + 1):
            if truncate_k is not None and k >= truncate_k:
                continue
            c.add(controlled(gate("Rk", k)), j + k - 1, j)
    if include_final_swaps:
        for i in range(m // 2):
            c.add("SWAP", i, m - 1 - i)
    return c


def dft_matrix(m):
    n = 1 << m
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


def aqft_cutoff(m):
    return int(np.ceil(np.log2(m))) + 2


# --- Grover --------------------------------------------------------------------

@dataclass(frozen=True)
class GroverOperators:
    n: int
    marks: frozenset
    oracle: np.ndarray
    diffusion: np.ndarray

    def iteration(self):
        return self.diffusion @ self.oracle

    def apply(self, amps, iterations=1):
        a = np.asarray(amps, dtype=complex)
        g = self.iteration()
        for _ in range(iterations):
            a = g @ a
        return a

    def success_probability(self, iterations):
        n = 1 << self.n
        a = self.apply(np.full(n, 1 / np.sqrt(n)), iterations)
        return float(sum(abs(a[x]) ** 2 for x in self.marks))


def build_grover_iteration(n, oracle_marks):
    """Phase oracle and inversion about the mean H(2|0><0| - I)H."""
    if n < 1 or n > 12:
        raise ValidationError("Grover builder supports 1 <= n <= 12")
    marks = frozenset(int(x) for x in oracle_marks)
    if not marks:
        raise ValidationError("oracle must mark at least one element")
    dim = 1 << n
    if any(x < 0 or x >= dim for x in marks):
        raise ValidationError("marked element out of range")
    d = np.ones(dim)
    d[list(marks)] = -1
    oracle = np.diag(d).astype(complex)
    # H(2|0><0| - I)H = 2|s><s| - I with |s> uniform
    diffusion = np.full((dim, dim), 2 / dim, dtype=complex) - np.eye(dim)
    return GroverOperators(n, marks, oracle, diffusion)

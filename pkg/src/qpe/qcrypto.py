"""Qubit authentication with a two-qubit entangled key, repetition-code
steganography and superdense coding, all as density-matrix pipelines.

Authentication register order is (a, b, M, T): Alice's and Bob's key
halves, then the message and tag qubits that travel over the channel.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qmath, qstate
from .errors import ValidationError
from .qcircuit import gate

_I2 = np.eye(2, dtype=complex)
_P0 = np.diag([1, 0]).astype(complex)
_P1 = np.diag([0, 1]).astype(complex)
_SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def default_u_eps():
    """CNOT on (M, T) followed by H on M."""
    return np.kron(gate("H").matrix, _I2) @ gate("CNOT").matrix


def separable_u_eps():
    """H on M, X on T: a product coding unitary used by the attack demo."""
    return np.kron(gate("H").matrix, gate("X").matrix)


def singlet_density():
    return np.outer(_SINGLET, _SINGLET.conj())


@dataclass(frozen=True)
class AuthSession:
    u_eps: np.ndarray = field(default_factory=default_u_eps)
    p_mix: float = 0.0

    def __post_init__(self):
        u = qmath.require_unitary(qmath.as_matrix(self.u_eps), "U_eps")
        if u.shape != (4, 4):
            raise ValidationError("U_eps must act on the two qubits M and T")
        if not 0.0 <= self.p_mix <= 1.0:
            raise ValidationError("p_mix must lie in [0, 1]")
        object.__setattr__(self, "u_eps", u)

    def key(self):
        return (1 - self.p_mix) * singlet_density() + self.p_mix * np.eye(4) / 4

    def encoder(self):
        return np.kron(np.kron(_P0, _I2), np.eye(4)) + np.kron(np.kron(_P1, _I2), self.u_eps)

    def decoder(self):
        return (np.kron(np.kron(_I2, _P0), qmath.dagger(self.u_eps))
                + np.kron(np.kron(_I2, _P1), np.eye(4)))


@dataclass(frozen=True)
class TaggedMessage:
    rho_m: np.ndarray
    rho_t: np.ndarray = field(default_factory=lambda: _P0.copy())
    joint: Optional[np.ndarray] = None     # rho on (M, T) when not a product

    def __post_init__(self):
        for name in ("rho_m", "rho_t"):
            if not qmath.is_density(getattr(self, name), 1e-9):
                raise ValidationError(f"{name} is not a valid density matrix")

    def state(self):
        return self.joint if self.joint is not None else np.kron(self.rho_m, self.rho_t)


def auth_encode(session, msg):
    """E (key (x) rho_M (x) rho_T) E^dagger on the register (a, b, M, T)."""
    rho = np.kron(session.key(), msg.state())
    e = session.encoder()
    return qstate.DensityMatrix(e @ rho @ qmath.dagger(e), check=False)


def eve_view(global_state):
    """What travels on the channel: the (M, T) marginal."""
    return qmath.partial_trace(_mat(global_state), 4, [0, 1])


def _mat(s):
    return s.mat if isinstance(s, qstate.DensityMatrix) else np.asarray(s)


def auth_decode(session, global_state):
    d = session.decoder()
    rho = d @ _mat(global_state) @ qmath.dagger(d)
    eps = qmath.partial_trace(rho, 4, [0, 1])
    return _split(eps)


def _split(eps):
    rm = qmath.partial_trace(eps, 2, [1])
    rt = qmath.partial_trace(eps, 2, [0])
    return TaggedMessage(rm, rt, joint=eps)


def auth_verify(msg):
    """Probability that the tag measurement finds the valid tag |0>."""
    return float(np.real(msg.rho_t[0, 0]))


def mixed_key_expected(session, msg):
    """Decoded (M, T) state for a mixed key, from the branch sum
    (1 - p/2) rho + (p/4) (U^dag rho U + U rho U^dag)."""
    p, u, rho = session.p_mix, session.u_eps, msg.state()
    ud = qmath.dagger(u)
    return (1 - p / 2) * rho + (p / 4) * (ud @ rho @ u + u @ rho @ ud)


def operator_schmidt_rank(u, tol=1e-10):
    t = np.asarray(u).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    return int(np.sum(np.linalg.svd(t, compute_uv=False) > tol))


def auth_attack_separable(session, r):
    """Eve applies R (x) I to the channel between encoding and decoding.

    Only defined for a product coding unitary U_M (x) U_T.
    """
    if operator_schmidt_rank(session.u_eps) != 1:
        raise ValidationError("the separable attack needs a product U_eps = U_M (x) U_T")
    r = qmath.require_unitary(qmath.as_matrix(r), "R")
    if r.shape != (2, 2):
        raise ValidationError("R must be a single-qubit unitary")
    return r


def run_auth_attack(session, msg, r):
    """Returns (decoded message, tag acceptance, message trace distance)."""
    r = auth_attack_separable(session, r)
    enc = auth_encode(session, msg)
    q = np.kron(np.eye(4), np.kron(r, _I2))
    tampered = q @ enc.mat @ qmath.dagger(q)
    dec = auth_decode(session, tampered)
    return dec, auth_verify(dec), qmath.trace_distance(dec.rho_m, msg.rho_m)


# --- steganography ------------------------------------------------------------------

SYNDROME = {None: "00", 1: "10", 2: "11", 3: "01"}       # flipped data qubit -> ab
_FLIP_FOR = {"10": 0, "11": 1, "01": 2}


def _perm_unitary(n, f):
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        u[f(x), x] = 1.0
    return u


def _bitsof(x, n=5):
    return [(x >> (n - 1 - i)) & 1 for i in range(n)]


def _val(bits):
    return sum(b << (len(bits) - 1 - i) for i, b in enumerate(bits))


def _syndrome_map(x):
    d1, d2, d3, a, b = _bitsof(x)
    return _val([d1, d2, d3, a ^ d1 ^ d2, b ^ d2 ^ d3])


def _correct_map(x):
    bits = _bitsof(x)
    key = f"{bits[3]}{bits[4]}"
    if key in _FLIP_FOR:
        bits[_FLIP_FOR[key]] ^= 1
    return _val(bits)


def decode_block():
    """Syndrome extraction into ancillas (a, b) followed by the controlled
    corrections; a permutation unitary on (d1, d2, d3, a, b)."""
    return _perm_unitary(5, _correct_map) @ _perm_unitary(5, _syndrome_map)


def codeword(alpha, beta):
    v = np.zeros(8, dtype=complex)
    v[0], v[7] = alpha, beta
    n = np.linalg.norm(v)
    if abs(n - 1) > 1e-10:
        raise ValidationError("logical amplitudes are not normalised")
    return v


def _with_ancillas(data3, anc2):
    return np.kron(np.asarray(data3, dtype=complex), np.asarray(anc2, dtype=complex))


def _tag_vector(tag):
    t = np.asarray(tag, dtype=complex).reshape(-1)
    if t.size != 4 or abs(np.linalg.norm(t) - 1) > 1e-10:
        raise ValidationError("tag must be four normalised amplitudes")
    return t


def stego_decode(state):
    """Run the decode-and-correct block; returns (syndrome 'ab', 3-qubit state).

    Inputs outside the code space plus single flips still yield a syndrome,
    but the correction is then not meaningful.
    """
    s = state.amps if isinstance(state, qstate.StateVector) else np.asarray(state, dtype=complex)
    if s.size != 8:
        raise ValidationError("stego_decode needs a 3-qubit state")
    out = decode_block() @ _with_ancillas(s, [1, 0, 0, 0])
    m = out.reshape(8, 4)
    w = np.sum(np.abs(m) ** 2, axis=0)
    ab = int(np.argmax(w))
    data = m[:, ab] / np.linalg.norm(m[:, ab])
    return format(ab, "02b"), qstate.StateVector(data, check=False)


def stego_insert(logical, message):
    """Hide two classical bits by running the decode block backwards."""
    if message not in ("00", "01", "10", "11"):
        raise ValidationError("message must be a 2-bit string")
    anc = np.zeros(4, dtype=complex)
    anc[int(message, 2)] = 1
    return stego_watermark(logical, anc)


def stego_watermark(logical, tag):
    """(decode block)^dagger applied to |logical> (x) tag; ancillas come back
    in |00>, so the result is a 3-qubit state."""
    alpha, beta = logical
    v = qmath.dagger(decode_block()) @ _with_ancillas(codeword(alpha, beta), _tag_vector(tag))
    m = v.reshape(8, 4)
    if np.max(np.abs(m[:, 1:])) > 1e-12:
        raise ArithmeticError("ancillas did not return to |00>")
    return qstate.StateVector(m[:, 0], check=False)


def stego_recover(state):
    """Inverse of stego_watermark: ((alpha, beta), tag amplitudes, tag density).

    The tag density matrix is the ancilla marginal, which stays meaningful
    when a disturbance leaves data and tag entangled.
    """
    s = state.amps if isinstance(state, qstate.StateVector) else np.asarray(state, dtype=complex)
    out = decode_block() @ _with_ancillas(s, [1, 0, 0, 0])
    m = out.reshape(8, 4)
    u, sv, vh = np.linalg.svd(m)
    data, tag = u[:, 0] * sv[0], vh[0]
    # fix the split of the global phase: make the larger logical amplitude real
    i = 0 if abs(data[0]) >= abs(data[7]) else 7
    ph = data[i] / abs(data[i])
    data, tag = data / ph, tag * ph
    rho_tag = m.T @ m.conj()
    return (complex(data[0]), complex(data[7])), tag, rho_tag


# --- superdense coding ---------------------------------------------------------------

_ENCODE = {"00": np.eye(2), "01": gate("X").matrix, "10": gate("Z").matrix,
           "11": gate("X").matrix @ gate("Z").matrix}


def superdense(message):
    """Send two bits with one qubit of |Phi+>; returns (decoded, Eve's marginal)."""
    if message not in _ENCODE:
        raise ValidationError("message must be one of 00, 01, 10, 11")
    s = qstate.StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    s = qstate.apply(s, _ENCODE[message], [0])
    eve = qstate.reduced(s, [0]).mat
    s = qstate.apply(s, gate("CNOT").matrix, [0, 1])
    s = qstate.apply(s, gate("H").matrix, [0])
    dist = qstate.outcome_distribution(s, [0, 1])
    label, p = max(dist, key=lambda lp: lp[1])
    if abs(p - 1) > 1e-10:
        raise ArithmeticError("Bell measurement was not deterministic")
    return label, eve


# --- JSON reports ----------------------------------------------------------------------

def _c(m):
    m = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def report_auth(session=None, rho_m=None):
    session = session or AuthSession()
    rho_m = _P0 if rho_m is None else rho_m
    msg = TaggedMessage(rho_m)
    enc = auth_encode(session, msg)
    dec = auth_decode(session, enc)
    eve = eve_view(enc)
    expected_eve = 0.5 * (msg.state() + session.u_eps @ msg.state() @ qmath.dagger(session.u_eps))
    return {"protocol": "auth", "p_mix": session.p_mix,
            "inputs": {"rho_m": _c(rho_m), "u_eps": _c(session.u_eps)},
            "verify_probability": auth_verify(dec),
            "message_trace_distance": qmath.trace_distance(dec.rho_m, rho_m),
            "eve_view_deviation": float(np.max(np.abs(eve - expected_eve))) if session.p_mix == 0 else None}


def report_attack(r, rho_m=None, session=None):
    session = session or AuthSession(u_eps=separable_u_eps())
    rho_m = _P0 if rho_m is None else rho_m
    dec, acc, td = run_auth_attack(session, TaggedMessage(rho_m), r)
    return {"protocol": "auth-attack", "inputs": {"R": _c(r), "rho_m": _c(rho_m),
                                                  "u_eps": _c(session.u_eps)},
            "tag_fidelity": acc, "verify_probability": acc, "message_trace_distance": td,
            "decoded_rho_m": _c(dec.rho_m)}


def report_stego(alpha, beta, message):
    s = stego_insert((alpha, beta), message)
    ab, data = stego_decode(s)
    return {"protocol": "stego", "inputs": {"alpha": [alpha.real, alpha.imag] if isinstance(alpha, complex) else alpha,
                                           "beta": [beta.real, beta.imag] if isinstance(beta, complex) else beta,
                                           "message": message},
            "recovered_message": ab,
            "logical_error": float(np.max(np.abs(data.amps - codeword(alpha, beta))))}


def report_superdense(message):
    dec, eve = superdense(message)
    return {"protocol": "superdense", "inputs": {"message": message}, "decoded": dec,
            "eve_marginal": _c(eve),
            "eve_trace_distance_to_mixed": qmath.trace_distance(eve, np.eye(2) / 2)}

"""Single-qubit Euler decompositions, the ABC construction for controlled-U,
the angle-squaring recursion for U^(2^k), and CNOT synthesis from an XX
coupling."""
from dataclasses import dataclass

import numpy as np

from . import qmath
from .qcircuit import Circuit, controlled, from_matrix, gate
from .errors import ValidationError

_EPS = 1e-12


def _wrap(a):
    """Map an angle into (-pi, pi]."""
    a = np.fmod(a + np.pi, 2 * np.pi)
    if a <= 0:
        a += 2 * np.pi
    return float(a - np.pi)


def _clamp(x):
    if -1 - _EPS <= x < -1:
        return -1.0
    if 1 < x <= 1 + _EPS:
        return 1.0
    return x


def rz(a):
    return gate("Rz", a).matrix


def rx(a):
    return gate("Rx", a).matrix


def ry(a):
    return gate("Ry", a).matrix


@dataclass(frozen=True)
class EulerDecomposition:
    delta: float
    alpha: float
    beta: float
    gamma: float
    basis: str = "ZY"

    def matrix(self):
        mid = ry(self.beta) if self.basis == "ZY" else rx(self.beta)
        return np.exp(1j * self.delta) * rz(self.alpha) @ mid @ rz(self.gamma)


def _zy(u):
    det = np.linalg.det(u)
    delta = float(np.angle(det)) / 2
    v = u * np.exp(-1j * delta)                 # det v = 1
    a, b = v[0, 0], v[1, 0]
    # v = [[e^{-i(al+ga)/2} c, -e^{-i(al-ga)/2} s], [e^{i(al-ga)/2} s, e^{i(al+ga)/2} c]]
    beta = 2 * float(np.arctan2(abs(b), abs(a)))
    if abs(b) < 1e-14:                          # beta = 0: fold into alpha
        return delta, -2 * float(np.angle(a)), 0.0, 0.0
    if abs(a) < 1e-14:                          # beta = pi
        return delta, 2 * float(np.angle(b)), beta, 0.0
    s = -float(np.angle(a))                     # (al+ga)/2
    d = float(np.angle(b))                      # (al-ga)/2
    return delta, s + d, beta, s - d


def _normalise(delta, alpha, beta, gamma):
    """Wrap alpha, gamma into (-pi, pi] and beta into [0, 2pi).

    Rz(a + 2pi) = -Rz(a) and likewise for the middle rotation, so every
    2pi shift is paid for with a pi in the global phase.
    """
    wa, wg = _wrap(alpha), _wrap(gamma)
    wb = float(np.mod(beta, 2 * np.pi))
    turns = sum(int(round((v - w) / (2 * np.pi)))
                for v, w in ((alpha, wa), (gamma, wg), (beta, wb)))
    if turns % 2:
        delta += np.pi
    return _wrap(delta), wa, wb, wg


def euler_decompose(u, basis="ZY"):
    """e^{i delta} Rz(alpha) R(beta) Rz(gamma) = u with R = Ry (ZY) or Rx (ZX)."""
    u = qmath.require_unitary(qmath.as_matrix(u), "euler_decompose input")
    if u.shape != (2, 2):
        raise ValidationError("euler_decompose needs a 2x2 matrix")
    if basis not in ("ZY", "ZX"):
        raise ValidationError(f"unknown basis {basis!r}")
    delta, alpha, beta, gamma = _zy(u)
    if basis == "ZX" and not (beta == 0.0 and gamma == 0.0):
        # Ry(b) = Rz(pi/2) Rx(b) Rz(-pi/2)
        alpha, gamma = alpha + np.pi / 2, gamma - np.pi / 2
        if abs(beta - np.pi) < 1e-14:
            # Rx(pi) Rz(g) = Rz(-g) Rx(pi): keep gamma at zero
            alpha, gamma = alpha - gamma, 0.0
    return EulerDecomposition(*_normalise(delta, alpha, beta, gamma), basis=basis)


# --- controlled-U -------------------------------------------------------------------

@dataclass(frozen=True)
class ABC:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    delta: float

    def __iter__(self):
        return iter((self.A, self.B, self.C, self.delta))

    def circuit(self):
        """Controlled-U on (control=q0, target=q1), phase correction included."""
        c = Circuit(2)
        c.add(from_matrix(self.C, "C"), 1)
        c.add("CNOT", 0, 1)
        c.add(from_matrix(self.B, "B"), 1)
        c.add("CNOT", 0, 1)
        c.add(from_matrix(self.A, "A"), 1)
        c.add(gate("P", self.delta), 0)
        return c


def abc_controlled(u):
    """A, B, C with ABC = I and A X B X C = e^{-i delta} u."""
    e = euler_decompose(u, "ZY")
    a = rz(e.alpha) @ ry(e.beta / 2)
    b = ry(-e.beta / 2) @ rz(-(e.gamma + e.alpha) / 2)
    c = rz((e.gamma - e.alpha) / 2)
    return ABC(a, b, c, e.delta)


def abc_zx(alpha, theta, beta):
    """ABC factors for u = Rz(alpha) Rx(theta) Rz(beta) using only Z and X turns."""
    a = rz(alpha) @ rx(theta / 2) @ rz(-np.pi / 2)
    b = rz(np.pi / 2) @ rx(-theta / 2) @ rz(-(alpha + beta + np.pi) / 2)
    c = rz((beta - alpha + np.pi) / 2)
    return ABC(a, b, c, 0.0)


# --- powers U^(2^k) ----------------------------------------------------------------

@dataclass(frozen=True)
class PowerAngles:
    alpha: float
    theta: float
    beta: float
    k: int

    def matrix(self):
        return zx_matrix(self.alpha, self.theta, self.beta)


def zx_matrix(alpha, theta, beta):
    return rz(alpha) @ rx(theta) @ rz(beta)


def square_angles(alpha, theta, beta):
    """Angles of [Rz(a) Rx(t) Rz(b)]^2 in the same Z-X-Z form (up to phase).

    The square is Rz(a) [Rx(t) Rz(a+b) Rx(t)] Rz(b) and the bracket is
    rewritten as Rz(nu1) Rx(nu2) Rz(nu1). Matching entries gives
        sin(nu2/2)            = sin t cos(s/2)
        cos(nu2/2) e^{-i nu1} = cos t cos(s/2) - i sin(s/2),   s = a + b,
    solved with atan2 so no branch bookkeeping is needed.
    """
    s2 = (alpha + beta) / 2
    cs, ss = np.cos(s2), np.sin(s2)
    sin_half = np.sin(theta) * cs
    re, im = np.cos(theta) * cs, ss
    cos_half = np.hypot(re, im)
    nu2 = 2 * float(np.arctan2(sin_half, cos_half))
    nu1 = float(np.arctan2(im, re)) if cos_half > 1e-15 else 0.0
    return alpha + nu1, nu2, beta + nu1


def square_angles_branch(alpha, theta, beta):
    """Same result through the two-branch arcsin form of the recursion.

    Kept as an independent route for cross-checking; the branch is chosen by
    the sign of cos(theta) cos((alpha+beta)/2).
    """
    s = alpha + beta
    arg = _clamp(np.sin(theta) * np.cos(s / 2))
    arg = min(1.0, max(-1.0, arg))
    if np.cos(theta) * np.cos(s / 2) >= 0:
        nu2 = 2 * np.arcsin(arg)
    else:
        nu2 = 2 * (np.pi - np.arcsin(arg))
    c2 = np.cos(nu2 / 2)
    if abs(c2) > 1e-15:
        nu1 = np.arcsin(min(1.0, max(-1.0, _clamp(np.sin(s / 2) / c2))))
        # arcsin loses the quadrant when cos t cos(s/2) / c2 < 0
        if np.cos(theta) * np.cos(s / 2) / c2 < 0:
            nu1 = np.pi - nu1
    else:
        nu1 = 0.0
    return alpha + nu1, float(nu2), beta + nu1


def power_angles(alpha, theta, beta, k):
    if k < 0:
        raise ValidationError("power exponent k must be >= 0")
    a, t, b = float(alpha), float(theta), float(beta)
    for _ in range(int(k)):
        a, t, b = square_angles(a, t, b)
    return PowerAngles(a, t, b, int(k))


# --- CNOT from XX -------------------------------------------------------------------

def cnot_from_xx():
    """CNOT (control q0) from one XX(3pi/4) interaction plus local turns."""
    c = Circuit(2)
    c.add(gate("Rx", np.pi / 2), 0).add(gate("Rz", np.pi / 2), 0)
    c.add(gate("Rx", np.pi / 2), 1).add(gate("Rz", np.pi), 1)
    c.add(gate("XX", 3 * np.pi / 4), 0, 1)
    c.add(gate("Rz", np.pi / 2), 0).add(gate("Rx", np.pi / 2), 0).add(gate("Rz", np.pi / 2), 0)
    c.add(gate("Rz", np.pi), 1).add(gate("Rx", np.pi), 1)
    return c


def controlled_matrix(u):
    return controlled(from_matrix(u)).matrix

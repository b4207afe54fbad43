"""Applications of phase estimation: order finding, energy eigenvalues,
Trotterised evolution and two reference-frame alignment protocols."""
import math
from collections import Counter
from fractions import Fraction

import numpy as np

from .. import qmath, qstate
from ..errors import QpeError, ValidationError
from .analytics import bits_of
from .estimators import ancilla_step, feedback_angle, qft_pea, qft_pea_distribution
from .problem import BitRecord, PhaseProblem, PhaseRunResult

TWO_PI = 2 * math.pi


# --- order finding --------------------------------------------------------------------

def continued_fraction(a, q):
    """All convergents (num, den) of a/q, lowest terms, last one equal to a/q."""
    if q == 0:
        raise ValidationError("denominator must be non-zero")
    if not 0 <= a < q:
        raise ValidationError("need 0 <= a < q")
    terms = []
    x, y = a, q
    while y:
        terms.append(x // y)
        x, y = y, x % y
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0          # h_{-2}, h_{-1}, k_{-2}, k_{-1}
    for t in terms:
        h0, h1 = h1, t * h1 + h0
        k0, k1 = k1, t * k1 + k0
        out.append((h1, k1))
    return out


def multiplicative_order(k, n):
    if math.gcd(k, n) != 1:
        raise ValidationError(f"{k} and {n} are not coprime")
    r, v = 1, k % n
    while v != 1 % n:
        v = v * k % n
        r += 1
    return r


def mod_mult_unitary(k, N, n_bits):
    """Permutation |y> -> |k y mod N> for y < N, identity on y >= N."""
    if N < 1 or 2 ** n_bits < N:
        raise ValidationError(f"{n_bits} bits cannot hold residues mod {N}")
    if math.gcd(k, N) != 1:
        raise ValidationError(f"k={k} is not coprime to N={N}")
    dim = 2 ** n_bits
    u = np.zeros((dim, dim), dtype=complex)
    for y in range(dim):
        u[(k * y) % N if y < N else y, y] = 1.0
    return u


def order_candidates(j, m, k, N):
    """Verified orders suggested by readout j via its convergents."""
    out = set()
    for _, den in continued_fraction(j, 2 ** m):
        if 0 < den <= N and pow(k, den, N) == 1:
            out.add(den)
    return out


def order_finding_demo(k, N, m, rng, shots=8):
    """Recover the order of k mod N from ``shots`` QFT phase-estimation runs
    on |1>, post-processed with continued fractions.

    Denominators from pairs of readouts are combined by lcm, since a single
    readout s/r only reveals r / gcd(s, r).
    """
    if N > 32 or m > 11:
        raise ValidationError("demo is limited to N <= 32 and m <= 11")
    n_bits = max(1, (N - 1).bit_length())
    u = mod_mult_unitary(k, N, n_bits)
    one = qstate.basis_state(n_bits, format(1, f"0{n_bits}b"))
    prob = PhaseProblem(m, unitary=u, eigenstate=one)
    samples, _ = qft_pea(prob, rng, shots)
    dens = []
    votes = Counter()
    for j in samples:
        ds = {den for _, den in continued_fraction(int(j), 2 ** m) if 0 < den <= N}
        dens.append(ds)
        for d in ds:
            if pow(k, d, N) == 1:
                votes[d] += 1
    for i in range(len(dens)):
        for jj in range(i + 1, len(dens)):
            for a in dens[i]:
                for b in dens[jj]:
                    l = a * b // math.gcd(a, b)
                    if l <= N and pow(k, l, N) == 1:
                        votes[l] += 1
    if not votes:
        raise QpeError(f"no verified order for k={k}, N={N} within {shots} shots")
    best = max(votes.items(), key=lambda kv: (kv[1], -kv[0]))[0]
    return {"r": best, "samples": [int(s) for s in samples], "votes": dict(votes)}


# --- Hamiltonian simulation -----------------------------------------------------------

def trotter_evolve(terms, t, q):
    """(prod_j exp(-i H_j t / q))^q."""
    if q < 1:
        raise ValidationError("q must be >= 1")
    terms = [qmath.require_hermitian(qmath.as_matrix(h), "Trotter term") for h in terms]
    if not terms:
        raise ValidationError("no terms given")
    dim = terms[0].shape
    if any(h.shape != dim for h in terms):
        raise ValidationError("Trotter terms differ in dimension")
    step = np.eye(dim[0], dtype=complex)
    for h in terms:
        step = qmath.herm_exp(h, -1j * t / q) @ step
    return np.linalg.matrix_power(step, int(q))


def trotter_error(terms, t, q):
    exact = qmath.herm_exp(sum(qmath.as_matrix(h) for h in terms), -1j * t)
    return qmath.operator_distance(trotter_evolve(terms, t, q), exact)


def abrams_lloyd_energy(h, approx_eigvec, t, m, rng, shots=100):
    """Estimate an eigenvalue of h by phase estimation of exp(-i h t).

    The eigenvalue e^{-i lambda t} = e^{2 pi i phi} maps back through
    lambda = 2 pi (1 - phi) / t, with phi = 0 read as lambda = 0.
    """
    h = qmath.require_hermitian(qmath.as_matrix(h), "Hamiltonian")
    u = qmath.herm_exp(h, -1j * t)
    state = approx_eigvec if isinstance(approx_eigvec, qstate.StateVector) \
        else qstate.StateVector(approx_eigvec)
    prob = PhaseProblem(m, unitary=u, eigenstate=state)
    samples, p = qft_pea(prob, rng, shots)
    counts = np.bincount(samples, minlength=p.size)
    j = int(np.argmax(counts))
    phi = j / 2 ** m
    energy = TWO_PI * ((1.0 - phi) % 1.0) / t
    return {"energy": energy, "phi": phi, "j": j, "frequency": counts[j] / shots,
            "probability": float(p[j]), "shots": int(shots),
            "resolution": TWO_PI / (t * 2 ** m)}


# --- reference-frame alignment --------------------------------------------------------

def bb_alignment(phi_true, m, rng, shots=1):
    """Phase-reference alignment with an iterative protocol.

    One exchange acts on the probe as Rz(2 * 2 pi phi); 2^{k-1} exchanges in
    round k therefore kick the phase 2^{k-1} (2 phi).  The protocol reads
    psi = 2 phi mod 1 bit by bit and reports phi = psi / 2 in [0, 1/2), the
    intrinsic ambiguity being phi versus phi + 1/2.
    """
    if not 0.0 <= phi_true < 1.0:
        raise ValidationError("phi_true outside [0, 1)")
    if shots < 1 or shots % 2 == 0:
        raise ValidationError("shots per bit must be odd and positive")
    psi = (2 * phi_true) % 1.0
    oracle = PhaseProblem(m, phi=psi)
    bits = [0] * m
    records = []
    for k in range(m, 0, -1):
        omega = feedback_angle(bits[k:])
        p0 = _probe_round(phi_true, k, omega)
        ones = int(rng.binomial(shots, 1.0 - p0))
        x = 1 if 2 * ones > shots else 0
        bits[k - 1] = x
        records.append(BitRecord(k, omega, shots, (ones if x else shots - ones) / shots, x))
    j = sum(b << (m - i - 1) for i, b in enumerate(bits))
    res = PhaseRunResult("bb", m, bits, (j / 2 ** m) / 2, shots * m, records,
                         phi_true=phi_true % 0.5)
    res.extra = {"psi_estimate": j / 2 ** m, "p0_model": [ancilla_step(oracle, 2 ** (k - 1), r.omega_k)[0]
                                                         for k, r in zip(range(m, 0, -1), records)]}
    return res


def _probe_round(phi, k, omega):
    """P(0) for H, (X_A X_B)^{2^{k-1}} = Rz(2^k 2 pi phi), Rz(omega), H on |0>."""
    from ..qcircuit import gate
    s = qstate.zero_state(1)
    s = qstate.apply(s, gate("H").matrix, [0], check=False)
    s = qstate.apply(s, gate("Rz", (2 ** k * TWO_PI * phi) % (2 * TWO_PI)).matrix, [0], check=False)
    s = qstate.apply(s, gate("Rz", omega).matrix, [0], check=False)
    s = qstate.apply(s, gate("H").matrix, [0], check=False)
    return qstate.outcome_distribution(s, [0])[0][1]


def rg_theta_bit(theta, k, rng, shots=101):
    """Spatial-axis protocol round: '0' occurs with probability cos^2(2^{k-1} theta)."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p0 = math.cos(2 ** (k - 1) * theta) ** 2
    zeros = int(rng.binomial(shots, p0))
    return {"k": k, "theta": theta, "p0": p0, "zeros": zeros, "shots": int(shots),
            "freq0": zeros / shots, "bit": 0 if 2 * zeros >= shots else 1}

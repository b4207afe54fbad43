"""Phase-estimation algorithms: QFT-based, iterative (IPEA), Kitaev's
interval scheme and the Aspuru-Guzik four-ancilla recursion."""
import math

import numpy as np

from .. import qstate
from ..errors import ValidationError
from ..qcircuit import build_qft, controlled, from_matrix, gate, run
from .analytics import bits_of, circular_distance
from .problem import BitRecord, PhaseProblem, PhaseRunResult

TWO_PI = 2 * math.pi


# --- QFT-based estimation ---------------------------------------------------------

def qft_pea_state(problem, truncate_k=None):
    """Final register state (ancillas first) before the measurement."""
    m = problem.m
    problem.check_size(m)
    inv = build_qft(m, truncate_k).inverse()
    if problem.is_oracle:
        j = np.arange(2 ** m)
        amps = np.exp(2j * math.pi * ((j * problem.phi) % 1.0)) / math.sqrt(2 ** m)
        return run(inv, qstate.StateVector(amps, check=False))
    n = problem.n_system
    s = qstate.product(qstate.zero_state(m), problem.prepare())
    sys_q = list(range(m, m + n))
    for i in range(m):
        s = qstate.apply(s, gate("H").matrix, [i], check=False)
    for i in range(m):
        cu = controlled(from_matrix(problem.power(2 ** (m - 1 - i)), "U"))
        s = qstate.apply(s, cu.matrix, [i] + sys_q, check=False)
    full = inv if n == 0 else _widen(inv, m + n)
    return run(full, s)


def _widen(circuit, n_total):
    from ..qcircuit import Circuit
    c = Circuit(n_total)
    for op in circuit.ops:
        c.add(op.gate, *op.targets)
    return c


def qft_pea_distribution(problem, truncate_k=None):
    """Exact probability of each ancilla readout j in [0, 2^m)."""
    s = qft_pea_state(problem, truncate_k)
    p = np.array([v for _, v in qstate.outcome_distribution(s, list(range(problem.m)))])
    return p / p.sum()


def qft_pea(problem, rng, shots=1, truncate_k=None):
    """Sample ``shots`` readouts j of the QFT-based scheme.

    Every shot is an independent run of the whole circuit, so sampling from the
    exact final distribution is equivalent and much cheaper.
    """
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p = qft_pea_distribution(problem, truncate_k)
    samples = rng.choice(p.size, size=int(shots), p=p)
    return samples, p


def qft_pea_result(problem, rng, shots=1, truncate_k=None):
    samples, p = qft_pea(problem, rng, shots, truncate_k)
    counts = np.bincount(samples, minlength=p.size)
    j = int(np.argmax(counts))
    res = PhaseRunResult("qft", problem.m, bits_of(j, problem.m), j / 2 ** problem.m,
                         int(shots), phi_true=problem.phi)
    res.extra = {"counts": {format(int(i), f"0{problem.m}b"): int(c)
                            for i, c in enumerate(counts) if c}}
    return res


# --- single-ancilla building block ---------------------------------------------------

def ancilla_step(problem, power, omega, sys_state=None):
    """One H, controlled-U^power, Rz(omega), H round on a fresh ancilla.

    Returns (P(ancilla reads 0), full post-circuit state or None for oracles).
    """
    if problem.is_oracle:
        theta = TWO_PI * ((power * problem.phi) % 1.0) + omega
        return math.cos(theta / 2) ** 2, None
    n = problem.n_system
    sys_state = problem.prepare() if sys_state is None else sys_state
    s = qstate.product(qstate.zero_state(1), sys_state)
    s = qstate.apply(s, gate("H").matrix, [0], check=False)
    cu = controlled(from_matrix(problem.power(power), "U"))
    s = qstate.apply(s, cu.matrix, list(range(n + 1)), check=False)
    s = qstate.apply(s, gate("Rz", omega).matrix, [0], check=False)
    s = qstate.apply(s, gate("H").matrix, [0], check=False)
    p0 = qstate.outcome_distribution(s, [0])[0][1]
    return min(1.0, max(0.0, p0)), s


def _collapse_system(s, bit):
    a = s.amps.reshape(2, -1)[bit]
    return qstate.StateVector(a / np.linalg.norm(a), check=False)


# --- IPEA ---------------------------------------------------------------------------

def feedback_angle(later_bits):
    """omega_k = -2 pi (0.0 x_{k+1} ... x_m) for later_bits = [x_{k+1}, ..., x_m]."""
    return -TWO_PI * sum(b * 2.0 ** -(i + 2) for i, b in enumerate(later_bits))


def ipea(problem, rng, plan=None, reuse=False):
    """Iterative estimation, least significant bit first, one ancilla.

    With a plan, bit k is decided by majority over ``plan.n[k-1]`` shots.
    ``reuse`` keeps the system register alive between shots instead of
    preparing a fresh eigenstate.
    """
    m = problem.m
    if plan is not None and len(plan.n) != m:
        raise ValidationError("plan length differs from m")
    bits = [0] * m
    records = []
    shots = 0
    sys_state = None
    for k in range(m, 0, -1):
        omega = feedback_angle(bits[k:])
        n_k = plan.n[k - 1] if plan is not None else 1
        if not reuse or problem.is_oracle:
            p0, _ = ancilla_step(problem, 2 ** (k - 1), omega)
            ones = int(rng.binomial(n_k, 1.0 - p0))
        else:
            ones = 0
            for _ in range(n_k):
                if sys_state is None:
                    sys_state = problem.prepare()
                p0, s = ancilla_step(problem, 2 ** (k - 1), omega, sys_state)
                out = int(rng.random() >= p0)
                ones += out
                sys_state = _collapse_system(s, out)
        shots += n_k
        x = 1 if 2 * ones > n_k else 0
        bits[k - 1] = x
        agree = ones if x else n_k - ones
        records.append(BitRecord(k, omega, n_k, agree / n_k, x))
    j = sum(b << (m - i - 1) for i, b in enumerate(bits))
    return PhaseRunResult("ipea", m, bits, j / 2 ** m, shots, records, phi_true=problem.phi)


def ipea_outcome_distribution(problem):
    """Exact distribution of the m-bit IPEA output by path enumeration
    (fresh eigenstate every iteration, one shot per bit)."""
    m = problem.m
    if m > 14:
        raise ValidationError("path enumeration limited to m <= 14")
    probs = np.zeros(2 ** m)

    def walk(k, later, p):
        if p == 0.0:
            return
        if k == 0:
            probs[sum(b << (m - i - 1) for i, b in enumerate(later))] += p
            return
        p0, _ = ancilla_step(problem, 2 ** (k - 1), feedback_angle(later))
        walk(k - 1, [0] + later, p * p0)
        walk(k - 1, [1] + later, p * (1.0 - p0))

    walk(m, [], 1.0)
    return probs


def ipea_oracle_batch(phi, m, rng, shots, n_per_bit=None, true_feedback=False):
    """Vectorised IPEA on an abstract phase: returns an int array (shots, m)
    with column k-1 holding x_k.  ``true_feedback`` feeds back the exact
    bits of floor(phi 2^m) instead of the measured ones."""
    n_per_bit = [1] * m if n_per_bit is None else list(n_per_bit)
    out = np.zeros((int(shots), m), dtype=np.int8)
    true_bits = bits_of(int(math.floor(phi * 2 ** m)) % 2 ** m, m)
    for k in range(m, 0, -1):
        if true_feedback:
            omega = np.full(int(shots), feedback_angle(true_bits[k:]))
        else:
            w = np.array([2.0 ** -(i + 2) for i in range(m - k)])
            omega = -TWO_PI * (out[:, k:] @ w if m - k else np.zeros(int(shots)))
        theta = TWO_PI * ((2 ** (k - 1) * phi) % 1.0) + omega
        p1 = np.sin(theta / 2) ** 2
        n = n_per_bit[k - 1]
        ones = rng.binomial(n, p1)
        out[:, k - 1] = (2 * ones > n)
    return out


# --- Kitaev ---------------------------------------------------------------------------

def constraint_arcs(mult, offset, bit):
    """Arcs of phi in [0,1) with (mult*phi + offset) mod 1 within 1/4 of bit/2.

    Returned as half-open (start, width) pairs, start in [0, 1).
    """
    arcs = []
    for r in range(mult):
        lo = (bit / 2 - 0.25 + r - offset) / mult
        arcs.append((lo % 1.0, 0.5 / mult))
    return arcs


def intersect_arcs(a, b):
    out = []
    for s1, w1 in a:
        for s2, w2 in b:
            for shift in (-1.0, 0.0, 1.0):
                lo = max(s1, s2 + shift)
                hi = min(s1 + w1, s2 + shift + w2)
                if hi - lo > 1e-15:
                    out.append((lo % 1.0, hi - lo))
    return _merge(out)


def _merge(arcs):
    arcs = sorted(arcs)
    out = []
    for s, w in arcs:
        if out and s <= out[-1][0] + out[-1][1] + 1e-15:
            ps, pw = out[-1]
            out[-1] = (ps, max(pw, s + w - ps))
        else:
            out.append((s, w))
    if len(out) > 1 and out[-1][0] + out[-1][1] >= 1.0 + out[0][0] - 1e-15:
        s, w = out.pop()
        fs, fw = out.pop(0)
        out.append((s, (fs + fw + 1.0) - s))
    return out


def _decide(zeros, trials):
    # ties resolve to 0
    return 0 if 2 * zeros >= trials else 1


def kitaev_pea(problem, rng, trials_per_bit=15):
    """Kitaev's scheme: bit k tells whether 2^{k-1} phi mod 1 is nearer 0 or
    1/2; the estimate is the intersection of the implied arcs, with one extra
    quarter-turn-shifted run to pick between phi and its mirror 1 - phi."""
    if trials_per_bit < 1 or trials_per_bit % 2 == 0:
        raise ValidationError("trials_per_bit must be odd and positive")
    m = problem.m
    bits, records, flags = [], [], []
    region = [(0.0, 1.0)]
    for k in range(1, m + 1):
        p0, _ = ancilla_step(problem, 2 ** (k - 1), 0.0)
        zeros = int(rng.binomial(trials_per_bit, p0))
        x = _decide(zeros, trials_per_bit)
        bits.append(x)
        agree = zeros if x == 0 else trials_per_bit - zeros
        records.append(BitRecord(k, 0.0, trials_per_bit, agree / trials_per_bit, x))
        nxt = intersect_arcs(region, constraint_arcs(2 ** (k - 1), 0.0, x))
        if nxt:
            region = nxt
        else:
            flags.append(f"inconsistent_bit_{k}")
    # shifted run: offset of a quarter turn on the k=1 circuit
    p0, _ = ancilla_step(problem, 1, TWO_PI * 0.25)
    zeros = int(rng.binomial(trials_per_bit, p0))
    xs = _decide(zeros, trials_per_bit)
    agree = zeros if xs == 0 else trials_per_bit - zeros
    records.append(BitRecord(0, TWO_PI * 0.25, trials_per_bit, agree / trials_per_bit, xs))
    picked = intersect_arcs(region, constraint_arcs(1, 0.25, xs))
    if not picked:
        flags.append("mirror_unresolved")
        picked = region
    if len(picked) > 1:
        flags.append("multiple_arcs")
    s, w = max(picked, key=lambda a: a[1])
    if w < 2.0 ** -(m + 1) - 1e-12 or w > 2.0 ** -(m + 1) + 1e-12:
        flags.append("widest_arc_fallback")
    estimate = (s + w / 2) % 1.0
    res = PhaseRunResult("kitaev", m, bits, estimate, trials_per_bit * (m + 1), records,
                         phi_true=problem.phi, flags=flags)
    res.extra = {"arc": [s, w], "shift_bit": xs}
    return res


# --- Aspuru-Guzik -------------------------------------------------------------------

def _bin_frac(value, nbits):
    j = int(round(value * 2 ** nbits)) % 2 ** nbits
    return "0." + format(j, f"0{nbits}b")


def aspuru_guzik(problem, rng, ancilla_bits=4, mode="sample"):
    """m rounds of a small QFT estimate on V_k = (e^{-2 pi i phi_{k-1}} V_{k-1})^2.

    ``mode="most_likely"`` takes the most probable readout each round instead
    of sampling, which makes the run deterministic.
    """
    if mode not in ("sample", "most_likely"):
        raise ValidationError(f"unknown mode {mode!r}")
    m, a = problem.m, int(ancilla_bits)
    if a < 1:
        raise ValidationError("ancilla_bits must be >= 1")
    work_phi = problem.phi
    work_u = problem.unitary
    total = 0.0
    table, records = [], []
    for k in range(1, m + 1):
        if problem.is_oracle:
            sub = PhaseProblem(a, phi=work_phi % 1.0)
        else:
            sub = PhaseProblem(a, unitary=work_u, eigenstate=problem.prepare)
        p = qft_pea_distribution(sub)
        j = int(np.argmax(p)) if mode == "most_likely" else int(rng.choice(p.size, p=p))
        phik = j / 2 ** a
        # after the first round the working phase is small, so read it signed
        signed = phik if k == 1 or phik < 0.5 else phik - 1.0
        total += signed / 2 ** (k - 1)
        row = {"k": k, "result": _bin_frac(phik, a), "estimate": _bin_frac(total % 1.0, k),
               "probability": float(p[j])}
        if problem.is_oracle:
            row["working_phase"] = float(work_phi % 1.0)
        table.append(row)
        records.append(BitRecord(k, -TWO_PI * phik, 1, 1.0, j))
        if problem.is_oracle:
            work_phi = (2 * (work_phi - phik)) % 1.0
        else:
            v = np.exp(-2j * math.pi * phik) * work_u
            work_u = v @ v
    est_j = int(round((total % 1.0) * 2 ** m)) % 2 ** m
    res = PhaseRunResult("ag", m, bits_of(est_j, m), est_j / 2 ** m, m, records,
                         phi_true=problem.phi)
    res.extra = {"table": table, "raw_estimate": total % 1.0, "ancilla_bits": a}
    return res


def estimate_error(result):
    return circular_distance(result.estimate, result.phi_true)

"""Two-qubit IPEA benchmark circuits and the Monte Carlo harness around them.

All benchmarks estimate the phase phi = alpha / 2 pi of U = Rz(alpha) acting on
the system qubit (qubit 1, held in |0>); qubit 0 is the ancilla.

    I_xx_cnots         controlled power from two XX(3pi/4) blocks
    II_zz, II_xx       controlled power from one ZZ or XX coupling
    III_unknown_gamma  like II_zz with an unreduced coupling alpha 2^{k-2},
                       alpha = 2 gamma t; recovers the coupling strength
"""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from . import qstate, rng as qrng
from .errors import ResourceError, ValidationError
from .qcircuit import Circuit, gate
from .qnoise import CLASSES, NoiseModel, apply_noisy
from .qpea.analytics import (RepetitionPlan, bits_of, circular_distance, plan_repetitions,
                             split_phase)
from .qpea.estimators import feedback_angle

IDS = ("I_xx_cnots", "II_zz", "II_xx", "III_unknown_gamma")
ALIASES = {"I": "I_xx_cnots", "II_zz": "II_zz", "IIzz": "II_zz", "II_xx": "II_xx",
           "IIxx": "II_xx", "III": "III_unknown_gamma"}
GRID = 64
TWO_PI = 2 * math.pi
PI = math.pi


def canonical_id(name):
    name = ALIASES.get(name, name)
    if name not in IDS:
        raise ValidationError(f"unknown benchmark {name!r}; expected one of {IDS}")
    return name


@dataclass(frozen=True)
class BenchmarkSpec:
    id: str = "I_xx_cnots"
    alpha: Optional[float] = None      # None: average over a jittered alpha grid
    m: int = 10
    noise: NoiseModel = field(default_factory=NoiseModel)
    trials: int = 640
    eps: float = 0.05
    seed: int = 0
    use_plan: bool = False
    gamma_t: Optional[float] = None    # benchmark III: alpha = 2 gamma t
    t: float = 1.0                     # benchmark III interaction time unit
    fields: dict = field(default_factory=dict)   # B_x / B_z context, not used by gates

    def __post_init__(self):
        object.__setattr__(self, "id", canonical_id(self.id))
        if self.gamma_t is not None:
            object.__setattr__(self, "alpha", 2.0 * self.gamma_t)
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if not 1 <= self.m <= 30:
            raise ValidationError("m must be in [1, 30]")
        if not 0 < self.eps < 0.5:
            raise ValidationError("eps must be in (0, 1/2)")

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass
class BenchmarkResult:
    success_rate: float
    per_bit_freq: List[float]
    total_measurements: int
    trials: int
    m: int
    seed: int
    plan: Optional[RepetitionPlan] = None

    def to_dict(self):
        d = {"success_rate": self.success_rate, "per_bit_freq": list(self.per_bit_freq),
             "total_measurements": self.total_measurements, "trials": self.trials,
             "m": self.m, "seed": self.seed}
        if self.plan is not None:
            d["plan"] = self.plan.to_dict()
        return d


# --- circuits -------------------------------------------------------------------------

def build_benchmark_step(spec, k, omega=0.0, alpha=None):
    """Gate sequence of IPEA step k (1 <= k <= m) with feedback angle omega."""
    if not 1 <= k <= spec.m:
        raise ValidationError(f"step k={k} outside [1, {spec.m}]")
    a = spec.alpha if alpha is None else alpha
    if a is None:
        raise ValidationError("alpha is required to build a step")
    c = Circuit(2)
    if spec.id == "I_xx_cnots":
        ang = (2 ** (k - 1) * a) % TWO_PI
        for _ in range(2):
            c.add(gate("Rz", ang), 1)
            c.add(gate("Rx", PI / 2), 0).add(gate("Rx", PI / 2), 1)
            c.add(gate("XX", 3 * PI / 4), 0, 1)
        c.add(gate("Rx", omega), 0)
    elif spec.id == "II_zz":
        c.add(gate("Rx", PI / 2), 0)
        c.add(gate("ZZ", (0.5 * a * 2 ** (k - 1)) % TWO_PI), 0, 1)
        c.add(gate("Rz", omega), 0)
        c.add(gate("Rx", -PI / 2), 0)
    elif spec.id == "II_xx":
        c.add(gate("Rx", PI / 2), 1).add(gate("Rz", -PI / 2), 1)
        c.add(gate("XX", (0.5 * a * 2 ** (k - 1)) % TWO_PI), 0, 1)
        c.add(gate("Rx", -omega), 0)
        c.add(gate("Rz", PI / 4), 0)
    else:
        c.add(gate("Rx", PI / 2), 0)
        c.add(gate("ZZ", 0.5 * a * 2 ** (k - 1)), 0, 1)
        c.add(gate("Rz", omega), 0)
        c.add(gate("Rx", -PI / 2), 0)
    return c


def step_p0(spec, k, omega, alpha, rng):
    """P(ancilla reads 0) for one noisy run of step k."""
    c = build_benchmark_step(spec, k, omega, alpha)
    noise = spec.noise
    if noise.dephasing_ratio > 0:
        init = qstate.to_density(qstate.zero_state(2))
    else:
        init = qstate.zero_state(2)
    if noise.is_zero:
        from .qcircuit import run
        s = run(c, init)
    else:
        s = apply_noisy(c, init, noise, rng)
    return qstate.outcome_distribution(s, [0])[0][1]


def alpha_for_trial(spec, i, rng):
    """Fixed alpha, or grid point i mod 64 of [0, 2pi) plus uniform jitter."""
    if spec.alpha is not None:
        return spec.alpha
    return TWO_PI * ((i % GRID) + rng.random()) / GRID


def nearest_bits(phi, m):
    """Bits of the m-bit fraction closest to phi (circularly)."""
    return bits_of(int(math.floor(phi * 2 ** m + 0.5)) % 2 ** m, m)


def target_phase(spec, alpha):
    return (alpha / TWO_PI) % 1.0


def analytic_p_err(alpha, m, k, sigma_x=0.0, ratio=0.0):
    """Per-bit success of benchmark III given correct later bits:
    (1 + exp(-sigma_x^2 - |alpha| 2^k ratio) cos(pi 2^k delta 2^-m)) / 2.

    Bits are judged against the nearest m-bit value, so delta is the signed
    remainder in [-1/2, 1/2); below 1/2 this is the usual floor remainder.
    """
    _, delta = split_phase((alpha / TWO_PI) % 1.0, m)
    if delta >= 0.5:
        delta -= 1.0
    damp = math.exp(-sigma_x ** 2 - abs(alpha) * 2 ** k * ratio)
    return 0.5 * (1.0 + damp * math.cos(PI * 2 ** k * delta * 2.0 ** -m))


# --- harness --------------------------------------------------------------------------

def _run_trial(spec, i, plan, base_seed):
    g = qrng.stream(base_seed, i)
    alpha = alpha_for_trial(spec, i, g)
    m = spec.m
    bits = [0] * m
    shots = 0
    for k in range(m, 0, -1):
        omega = feedback_angle(bits[k:])
        n_k = plan.n[k - 1] if plan is not None else 1
        ones = 0
        for _ in range(n_k):
            p0 = step_p0(spec, k, omega, alpha, g)
            ones += int(g.random() >= p0)
        shots += n_k
        bits[k - 1] = 1 if 2 * ones > n_k else 0
    phi = target_phase(spec, alpha)
    j = sum(b << (m - i2 - 1) for i2, b in enumerate(bits))
    est = j / 2 ** m
    ok = circular_distance(est, phi) < 2.0 ** -m
    truth = nearest_bits(phi, m)
    return ok, [int(b == t) for b, t in zip(bits, truth)], shots


def run_benchmark(spec, rng=None):
    """Full m-bit IPEA with feedback, ``spec.trials`` independent runs.

    Trial i draws everything from stream (seed, i), so results do not depend
    on evaluation order. ``rng`` (a Generator) only reseeds the base.
    """
    base = spec.seed if rng is None else int(rng.integers(2 ** 62))
    plan = measurement_budget(spec) if spec.use_plan else None
    succ = 0
    per_bit = np.zeros(spec.m)
    for i in range(spec.trials):
        ok, agree, _ = _run_trial(spec, i, plan, base)
        succ += ok
        per_bit += agree
    return BenchmarkResult(succ / spec.trials, list(per_bit / spec.trials),
                           plan.total if plan is not None else spec.m, spec.trials,
                           spec.m, base, plan)


def bit_success_rate(spec, k, trials, seed=0, alpha=None):
    """Frequency with which bit k is right when bits k+1..m are fed back exactly."""
    succ = 0
    for i in range(trials):
        g = qrng.stream(seed, k, i)
        a = alpha if alpha is not None else alpha_for_trial(spec, i, g)
        phi = target_phase(spec, a)
        truth = nearest_bits(phi, spec.m)
        p0 = step_p0(spec, k, feedback_angle(truth[k:]), a, g)
        bit = int(g.random() >= p0)
        succ += bit == truth[k - 1]
    return succ / trials


def bit_probabilities(spec, source="analytic", pilot_trials=200):
    """Per-bit single-shot success P_k, index k-1.

    "analytic" uses the closed form (exact for benchmark III and for the
    noiseless circuits); "pilot" estimates from sample runs.  Without a fixed
    alpha the values are averaged over the 64-point grid on [0, 2pi).
    """
    m, nz = spec.m, spec.noise
    if source == "analytic":
        alphas = [spec.alpha] if spec.alpha is not None else \
            [TWO_PI * i / GRID for i in range(GRID)]
        return [float(np.mean([analytic_p_err(a, m, k, nz.sigma_x, nz.dephasing_ratio)
                               for a in alphas])) for k in range(1, m + 1)]
    if source == "pilot":
        return [bit_success_rate(spec, k, pilot_trials, spec.seed) for k in range(1, m + 1)]
    raise ValidationError(f"unknown probability source {source!r}")


def _default_source(spec):
    nz = spec.noise
    uniform = any(nz.delta.get(c, 0) for c in CLASSES)
    if nz.is_zero or (spec.id == "III_unknown_gamma" and not uniform):
        return "analytic"
    return "pilot"


def measurement_budget(spec, source=None):
    """Repetition plan (N_k per bit) reaching overall error eps."""
    p = bit_probabilities(spec, source or _default_source(spec))
    return plan_repetitions(p, spec.eps)


def max_bits_under_budget(spec, budget=10_000, m_max=30):
    """Largest m whose plan needs fewer than ``budget`` measurements.

    Every m up to ``m_max`` is tried; an m that cannot be planned at all (a
    bit stuck at success 1/2) is skipped rather than ending the search.
    """
    best = 0
    for m in range(1, m_max + 1):
        try:
            plan = measurement_budget(spec.with_(m=m), "analytic")
        except (ValidationError, ResourceError):
            continue
        if plan.total < budget:
            best = m
    return best


SWEEP_PARAMS = ("delta_all", "delta_Rz", "delta_Rx", "delta_coupling", "sigma_x",
                "dephasing_ratio", "m")


def spec_with_param(spec, param, value):
    nz = spec.noise
    d = dict(nz.delta)
    if param == "delta_all":
        d = {c: float(value) for c in CLASSES}
    elif param == "delta_Rz":
        d["Rz"] = float(value)
    elif param == "delta_Rx":
        d["Rx"] = float(value)
    elif param == "delta_coupling":
        d["ZZ"] = d["XX"] = float(value)
    elif param == "sigma_x":
        return spec.with_(noise=nz.replace(sigma_x=float(value)))
    elif param == "dephasing_ratio":
        return spec.with_(noise=nz.replace(dephasing_ratio=float(value)))
    elif param == "m":
        return spec.with_(m=int(value))
    else:
        raise ValidationError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")
    return spec.with_(noise=nz.replace(delta=d))


CSV_HEADER = ("param", "value", "success_rate", "total_measurements", "m", "seed")


def sweep(spec, param, values, rng=None):
    """One CSV row (dict) per value, in sorted value order."""
    if param not in SWEEP_PARAMS:
        raise ValidationError(f"unknown sweep parameter {param!r}; expected one of {SWEEP_PARAMS}")
    rows = []
    for v in sorted(values):
        s = spec_with_param(spec, param, v)
        r = run_benchmark(s, rng)
        rows.append({"param": param, "value": v, "success_rate": r.success_rate,
                     "total_measurements": r.total_measurements, "m": s.m, "seed": r.seed})
    return rows


# Figure recipes: which benchmark, which axis, which values.
PRESETS = {
    "fig1": {"id": "I_xx_cnots", "param": "delta_all", "m": 10, "trials": 640,
             "values": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]},
    "fig2": {"id": "I_xx_cnots", "param": "m", "trials": 64, "use_plan": True,
             "noise": {"delta": {"Rz": 0.2, "Rx": 0.2, "XX": 0.2}},
             "values": [2, 4, 6, 8]},
    "fig3": {"id": "II_zz", "param": "delta_all", "m": 10, "trials": 640,
             "values": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]},
    "fig4": {"id": "II_xx", "param": "delta_all", "m": 10, "trials": 640,
             "values": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]},
    "fig5": {"id": "III_unknown_gamma", "param": "sigma_x", "m": 8, "trials": 640,
             "values": [0.0, 0.1, 0.2, 0.3, 0.4]},
    "fig6": {"id": "III_unknown_gamma", "param": "dephasing_ratio", "m": 6, "trials": 320,
             "values": [0.0, 0.01, 0.02, 0.05, 0.1]},
}

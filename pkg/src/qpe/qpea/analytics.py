"""Closed-form outcome probabilities and majority-vote repetition planning."""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import ResourceError, ValidationError


def analytic_pj(phi, m, j):
    """Probability that QFT phase estimation with m ancillas reads j."""
    if not 0 <= phi < 1:
        raise ValidationError(f"phi={phi} outside [0, 1)")
    if not 0 <= j < 2 ** m:
        raise ValidationError(f"j={j} outside [0, 2^{m})")
    x = phi - j / 2 ** m
    den = math.sin(math.pi * x)
    if abs(den) < 1e-15:
        return 1.0
    return math.sin(math.pi * 2 ** m * x) ** 2 / (4.0 ** m * den ** 2)


def _edge(d, m):
    s = math.sin(math.pi * d * 2.0 ** -m)
    if abs(s) < 1e-300:
        return 1.0
    return math.sin(math.pi * d) ** 2 / (4.0 ** m * s ** 2)


def analytic_bounds(delta, m):
    """(P_down, P_up): probabilities of the two nearest m-bit neighbours.

    ``delta`` is the remainder beyond the first m bits, in units of 2^-m.
    """
    if not 0 <= delta < 1:
        raise ValidationError(f"delta={delta} outside [0, 1)")
    if delta == 0:
        return 1.0, 0.0
    return _edge(delta, m), _edge(1 - delta, m)


def ipea_bit_probability(delta, m, k):
    """Chance that bit k comes out right given bits k+1..m were right."""
    return math.cos(math.pi * 2.0 ** (k - 1) * delta * 2.0 ** -m) ** 2


def split_phase(phi, m):
    """(j, delta) with phi = (j + delta) / 2^m, 0 <= delta < 1."""
    y = phi * 2 ** m
    j = int(math.floor(y))
    return j % 2 ** m, y - j


def bits_of(j, m):
    """MSB-first binary digits: phi = 0.x1 x2 ... xm."""
    return [(j >> (m - k)) & 1 for k in range(1, m + 1)]


def value_of(bits):
    return sum(b << (len(bits) - i - 1) for i, b in enumerate(bits))


def circular_distance(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


# --- regularised incomplete beta -----------------------------------------------

def _betacf(x, a, b):
    # modified Lentz evaluation of the continued fraction
    tiny, eps = 1e-300, 1e-16
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for mm in range(1, 100000):
        m2 = 2 * mm
        aa = mm * (b - mm) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + mm) * (qab + mm) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def reg_inc_beta(x, a, b):
    """I_x(a, b), the regularised incomplete beta function."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"x={x} outside [0, 1]")
    if a <= 0 or b <= 0:
        raise ValidationError("a and b must be positive")
    if x == 0.0 or x == 1.0:
        return float(x)
    lnfront = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
               + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(lnfront) * _betacf(x, a, b) / a
    return 1.0 - math.exp(lnfront) * _betacf(1.0 - x, b, a) / b


def majority_failure(p, n):
    """P(majority of n odd trials wrong) when each is right with prob p."""
    if n % 2 == 0 or n < 1:
        raise ValidationError("majority vote needs an odd, positive n")
    if p >= 1.0:
        return 0.0
    h = (n + 1) / 2
    return reg_inc_beta(1.0 - p, h, h)


def majority_failure_sum(p, n):
    """Same quantity as a direct binomial sum (log-space terms)."""
    if p >= 1.0:
        return 0.0
    if p <= 0.0:
        return 1.0
    lp, lq = math.log(p), math.log1p(-p)
    tot = 0.0
    for s in range((n + 1) // 2, n + 1):          # s = number of wrong outcomes
        tot += math.exp(math.lgamma(n + 1) - math.lgamma(s + 1) - math.lgamma(n - s + 1)
                        + (n - s) * lp + s * lq)
    return tot


def n_repetitions(p0, eps):
    """Smallest odd N whose majority vote fails with probability <= eps."""
    if not 0.5 < p0 <= 1.0:
        raise ValidationError(f"p0={p0}: majority voting needs p0 > 1/2")
    if not 0.0 < eps < 0.5:
        raise ValidationError(f"eps={eps} outside (0, 1/2)")
    if p0 == 1.0 or 1.0 - p0 <= eps:
        return 1

    def fail(j):                                  # N = 2j + 1
        return majority_failure(p0, 2 * j + 1)

    lo, hi = 0, 1
    while fail(hi) > eps:
        lo, hi = hi, hi * 2
        if hi > 1 << 40:
            raise ResourceError(f"p0={p0} needs more than 2^41 repetitions")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fail(mid) > eps:
            lo = mid
        else:
            hi = mid
    return 2 * hi + 1


@dataclass(frozen=True)
class RepetitionPlan:
    p: Tuple[float, ...]          # per-bit success of a single shot, index k-1
    target: float                 # per-bit success aimed for
    n: Tuple[int, ...]            # N_k, odd

    @property
    def total(self):
        return int(sum(self.n))

    def majority_success(self):
        return tuple(1.0 - majority_failure(p, n) for p, n in zip(self.p, self.n))

    def to_dict(self):
        return {"p": list(self.p), "target": self.target, "n": list(self.n), "total": self.total}


def plan_repetitions(p_bits, eps):
    """Per-bit N_k so that every bit is right with probability >= 1 - eps/m."""
    p_bits = tuple(float(p) for p in p_bits)
    if not p_bits:
        raise ValidationError("empty probability list")
    m = len(p_bits)
    per_bit = eps / m
    for k, p in enumerate(p_bits, 1):
        if p <= 0.5:
            raise ValidationError(f"bit {k} has success {p:.4g} <= 1/2; majority voting cannot help")
    n = tuple(n_repetitions(min(p, 1.0), per_bit) for p in p_bits)
    return RepetitionPlan(p_bits, 1.0 - per_bit, n)


def uniform_plan(m, n=1):
    if n % 2 == 0 or n < 1:
        raise ValidationError("repetitions must be odd and positive")
    return RepetitionPlan((1.0,) * m, 1.0, (int(n),) * m)

"""Moments and upper tails of window prime counts, against Poisson predictions.

Empirical moments come off a WindowHistogram as exact integer sums before
one final division. Predictions are Poisson moments via Stirling numbers,
with both the nominal lambda = h/log x and the measured lambda_eff = m_1
carried side by side on every report.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.special import gammainc


@lru_cache(maxsize=None)
def stirling2(r, l):
    """Stirling number of the second kind S(r, l), exact."""
    if r < 0 or l < 0:
        raise ValueError("need r, l >= 0")
    if l > r:
        return 0
    if r == 0:
        return 1
    if l == 0:
        return 0
    return l * stirling2(r - 1, l) + stirling2(r - 1, l - 1)


def surjection_count(r, l):
    """Number of surjections from an r-set onto an l-set: l! S(r, l)."""
    return math.factorial(l) * stirling2(r, l)


def empirical_moment(hist, r):
    """m_r = (1/x) sum_c N_c c^r, the integer sum taken exactly."""
    if r < 0:
        raise ValueError("need r >= 0")
    return sum(n * c ** r for c, n in hist.counts.items()) / hist.x


def predicted_moment(r, lam):
    """r-th moment of Poisson(lam): sum_l S(r, l) lam^l."""
    if r < 1:
        raise ValueError("need r >= 1")
    if lam <= 0:
        raise ValueError("need lam > 0")
    return math.fsum(stirling2(r, l) * lam ** l for l in range(1, r + 1))


def exact_count(hist, k):
    """N_k: number of windows holding exactly k primes."""
    if k < 0:
        raise ValueError("need k >= 0")
    return hist.counts.get(k, 0)


def tail_count(hist, k):
    """I(x; k, h): number of windows holding at least k primes."""
    if k < 0:
        raise ValueError("need k >= 0")
    return sum(n for c, n in hist.counts.items() if c >= k)


def poisson_pmf(lam, k):
    if lam <= 0 or k < 0:
        raise ValueError("need lam > 0 and k >= 0")
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def poisson_tail(lam, k):
    """P(X >= k) for X ~ Poisson(lam), via the regularized gamma integral."""
    if lam <= 0 or k < 0:
        raise ValueError("need lam > 0 and k >= 0")
    if k == 0:
        return 1.0
    return float(gammainc(k, lam))


def corollary_bound(lam, k):
    """exp(-k/(lam e)) for lam >= 1, else exp(-k/((lam+1) e))."""
    if lam <= 0 or k < 1:
        raise ValueError("need lam > 0 and k >= 1")
    scale = lam if lam >= 1 else lam + 1.0
    return math.exp(-k / (scale * math.e))


def biggerk_bound(k, lam, h, delta):
    """exp((log h)^(1-delta) (log(lam+1) + (1-delta) log log h - log k)).

    Needs h > e so the inner log log is positive.
    """
    if k < 1 or lam <= 0:
        raise ValueError("need k >= 1 and lam > 0")
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    if h <= math.e:
        raise ValueError("need h > e")
    lh = math.log(h)
    return math.exp(lh ** (1.0 - delta) * (math.log(lam + 1.0) + (1.0 - delta) * math.log(lh) - math.log(k)))


@dataclass(frozen=True)
class MomentReport:
    x: int
    h: float
    lam: float
    lam_eff: float
    r: int
    empirical: float
    predicted: float
    ratio: float
    predicted_eff: float
    ratio_eff: float


@dataclass(frozen=True)
class TailReport:
    x: int
    h: float
    lam: float
    lam_eff: float
    k: int
    I_count: int
    pi_k_count: int
    poisson_tail: float
    corollary_bound: float | None
    poisson_tail_eff: float
    corollary_bound_eff: float | None


def moment_report(hist, r):
    """Empirical m_r against the Poisson prediction at lambda and lambda_eff."""
    x, h = hist.x, hist.h
    lam = h / math.log(x)
    lam_eff = empirical_moment(hist, 1)
    emp = empirical_moment(hist, r)
    pred = predicted_moment(r, lam)
    pred_eff = predicted_moment(r, lam_eff)
    return MomentReport(x, h, lam, lam_eff, r, emp, pred, emp / pred, pred_eff, emp / pred_eff)


def tail_report(hist, k):
    """Tail and exact window counts at level k with their Poisson analogues."""
    x, h = hist.x, hist.h
    lam = h / math.log(x)
    lam_eff = empirical_moment(hist, 1)
    return TailReport(
        x,
        h,
        lam,
        lam_eff,
        k,
        tail_count(hist, k),
        exact_count(hist, k),
        poisson_tail(lam, k),
        corollary_bound(lam, k) if k >= 1 else None,
        poisson_tail(lam_eff, k),
        corollary_bound(lam_eff, k) if k >= 1 else None,
    )

"""Hardy-Littlewood prediction checks for tuple hit counts.

Compares pi_H(x) against S(H) li_k(x) and the von Mangoldt weighted sum
against S(H) x, reporting the raw error and two square-root-scale
normalizations. The sweep variant shares one sieve, one singular series
and an incrementally extended quadrature across all checkpoints.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .primes import _simple_sieve, count_tuple_hits, sieve_range
from .singular import Tuple, as_tuple, singular_series


def li_k(x, k):
    """integral_2^x dt / (log t)^k; 0 for x < 2; exactly x - 2 for k = 0."""
    if k < 0:
        raise ValueError("need k >= 0")
    if x < 2:
        return 0.0
    if k == 0:
        return float(x) - 2.0
    val, _ = quad(lambda t: math.log(t) ** (-k), 2.0, float(x), epsrel=1e-10, limit=500)
    return val


def vonmangoldt(table, lo, hi):
    """Lambda(n) for n in [lo, hi]: log p at prime powers p^j, else 0."""
    if lo < 0 or hi < lo:
        raise ValueError(f"invalid range [{lo}, {hi}]")
    flags = table.bools(lo, hi)
    n = np.arange(lo, hi + 1, dtype=np.float64)
    lam = np.where(flags, np.log(np.maximum(n, 2.0)), 0.0)
    root_flags = _simple_sieve(max(math.isqrt(hi), 2))
    for p in np.flatnonzero(root_flags):
        p = int(p)
        lp = math.log(p)
        q = p * p
        while q <= hi:
            if q >= lo:
                lam[q - lo] = lp
            q *= p
    return lam


@dataclass(frozen=True)
class HLReport:
    H: Tuple
    x: int
    hits: int
    prediction: float
    abs_error: float
    normalized: float
    normalized_alt: float
    lambda_form_error: float


def _lambda_products(table, H, x):
    """prod_i Lambda(n + h_i) for n = 1..x, as one float64 array."""
    offs = H.offsets
    lam = vonmangoldt(table, 1 + offs[0], x + offs[-1])
    prod = lam[: x].copy()
    for t in offs[1:]:
        prod *= lam[t - offs[0] : t - offs[0] + x]
    return prod


def hl_error_lambda(H, x, table=None):
    """|sum_{n<=x} prod_i Lambda(n + h_i) - S(H) x|.

    Inadmissible tuples have S = 0, so this reduces to the bare sum.
    """
    H = as_tuple(H)
    if x < 2:
        raise ValueError("need x >= 2")
    if H.k == 0:
        return 0.0
    if table is None:
        table = sieve_range(0, x + H.offsets[-1] + 1)
    s = float(_lambda_products(table, H, x).sum())
    sv = singular_series(H, target_error=None)
    return abs(s - sv.value * x)


def hl_error(H, x, table=None):
    """Hit count vs S(H) li_k(x) at a single checkpoint."""
    H = as_tuple(H)
    if H.k == 0:
        raise ValueError("need a non-empty tuple")
    if x < 3:
        raise ValueError("need x >= 3")
    if table is None:
        table = sieve_range(0, x + H.offsets[-1] + 1)
    hits = count_tuple_hits(table, H, x)
    li = li_k(x, H.k)
    sv = singular_series(H, target_error=max(1e-9 * li, 1e-12))
    prediction = sv.value * li
    abs_error = abs(hits - prediction)
    lgx = math.log(x)
    return HLReport(
        H,
        int(x),
        hits,
        prediction,
        abs_error,
        abs_error / (math.sqrt(x) * lgx ** 6),
        abs_error / (math.sqrt(x) * lgx ** H.k),
        hl_error_lambda(H, x, table),
    )


def hl_sweep(H, xs, table=None):
    """hl_error at each ascending checkpoint, sharing one pass of real work."""
    H = as_tuple(H)
    if H.k == 0:
        raise ValueError("need a non-empty tuple")
    xs = [int(x) for x in xs]
    if not xs:
        return []
    if xs[0] < 3 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("checkpoints must be ascending and >= 3")
    top = xs[-1]
    if table is None:
        table = sieve_range(0, top + H.offsets[-1] + 1)
    k = H.k
    offs = H.offsets
    acc = table.bools(1 + offs[0], top + offs[0]).copy()
    for t in offs[1:]:
        acc &= table.bools(1 + t, top + t)
    positions = np.flatnonzero(acc) + 1
    lcum = np.cumsum(_lambda_products(table, H, top))
    sv = singular_series(H, target_error=max(1e-9 * li_k(top, k), 1e-12))
    reports = []
    li = li_k(xs[0], k)
    prev = xs[0]
    for x in xs:
        if x > prev:
            seg, _ = quad(lambda t: math.log(t) ** (-k), prev, x, epsrel=1e-10, limit=500)
            li += seg
            prev = x
        hits = int(np.searchsorted(positions, x, side="right"))
        prediction = sv.value * li
        abs_error = abs(hits - prediction)
        lgx = math.log(x)
        reports.append(
            HLReport(
                H,
                x,
                hits,
                prediction,
                abs_error,
                abs_error / (math.sqrt(x) * lgx ** 6),
                abs_error / (math.sqrt(x) * lgx ** k),
                abs(float(lcum[x - 1]) - sv.value * x),
            )
        )
    return reports

"""Averages of the singular series over k-subsets of [1, h].

T_k(h) sums S(H) over ordered distinct k-tuples, i.e. k! times the sum
over sorted subsets. Exact enumeration is budgeted; the pair case has an
O(h) fast path via translation invariance; everything larger goes through
seeded Monte Carlo whose per-worker streams make results reproducible for
a fixed (seed, samples, workers) triple.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import ResourceError
from .singular import Tuple, primes_upto, singular_series

DEFAULT_BUDGET = 10 ** 7
PER_TUPLE_ERROR = 1e-10
_REJECT_BATCH = 4096
_SHUFFLE_BATCH = 2048


@dataclass(frozen=True)
class ValueWithError:
    value: float
    error: float


@dataclass(frozen=True)
class EstimateWithError:
    mean: float
    stderr: float
    samples: int
    seed: int
    workers: int = 1


# One singular-series evaluation per translation class, shared by every
# caller in the process. Keys are offset tuples anchored at 0.
_ss_cache = {}


def _ss_normed(offs):
    key = tuple(t - offs[0] for t in offs)
    got = _ss_cache.get(key)
    if got is None:
        sv = singular_series(Tuple(key), target_error=None)
        got = (sv.value, sv.error_radius)
        _ss_cache[key] = got
    return got


def tkh_exact(k, h, target_error=PER_TUPLE_ERROR, budget=DEFAULT_BUDGET):
    """T_k(h) by exhaustive enumeration of the C(h,k) sorted subsets.

    The reported error is k! times the larger of the summed radii and
    subsets * target_error. Raises ResourceError if k! C(h,k) exceeds
    the budget.
    """
    if k < 1 or h < 1:
        raise ValueError("need k >= 1 and h >= 1")
    if k > h:
        return ValueWithError(0.0, 0.0)
    n_subsets = math.comb(h, k)
    kf = math.factorial(k)
    if n_subsets * kf > budget:
        raise ResourceError(
            f"k! C(h,k) = {n_subsets * kf} exceeds budget {budget}; "
            f"use tkh_monte_carlo"
        )
    if k == 1:
        return ValueWithError(float(h), 0.0)
    total = 0.0
    radii = 0.0
    for comb in combinations(range(1, h + 1), k):
        v, r = _ss_normed(comb)
        total += v
        radii += r
    err = kf * max(radii, n_subsets * target_error)
    return ValueWithError(kf * total, err)


def tkh_pair_fast(h, target_error=PER_TUPLE_ERROR):
    """T_2(h) = 2 sum_{0<d<h} (h-d) S({0,d}), by translation invariance."""
    if h < 2:
        raise ValueError("need h >= 2")
    total = 0.0
    err = 0.0
    for d in range(1, h):
        v, r = _ss_normed((0, d))
        w = 2.0 * (h - d)
        total += w * v
        err += w * max(r, target_error)
    return ValueWithError(total, err)


def _sample_values(rng, k, h, n):
    """n singular-series values at uniform random k-subsets of [1, h].

    Rejection sampling from sorted iid draws while collisions are rare;
    partial shuffles once k^2 > h/2. Fixed batch sizes keep the stream
    deterministic for a given generator state.
    """
    out = np.empty(n)
    filled = 0
    shuffle = k * k * 2 > h
    pool = np.arange(1, h + 1, dtype=np.int64)
    while filled < n:
        if shuffle:
            block = np.tile(pool, (_SHUFFLE_BATCH, 1))
            block = rng.permuted(block, axis=1)
            rows = np.sort(block[:, :k], axis=1)
        else:
            draw = rng.integers(1, h + 1, size=(_REJECT_BATCH, k))
            rows = np.sort(draw, axis=1)
            rows = rows[(np.diff(rows, axis=1) > 0).all(axis=1)]
        for row in rows[: n - filled].tolist():
            m0 = row[0]
            out[filled] = _ss_normed(tuple(t - m0 for t in row))[0]
            filled += 1
    return out


def tkh_monte_carlo(k, h, samples, seed, workers=1):
    """Mean of S over uniform random sorted k-subsets of [1, h].

    T_k(h) = k! C(h,k) * mean. Each worker w draws its quota from the
    stream seeded by SeedSequence(seed, spawn_key=(w,)), so the estimate
    is bit-reproducible for fixed (seed, samples, workers).
    """
    if not 1 <= k <= h:
        raise ValueError("need 1 <= k <= h")
    if samples < 100:
        raise ValueError("need samples >= 100 for a stable stderr")
    if workers < 1:
        raise ValueError("need workers >= 1")
    vals = np.empty(samples)
    pos = 0
    for w in range(workers):
        quota = samples // workers + (1 if w < samples % workers else 0)
        if quota == 0:
            continue
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(w,)))
        )
        vals[pos : pos + quota] = _sample_values(rng, k, h, quota)
        pos += quota
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(samples))
    return EstimateWithError(mean, stderr, samples, int(seed), int(workers))


def allk_bound(k, prime_budget=10 ** 8):
    """The pair (prod_{p <= k^3} (1 - 1/p)^{-k}, (3 log k)^k).

    The first component dominates every S(H) with |H| = k; the second is
    its clean closed-form stand-in for quick size estimates. The product
    is taken over exact rationals so small cases come out exactly.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    kc = k ** 3
    if kc > prime_budget:
        raise ResourceError(f"k^3 = {kc} exceeds prime budget {prime_budget}")
    frac = Fraction(1)
    for p in primes_upto(kc):
        p = int(p)
        frac *= Fraction(p, p - 1)
    return float(frac ** k), (3.0 * math.log(k)) ** k

"""Singular series S(H) for prime tuples, with rigorous error radii.

The defining product over all primes is split three ways:

  * exact rational local factors at the finitely many p <= k,
  * an exact correction (p - nu_p)/(p - k) at each p > k dividing some
    pairwise difference of H (only there can nu_p < k),
  * the tuple-independent generic tail prod_{p>k} (1 - k/p)/(1 - 1/p)^k.

The generic tail's log is assembled once per k from cached prefix sums
over an explicit prime list up to an analytic boundary, plus a prime-zeta
series for everything beyond it, so a single evaluation costs
O(pi(k) + #{p | D_H}) after the per-k warm-up. Error radii combine the
zeta-series truncation bound with crude-but-sound rounding counts.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ResourceError

_EPS = 2.0 ** -52
_SPF_MAX = 1 << 22  # beyond this, pairwise differences get trial division


@dataclass(frozen=True)
class Tuple:
    """Strictly increasing non-negative offsets h_1 < ... < h_k."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(t) for t in self.offsets)
        if offs and offs[0] < 0:
            raise ValueError("offsets must be non-negative")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be strictly increasing")
        if offs and offs[-1] - offs[0] >= 1 << 63:
            raise ValueError("offset span must fit in 64 bits")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def parse(cls, text):
        """Parse a comma list like "0,2,6"; sorts, rejects duplicates."""
        parts = [int(s) for s in text.split(",") if s.strip()]
        if not parts:
            raise ValueError(f"no offsets in {text!r}")
        if len(set(parts)) != len(parts):
            raise ValueError(f"duplicate offsets in {text!r}")
        return cls(tuple(sorted(parts)))

    @property
    def k(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __len__(self):
        return len(self.offsets)

    def __str__(self):
        return ",".join(str(t) for t in self.offsets)

    def translate(self, c):
        return Tuple(tuple(t + c for t in self.offsets))

    def pairwise_diffs(self):
        offs = self.offsets
        return [offs[j] - offs[i] for i in range(len(offs)) for j in range(i + 1, len(offs))]

    def diff_prime_set(self):
        """Primes dividing some pairwise difference of the offsets."""
        out = set()
        for d in self.pairwise_diffs():
            out |= _factor_primes(d)
        return out


def as_tuple(H):
    if isinstance(H, Tuple):
        return H
    return Tuple(tuple(sorted(int(t) for t in H)))


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    error_radius: float
    prime_limit: int


class _PrimeCtx:
    """Shared, lazily grown prime data plus per-exponent tail caches."""

    def __init__(self):
        self.cap = 0
        self.primes = np.zeros(0, dtype=np.int64)
        self.spf = None
        self.spf_cap = 0
        self.per_k = {}

    def ensure(self, n):
        if n <= self.cap:
            return
        n = max(n, 2 * self.cap, 1 << 17)
        flags = np.ones(n + 1, dtype=bool)
        flags[:2] = False
        for p in range(2, math.isqrt(n) + 1):
            if flags[p]:
                flags[p * p :: p] = False
        self.primes = np.flatnonzero(flags).astype(np.int64)
        self.cap = n
        self.per_k.clear()  # prefix sums index into the prime list; realign

    def ensure_spf(self, n):
        if self.spf is not None and n < self.spf_cap:
            return
        n = min(max(2 * n, 1 << 17), _SPF_MAX)
        spf = np.arange(n, dtype=np.int32)
        for p in range(2, math.isqrt(n - 1) + 1):
            if spf[p] == p:
                sl = spf[p * p :: p]
                np.minimum(sl, np.int32(p), out=sl)
        self.spf = spf
        self.spf_cap = n


_ctx = _PrimeCtx()


def primes_upto(n):
    """Sorted int64 array of primes <= n (shared cache; do not mutate)."""
    _ctx.ensure(n)
    return _ctx.primes[: bisect_right(_ctx.primes, n)]


def _factor_primes(d):
    """Set of distinct prime factors of d >= 1."""
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return set()
    out = set()
    if d < _SPF_MAX:
        _ctx.ensure_spf(d + 1)
        spf = _ctx.spf
        while d > 1:
            p = int(spf[d])
            out.add(p)
            while d % p == 0:
                d //= p
        return out
    for p in primes_upto(math.isqrt(d)):
        p = int(p)
        if p * p > d:
            break
        if d % p == 0:
            out.add(p)
            while d % p == 0:
                d //= p
    if d > 1:
        out.add(d)
    return out


def _is_prime_int(p):
    if p < 2:
        return False
    for q in primes_upto(math.isqrt(p)):
        if p % int(q) == 0:
            return False
    return True


# -- generic tail per exponent k ---------------------------------------


def _zeta_tail_log(k, boundary):
    """log prod_{p > boundary} f_k(p) and a rigorous bound on the truncation.

    Expanding log f_k(p) = -sum_{m>=2} (k^m - k) p^-m / m and swapping the
    sums turns the far tail into prime-zeta values minus finite prefixes.
    Valid because boundary >= 4k^2 keeps every k/p well inside (0, 1/2).
    """
    total = 0.0
    with mpmath.workdps(50):
        qs = [mpmath.mpf(int(q)) for q in primes_upto(boundary)]
        acc = mpmath.mpf(0)
        m = 2
        while True:
            s_m = mpmath.primezeta(m) - mpmath.fsum(q ** (-m) for q in qs)
            acc -= mpmath.mpf(k ** m - k) / m * s_m
            m += 1
            # remaining terms are below boundary*(k/boundary)^m/(m(m-1))
            rem = boundary * (k / boundary) ** m / (m * (m - 1) * (1 - k / boundary))
            if rem < 1e-26 or m > 400:
                break
        total = float(acc)
    return total, rem + 1e-28


def _kdata(k):
    """Per-k tail data: prefix sums of log f_k over the cached primes and
    the assembled log of the full generic tail with its error budget."""
    got = _ctx.per_k.get(k)
    if got is not None:
        return got
    boundary = max(1000, 4 * k * k)
    _ctx.ensure(boundary)
    ps = _ctx.primes
    idx0 = int(bisect_right(ps, k))
    pf = ps[idx0:].astype(np.float64)
    logf = np.log1p(-float(k) / pf) - k * np.log1p(-1.0 / pf)
    prefix = np.zeros(len(logf) + 1)
    np.cumsum(logf, out=prefix[1:])
    idxq = int(bisect_right(ps, boundary))
    head = float(prefix[idxq - idx0])
    head_abs = float(np.abs(logf[: idxq - idx0]).sum())
    ztail, zbound = _zeta_tail_log(k, boundary)
    d = {
        "idx0": idx0,
        "prefix": prefix,
        "log_cinf": head + ztail,
        "err_log": 4.0 * (idxq - idx0 + 4) * _EPS * (head_abs + abs(ztail)) + zbound,
        "boundary": boundary,
    }
    _ctx.per_k[k] = d
    return d


def _generic_log_partial(kd, P):
    """sum of log f_k(p) over k < p <= P, from the cached prefix sums."""
    idx = int(bisect_right(_ctx.primes, P))
    return float(kd["prefix"][max(idx - kd["idx0"], 0)])


# -- local factors -------------------------------------------------------


def residue_classes(H, p):
    """nu_H(p): number of distinct residues of the offsets modulo p."""
    if not _is_prime_int(p):
        raise ValueError(f"{p} is not prime")
    H = as_tuple(H)
    return len({t % p for t in H.offsets})


def local_factor(p, nu, k):
    """(1 - nu/p) / (1 - 1/p)^k, exactly 0.0 when nu = p.

    Evaluated as the integer ratio (p-nu) p^(k-1) / (p-1)^k, which Python
    rounds correctly, so the result is the nearest float to the true value.
    """
    if not _is_prime_int(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= nu <= min(k, p):
        raise ValueError(f"need 1 <= nu <= min(k, p); got nu={nu}, p={p}, k={k}")
    if nu == p:
        return 0.0
    return (p - nu) * p ** (k - 1) / (p - 1) ** k


def tail_log_bound(k, P):
    """Upper bound on |sum_{p > P} log f_k(p)| for P >= 2k^2.

    Uses |log(1+t)| <= 2|t| for |t| <= 1/2 together with
    |f_k(p) - 1| <= 2 k^2 / (p-1)^2 (checked by exact expansion in the
    test suite) and sum_{n > P} (n-1)^-2 <= 1/(P-1).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if k == 1:
        if P < 2:
            raise ValueError("need P >= 2")
        return 0.0
    if P < 2 * k * k:
        raise ValueError(f"need P >= 2k^2 = {2 * k * k}")
    return 4.0 * k * k / (P - 1)


def is_admissible(H):
    """True when the offsets miss a residue class modulo every prime <= k."""
    H = as_tuple(H)
    for p in primes_upto(H.k):
        p = int(p)
        if len({t % p for t in H.offsets}) == p:
            return False
    return True


# -- the series itself ---------------------------------------------------


def singular_series(H, target_error=1e-9):
    """Singular series of H with a rigorous absolute error radius.

    Inadmissible tuples give exactly 0.0 with radius 0. target_error=None
    skips the reachability check and returns the best radius available;
    otherwise a radius above the target raises ResourceError.
    """
    H = as_tuple(H)
    if target_error is not None and target_error <= 0:
        raise ValueError("target_error must be positive")
    k = H.k
    if k <= 1:
        return SingularSeriesValue(1.0, 0.0, 2)
    dps = H.diff_prime_set()
    plimit = max(2 * k * k, max(dps, default=0))
    offs = H.offsets
    value = 1.0
    ops = 4
    for p in primes_upto(k):
        p = int(p)
        nu = len({t % p for t in offs})
        if nu == p:
            return SingularSeriesValue(0.0, 0.0, plimit)
        value *= (p - nu) * p ** (k - 1) / (p - 1) ** k
        ops += 2
    corr = 0.0
    corr_abs = 0.0
    n_corr = 0
    for p in sorted(dps):
        if p <= k:
            continue
        nu = len({t % p for t in offs})
        t = math.log((p - nu) / (p - k))
        corr += t
        corr_abs += abs(t)
        n_corr += 1
    kd = _kdata(k)
    value *= math.exp(corr + kd["log_cinf"])
    log_err = kd["err_log"] + 4.0 * (n_corr + 2) * _EPS * corr_abs
    radius = abs(value) * (math.expm1(log_err) + ops * _EPS)
    if target_error is not None and radius > target_error:
        need = int(4 * k * k * max(value, 1.0) / target_error) + 1
        raise ResourceError(
            f"error radius {radius:.3g} exceeds target {target_error:.3g}; a "
            f"literal truncation would need primes up to about {need}"
        )
    return SingularSeriesValue(value, radius, plimit)


def partial_product(H, P):
    """prod_{p <= P} of the local factors, with no tail attached.

    Truncation diagnostics only; singular_series is the accurate route.
    """
    H = as_tuple(H)
    k = H.k
    if k <= 1:
        return 1.0
    _ctx.ensure(max(P, 4 * k * k))
    kd = _kdata(k)
    value = 1.0
    for p in primes_upto(min(k, P)):
        p = int(p)
        nu = len({t % p for t in H.offsets})
        if nu == p:
            return 0.0
        value *= (p - nu) * p ** (k - 1) / (p - 1) ** k
    corr = 0.0
    for p in sorted(H.diff_prime_set()):
        if k < p <= P:
            nu = len({t % p for t in H.offsets})
            corr += math.log((p - nu) / (p - k))
    return value * math.exp(_generic_log_partial(kd, P) + corr)


def jensen_split_bound(H):
    """Upper bound on S(H) from splitting the product at k^3.

    Everything below k^3 is bounded tuple-independently; the sparse
    correction above k^3 is averaged over the C(k,2) pairwise differences
    through convexity of exp, which is what makes this a true bound.
    """
    H = as_tuple(H)
    k = H.k
    if k < 2:
        raise ValueError("need k >= 2")
    kc = k ** 3
    _ctx.ensure(kc)
    kd = _kdata(k)
    ps = primes_upto(kc).astype(np.float64)
    head = float(np.exp(-k * np.log1p(-1.0 / ps).sum()))
    tail = math.exp(kd["log_cinf"] - _generic_log_partial(kd, kc))
    offs = H.offsets
    cc = k * (k - 1) // 2
    acc = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            s = sum(1.0 / p for p in _factor_primes(offs[j] - offs[i]) if p > kc)
            acc += math.exp(2.0 * cc * s)
    return head * tail * acc / cc

"""Selberg sieve quantities for a tuple: G(z), W(z), and upper bounds.

G(z) sums the multiplicative weight g(d) = prod_{p|d} nu(p)/(p - nu(p))
over squarefree d < z by depth-first extension over ascending primes, so
the z-pruning is a clean break. W(z) is the plain Mertens-style product.
The raw Halberstam-Richert style bound and the (2+eps)^k k! S(H) x/log^k x
theorem form are both reported, never asserted.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleModulusError
from .primes import count_tuple_hits, sieve_range
from .singular import as_tuple, primes_upto, singular_series, Tuple, _factor_primes

log = logging.getLogger(__name__)

# |D_H| enters only through log log(3 |D_H|); cap it in log space
_LOG_DH_CAP = 700.0


def _nu_table(H, z):
    """(primes p < z, nu_H(p)) as parallel arrays."""
    ps = primes_upto(z - 1)
    offs = H.offsets
    nus = np.empty(len(ps), dtype=np.int64)
    for i, p in enumerate(ps.tolist()):
        nus[i] = len({t % p for t in offs})
    return ps, nus


def g_value(d, H):
    """g(d) = nu(d) / (d prod_{p|d} (1 - nu(p)/p)) for squarefree d >= 1.

    Multiplicative, so each prime contributes nu(p)/(p - nu(p)).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    H = as_tuple(H)
    if d == 1:
        return 1.0
    out = 1.0
    m = d
    for p in sorted(_factor_primes(d)):
        m //= p
        if m % p == 0:
            raise ValueError(f"{d} is not squarefree")
        nu = len({t % p for t in H.offsets})
        if nu == p:
            raise InadmissibleModulusError(f"nu({p}) = {p}: weight undefined")
        out *= nu / (p - nu)
    return out


def big_G(z, H, _with_skips=False):
    """G(z) = sum over squarefree d < z of g(d).

    Primes with nu(p) = p carry no valid weight; they are skipped with a
    warning and a count, which keeps G finite for inadmissible tuples.
    """
    if z < 2:
        raise ValueError("need z >= 2")
    H = as_tuple(H)
    ps, nus = _nu_table(H, z)
    bad = nus == ps
    skipped = int(np.count_nonzero(bad))
    if skipped:
        log.warning("big_G: skipping %d primes with nu(p) = p", skipped)
    ps_l = ps[~bad].tolist()
    gs = [int(n) / (int(p) - int(n)) for p, n in zip(ps_l, nus[~bad].tolist())]
    total = 0.0

    def extend(i0, prod, weight):
        nonlocal total
        total += weight
        for i in range(i0, len(ps_l)):
            nxt = prod * ps_l[i]
            if nxt >= z:
                break
            extend(i + 1, nxt, weight * gs[i])

    extend(0, 1, 1.0)
    if _with_skips:
        return total, skipped
    return total


def big_W(z, H):
    """W(z) = prod_{p < z} (1 - nu(p)/p); exactly 0.0 when some nu(p) = p."""
    if z < 2:
        raise ValueError("need z >= 2")
    H = as_tuple(H)
    ps, nus = _nu_table(H, z)
    if np.any(nus == ps):
        return 0.0
    out = 1.0
    for p, nu in zip(ps.tolist(), nus.tolist()):
        out *= (p - nu) / p
    return out


def sieve_upper_bound(H, x, z):
    """x/G(z) + z^2/W(z)^3, the raw sieve bound on hits up to x."""
    if x < 1:
        raise ValueError("need x >= 1")
    W = big_W(z, H)
    if W == 0.0:
        raise InadmissibleModulusError(
            "W(z) = 0: some prime below z covers every residue class"
        )
    return x / big_G(z, H) + z * z / W ** 3


def theorem_bound(H, x, epsilon):
    """(2 + eps)^k k! S(H) x / (log x)^k.

    Inadmissible tuples make this vacuous (0); that is flagged in the log
    rather than raised, since the quantity itself is well defined.
    """
    H = as_tuple(H)
    if x < 16:
        raise ValueError("need x >= 16")
    if epsilon <= 0:
        raise ValueError("need epsilon > 0")
    k = H.k
    sv = singular_series(H, target_error=None)
    if sv.value == 0.0:
        log.warning("theorem_bound: inadmissible tuple, bound is vacuous")
    return (2.0 + epsilon) ** k * math.factorial(k) * sv.value * x / math.log(x) ** k


def _log_abs_dh(H):
    """log |D_H| = sum of log pairwise differences; 0 for k < 2."""
    return sum(math.log(d) for d in H.pairwise_diffs())


def omega_constants(H):
    """(alpha_1, L) = (k + 1, k log log(3 min(|D_H|, cap))).

    |D_H| is handled entirely in log space so huge tuples cannot overflow.
    """
    H = as_tuple(H)
    k = H.k
    inner = math.log(3.0) + min(_log_abs_dh(H), _LOG_DH_CAP)
    return k + 1, k * math.log(inner)


def omega2_deviation(H, w, z):
    """sum_{w <= p < z} nu(p) log p / p minus its k log(z/w) main term.

    Reported as a diagnostic; no constant is asserted.
    """
    if not 2 <= w < z:
        raise ValueError("need 2 <= w < z")
    H = as_tuple(H)
    ps, nus = _nu_table(H, z)
    sel = ps >= w
    pf = ps[sel].astype(np.float64)
    s = float(np.sum(nus[sel] * np.log(pf) / pf))
    return s - H.k * math.log(z / w)


def gamma_cross_check(H, z):
    """R(z) = 1 / (G(z) W(z) e^(gamma k) k!); drifts toward 1 as z grows."""
    if z < 16:
        raise ValueError("need z >= 16")
    H = as_tuple(H)
    W = big_W(z, H)
    if W == 0.0:
        raise InadmissibleModulusError(
            "W(z) = 0: some prime below z covers every residue class"
        )
    k = H.k
    return 1.0 / (big_G(z, H) * W * math.exp(np.euler_gamma * k) * math.factorial(k))


@dataclass(frozen=True)
class SieveReport:
    H: Tuple
    x: int
    z: int
    epsilon: float | None
    G_z: float
    W_z: float
    raw_bound: float
    theorem_bound: float
    actual: int
    ratio_actual_over_bound: float
    alpha1: int
    L_estimate: float
    correction_term: float


def sieve_report(H, x, z=None, epsilon=None, table=None):
    """Bounds vs the actual hit count, with the diagnostic constants.

    Exactly one of z and epsilon must be given; epsilon sets
    z = round(x^(1/(2+epsilon))). The (1 + O(.)) correction of the
    theorem form is reported separately, never folded into the bound.
    """
    H = as_tuple(H)
    if (z is None) == (epsilon is None):
        raise ValueError("give exactly one of z and epsilon")
    if x < 16:
        raise ValueError("need x >= 16")
    eps_for_bound = epsilon if epsilon is not None else 0.1
    if z is None:
        z = max(2, round(x ** (1.0 / (2.0 + epsilon))))
    z = int(z)
    if table is None:
        table = sieve_range(0, x + (H.offsets[-1] if H.k else 0) + 1)
    k = H.k
    actual = count_tuple_hits(table, H, x)
    W = big_W(z, H)
    G = big_G(z, H)
    raw = x / G + z * z / W ** 3 if W > 0.0 else math.inf
    thm = theorem_bound(H, x, eps_for_bound)
    alpha1, L = omega_constants(H)
    correction = (math.log(math.log(3.0 * x)) + k ** 3 + L) / math.log(x)
    ratio = actual / thm if thm > 0 else math.inf
    return SieveReport(
        H, int(x), z, epsilon, G, W, raw, thm, actual, ratio, alpha1, L, correction
    )

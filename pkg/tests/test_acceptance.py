"""End-to-end checks at the scales and tolerances the package promises.

Each test prints its measured margins before asserting, so a log scan
shows how close every run came. Two sub-checks are documented known
shortfalls at these scales (the lambda_eff moment tolerance at r >= 2 and
the 0.05 total-variation cap); they are asserted as stated anyway, and
their failure output carries the measured values.
"""

import math
import time

import pytest

from primetail import (
    Tuple,
    allk_bound,
    corollary_bound,
    empirical_moment,
    gamma_cross_check,
    hl_sweep,
    is_admissible,
    poisson_pmf,
    poisson_tail,
    predicted_moment,
    sieve_range,
    sieve_report,
    stirling2,
    surjection_count,
    tail_count,
    tkh_exact,
    tkh_monte_carlo,
    tkh_pair_fast,
    window_counts,
)
from primetail.moments import poisson_pmf as _pmf

X8 = 10 ** 8

TEN_TUPLES = (
    Tuple.parse("0,2,6,8,12,18,20,26,30,32"),
    Tuple.parse("0,2,6,12,14,20,24,26,30,32"),
    Tuple.parse("0,2,6,8,12,18,20,26,30,36"),
)


@pytest.fixture(scope="module")
def big_hist():
    table = sieve_range(0, X8 + 64)
    t0 = time.time()
    hist = window_counts(table, X8, math.log(X8))
    return hist, time.time() - t0


def test_acceptance_1_prediction_envelope():
    t0 = time.time()
    table = sieve_range(0, 5500 + 36 + 1)
    worst = 0.0
    for H in TEN_TUPLES:
        assert H.k == 10 and H.offsets[0] >= 0 and H.offsets[-1] <= 40
        assert is_admissible(H)
        reps = hl_sweep(H, range(100, 5501), table)
        assert len(reps) == 5401
        worst = max(worst, max(r.normalized for r in reps))
    elapsed = time.time() - t0
    print(f"[criterion 1] max normalized error {worst:.4f} (<= 1), {elapsed:.2f}s (< 5s)")
    assert worst <= 1.0
    assert elapsed < 5.0


def test_acceptance_2_pair_average_deviation():
    t0 = time.time()
    devs = {}
    for h in (10 ** 3, 10 ** 4):
        v = tkh_pair_fast(h)
        devs[h] = abs(v.value / h ** 2 - 1.0)
        allowed = 2.0 * math.log(h) / h
        print(f"[criterion 2] h={h}: |T_2/h^2 - 1| = {devs[h]:.6f} (<= {allowed:.6f})")
        assert devs[h] <= allowed
    elapsed = time.time() - t0
    print(f"[criterion 2] deviation shrinks: {devs[10 ** 4]:.6f} < {devs[10 ** 3]:.6f}, {elapsed:.1f}s (< 30s)")
    assert devs[10 ** 4] < devs[10 ** 3]
    assert elapsed < 30.0


def test_acceptance_3_mc_seed_consistency():
    t0 = time.time()
    a = tkh_monte_carlo(10, 100, 10 ** 5, seed=12345)
    b = tkh_monte_carlo(10, 100, 10 ** 5, seed=67890)
    envelope = allk_bound(10)[0]
    spread = abs(a.mean - b.mean)
    combined = math.hypot(a.stderr, b.stderr)
    elapsed = time.time() - t0
    print(
        f"[criterion 3] means {a.mean:.5f} / {b.mean:.5f}, spread {spread:.5f} "
        f"(<= {3 * combined:.5f}), envelope {envelope:.3e}, {elapsed:.1f}s (< 120s)"
    )
    assert a.mean < envelope and b.mean < envelope
    assert spread <= 3.0 * combined
    assert elapsed < 120.0


def test_acceptance_4_moment_tolerances(big_hist):
    hist, hist_seconds = big_hist
    t0 = time.time()
    lam = hist.h / math.log(hist.x)
    lam_eff = empirical_moment(hist, 1)
    dev_raw, dev_eff = {}, {}
    for r in (1, 2, 3, 4):
        emp = empirical_moment(hist, r)
        dev_raw[r] = abs(emp / predicted_moment(r, lam) - 1.0)
        dev_eff[r] = abs(emp / predicted_moment(r, lam_eff) - 1.0)
    elapsed = hist_seconds + (time.time() - t0)
    for r in (1, 2, 3, 4):
        print(
            f"[criterion 4] r={r}: raw dev {dev_raw[r]:.4f} (<= {0.10 * r:.2f}), "
            f"eff dev {dev_eff[r]:.4f} (<= 0.05)"
        )
    print(f"[criterion 4] lambda={lam:.6f} lambda_eff={lam_eff:.6f}, {elapsed:.1f}s (< 180s)")
    assert elapsed < 180.0
    for r in (1, 2, 3, 4):
        assert dev_raw[r] <= 0.10 * r, f"raw-lambda deviation at r={r}: {dev_raw[r]:.4f}"
    for r in (1, 2, 3, 4):
        assert dev_eff[r] <= 0.05, (
            f"lambda_eff deviation at r={r} is {dev_eff[r]:.4f}; measured shortfall "
            f"at this scale, see README"
        )


def test_acceptance_5_tails_and_total_variation(big_hist):
    hist, _ = big_hist
    lam_eff = empirical_moment(hist, 1)
    for k in range(4, 11):
        frac = tail_count(hist, k) / hist.x
        bound = corollary_bound(lam_eff, k)
        print(f"[criterion 5] k={k}: I/x = {frac:.3e} (<= {bound:.3e})")
        assert frac <= bound
    top = max(hist.counts)
    tv = 0.5 * (
        sum(
            abs(hist.counts.get(c, 0) / hist.x - _pmf(lam_eff, c))
            for c in range(top + 1)
        )
        + poisson_tail(lam_eff, top + 1)
    )
    print(f"[criterion 5] total variation vs Poisson(lambda_eff) = {tv:.4f} (<= 0.05)")
    assert tv <= 0.05, (
        f"total variation {tv:.4f} exceeds 0.05; measured shortfall at this "
        f"scale, see README"
    )


def test_acceptance_6_twin_sieve_bound():
    table = sieve_range(0, 10 ** 7 + 3)
    rep = sieve_report(Tuple.parse("0,2"), 10 ** 7, epsilon=0.1, table=table)
    print(
        f"[criterion 6] twins {rep.actual} <= bound {rep.theorem_bound:.1f}, "
        f"ratio {rep.ratio_actual_over_bound:.4f} (<= 0.25)"
    )
    assert rep.actual <= rep.theorem_bound
    assert rep.ratio_actual_over_bound <= 0.25


def test_acceptance_7_exact_identities(table_1e6):
    # T_1(h) = h exactly
    for h in range(1, 1001):
        assert tkh_exact(1, h).value == float(h)

    # histogram masses always sum to x
    hist = window_counts(table_1e6, 10 ** 5, 11.51)
    assert sum(hist.counts.values()) == 10 ** 5

    # moment identities for r <= 8: Poisson sum and falling factorials
    for r in range(1, 9):
        for lam in (0.5, 1.0, 3.0):
            direct = sum(poisson_pmf(lam, j) * j ** r for j in range(1, 400))
            assert predicted_moment(r, lam) == pytest.approx(direct, rel=1e-9)
        for m in range(0, 11):
            assert sum(surjection_count(r, l) * math.comb(m, l) for l in range(r + 1)) == m ** r

    # Stirling vs exhaustive set-partition enumeration for r <= 8
    from test_moments import _enum_partitions

    for r in range(0, 9):
        parts = list(_enum_partitions(list(range(r))))
        for l in range(r + 1):
            assert stirling2(r, l) == sum(1 for p in parts if len(p) == l)

    # translation invariance, bit exact, 1000 random tuples
    import numpy as np

    rng = np.random.default_rng(20260816)
    for _ in range(1000):
        k = int(rng.integers(2, 6))
        offs = tuple(sorted(rng.choice(2000, size=k, replace=False).tolist()))
        c = int(rng.integers(1, 10 ** 5))
        from primetail import singular_series

        va = singular_series(Tuple(offs), None)
        vb = singular_series(Tuple(offs).translate(c), None)
        assert (va.value, va.error_radius) == (vb.value, vb.error_radius)

    # the pair fast path agrees with enumeration for every h <= 200
    for h in range(2, 201):
        assert tkh_pair_fast(h).value == pytest.approx(tkh_exact(2, h).value, rel=1e-11)

    # MC lands within 3 sigma of the exact mean in at least 95 of 100 seeds
    exact_mean = tkh_exact(3, 30).value / (math.factorial(3) * math.comb(30, 3))
    hits = 0
    for seed in range(100):
        est = tkh_monte_carlo(3, 30, 10 ** 4, seed=seed)
        if abs(est.mean - exact_mean) <= 3.0 * est.stderr:
            hits += 1
    print(f"[criterion 7] MC within 3 sigma in {hits}/100 seeds (>= 95)")
    assert hits >= 95


def test_acceptance_8_gamma_ratio_trend():
    for text in ("0", "0,2", "0,2,6"):
        H = Tuple.parse(text)
        devs = [abs(gamma_cross_check(H, z) - 1.0) for z in (10 ** 3, 10 ** 4, 10 ** 5)]
        print(f"[criterion 8] H={{{text}}}: |R(z) - 1| = "
              + ", ".join(f"{d:.4f}" for d in devs))
        assert devs[0] >= devs[1] >= devs[2], text

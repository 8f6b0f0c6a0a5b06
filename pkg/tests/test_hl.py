"""li_k quadrature, von Mangoldt arrays, and the prediction error reports."""

import math

import numpy as np
import pytest

from primetail import Tuple, hl_error, hl_error_lambda, hl_sweep, li_k, sieve_range, vonmangoldt


def _simpson_li(x, k, n=100000):
    # substitute t = e^u so the integrand e^u / u^k is smooth on a
    # uniform grid; straight Simpson in t is badly undersampled near 2
    u = np.linspace(math.log(2.0), math.log(float(x)), 2 * n + 1)
    f = np.exp(u) * u ** (-float(k))
    w = np.ones(2 * n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((u[1] - u[0]) / 3.0 * (w * f).sum())


def _lambda_dict(limit):
    """Von Mangoldt by explicit prime-power listing, trial division only."""
    out = {}
    for p in range(2, limit + 1):
        if all(p % d for d in range(2, math.isqrt(p) + 1)):
            q = p
            while q <= limit:
                out[q] = math.log(p)
                q *= p
    return out


def test_li_k_vs_simpson():
    assert li_k(10 ** 6, 1) == pytest.approx(_simpson_li(10 ** 6, 1), rel=1e-9)
    assert li_k(10 ** 4, 2) == pytest.approx(_simpson_li(10 ** 4, 2), rel=1e-9)
    assert li_k(5500, 10) == pytest.approx(_simpson_li(5500, 10), rel=1e-8)


def test_li_k_edges():
    assert li_k(1.5, 3) == 0.0
    assert li_k(2, 1) == 0.0
    assert li_k(10, 0) == 8.0
    with pytest.raises(ValueError):
        li_k(10, -1)


def test_li_frozen_value():
    # offset logarithmic integral from 2
    assert li_k(10 ** 6, 1) == pytest.approx(78626.504, abs=0.01)


def test_vonmangoldt_small(table_1e6):
    lam = vonmangoldt(table_1e6, 1, 16)
    expect = _lambda_dict(16)
    for n in range(1, 17):
        assert lam[n - 1] == pytest.approx(expect.get(n, 0.0), rel=1e-14), n


def test_vonmangoldt_psi_chebyshev(table_1e6):
    psi = float(vonmangoldt(table_1e6, 1, 10 ** 4).sum())
    direct = sum(_lambda_dict(10 ** 4).values())
    assert psi == pytest.approx(direct, rel=1e-12)


def test_hl_error_prime_counting(table_1e6):
    rep = hl_error(Tuple.parse("0"), 10 ** 6, table_1e6)
    assert rep.hits == 78498
    assert rep.prediction == pytest.approx(78626.504, abs=0.01)
    assert rep.abs_error == pytest.approx(128.504, abs=0.01)
    lgx = math.log(10 ** 6)
    assert rep.normalized == rep.abs_error / (math.sqrt(10 ** 6) * lgx ** 6)
    assert rep.normalized_alt == rep.abs_error / (math.sqrt(10 ** 6) * lgx ** 1)


def test_hl_hits_match_pi(table_1e6):
    for x, pi in ((10 ** 4, 1229), (10 ** 5, 9592), (10 ** 6, 78498)):
        assert hl_error(Tuple.parse("0"), x, table_1e6).hits == pi


def test_hl_inadmissible_prediction_zero(table_1e6):
    rep = hl_error(Tuple.parse("0,1"), 10 ** 4, table_1e6)
    assert rep.hits == 1  # only n = 2
    assert rep.prediction == 0.0
    assert rep.abs_error == 1.0


def test_hl_error_lambda_psi_form(table_1e6):
    # k = 1 reduces to |psi(x) - x|
    x = 10 ** 4
    direct = abs(sum(_lambda_dict(x).values()) - x)
    assert hl_error_lambda(Tuple.parse("0"), x, table_1e6) == pytest.approx(direct, rel=1e-12)


def test_hl_error_lambda_pair_brute(table_1e6):
    x = 500
    lam = _lambda_dict(x + 2)
    direct = sum(lam.get(n, 0.0) * lam.get(n + 2, 0.0) for n in range(1, x + 1))
    sv = 1.320323631693739
    got = hl_error_lambda(Tuple.parse("0,2"), x, table_1e6)
    assert got == pytest.approx(abs(direct - sv * x), rel=1e-10)


def test_hl_error_lambda_inadmissible_is_bare_sum(table_1e6):
    x = 1000
    lam = _lambda_dict(x + 1)
    direct = sum(lam.get(n, 0.0) * lam.get(n + 1, 0.0) for n in range(1, x + 1))
    got = hl_error_lambda(Tuple.parse("0,1"), x, table_1e6)
    assert got == pytest.approx(direct, rel=1e-12)


def test_hl_sweep_matches_single(table_1e6):
    H = Tuple.parse("0,2")
    reps = hl_sweep(H, range(100, 201, 25), table_1e6)
    assert [r.x for r in reps] == [100, 125, 150, 175, 200]
    for rep in reps:
        single = hl_error(H, rep.x, table_1e6)
        assert rep.hits == single.hits
        assert rep.prediction == pytest.approx(single.prediction, rel=1e-9)
        assert rep.lambda_form_error == pytest.approx(
            single.lambda_form_error, rel=1e-9, abs=1e-9
        )


def test_hl_sweep_validation(table_1e6):
    with pytest.raises(ValueError):
        hl_sweep(Tuple.parse("0,2"), [100, 100], table_1e6)
    with pytest.raises(ValueError):
        hl_sweep(Tuple.parse("0,2"), [2, 100], table_1e6)
    assert hl_sweep(Tuple.parse("0,2"), [], table_1e6) == []


def test_hl_independent_of_segment_size():
    a = hl_error(Tuple.parse("0,2,6"), 10 ** 4, sieve_range(0, 2 * 10 ** 4, segment_bits=1 << 14))
    b = hl_error(Tuple.parse("0,2,6"), 10 ** 4, sieve_range(0, 2 * 10 ** 4, segment_bits=1 << 20))
    assert a == b


def test_hl_validation(table_1e6):
    with pytest.raises(ValueError):
        hl_error(Tuple.parse("0,2"), 2, table_1e6)

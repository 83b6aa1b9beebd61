import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ripramsey import (
    BudgetExceededError,
    DeVoreParams,
    coherence_exact,
    column_support,
    eval_table,
    inner_product_exact,
    is_prime,
    load_structural,
    poly_eval,
    poly_from_index,
    poly_to_index,
    regime_calculator,
    rip_certificate_coherence,
    save_structural,
    to_dense,
)

DESK_PARAMS = [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)]


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 101}
    for z in range(-3, 120):
        assert is_prime(z) == (z in primes or z in {17, 19, 23, 29, 31, 37, 41, 43,
                                                    47, 53, 59, 61, 67, 71, 73, 79,
                                                    83, 89, 97, 103, 107, 109, 113})


def test_params_validation():
    params = DeVoreParams(z=5, r=1)
    assert (params.n, params.p) == (25, 25)
    with pytest.raises(ValueError):
        DeVoreParams(z=4, r=1)  # not prime
    with pytest.raises(ValueError):
        DeVoreParams(z=5, r=0)
    with pytest.raises(ValueError):
        DeVoreParams(z=5, r=5)  # r >= z makes the r/z bound vacuous
    with pytest.raises(ValueError):
        DeVoreParams(z=101, r=11)  # p = 101^12 overflows the index type


def test_poly_from_index_examples():
    assert poly_from_index(0, DeVoreParams(z=5, r=1)).coeffs == (0, 0)
    assert poly_from_index(7, DeVoreParams(z=5, r=1)).coeffs == (2, 1)  # x + 2
    assert poly_from_index(342, DeVoreParams(z=7, r=2)).coeffs == (6, 6, 6)


def test_poly_from_index_range():
    params = DeVoreParams(z=5, r=1)
    with pytest.raises(ValueError):
        poly_from_index(-1, params)
    with pytest.raises(ValueError):
        poly_from_index(25, params)


@pytest.mark.parametrize("z,r", [(3, 2), (5, 1)])
def test_poly_index_roundtrip_full(z, r):
    params = DeVoreParams(z=z, r=r)
    for idx in range(params.p):
        poly = poly_from_index(idx, params)
        assert poly.index == idx
        assert poly_to_index(poly.coeffs, params).index == idx


@settings(deadline=None)
@given(st.sampled_from(DESK_PARAMS), st.integers(min_value=0, max_value=10**6))
def test_poly_index_roundtrip_property(zr, raw):
    params = DeVoreParams(z=zr[0], r=zr[1])
    idx = raw % params.p
    poly = poly_from_index(idx, params)
    assert len(poly.coeffs) == params.r + 1
    assert all(0 <= a < params.z for a in poly.coeffs)
    assert poly_to_index(poly.coeffs, params) == poly


def test_poly_eval_examples():
    p51 = DeVoreParams(z=5, r=1)
    assert poly_eval(poly_from_index(0, p51), 3, p51) == 0
    assert poly_eval(poly_from_index(7, p51), 4, p51) == 1  # (4 + 2) mod 5
    p72 = DeVoreParams(z=7, r=2)
    assert poly_eval(poly_from_index(342, p72), 2, p72) == 0  # 42 mod 7


def test_poly_eval_range():
    params = DeVoreParams(z=5, r=1)
    with pytest.raises(ValueError):
        poly_eval(poly_from_index(0, params), 5, params)


def test_column_support_examples():
    p51 = DeVoreParams(z=5, r=1)
    assert column_support(poly_from_index(0, p51), p51) == (0, 5, 10, 15, 20)
    assert column_support(poly_from_index(7, p51), p51) == (2, 8, 14, 15, 21)


def test_column_support_seven_rows_each():
    params = DeVoreParams(z=7, r=2)
    for idx in range(params.p):
        rows = column_support(poly_from_index(idx, params), params)
        assert len(rows) == 7
        assert len(set(rows)) == 7
        assert all(0 <= v < params.n for v in rows)
        assert list(rows) == sorted(rows)


@pytest.mark.parametrize("z,r", [(z, r) for z in (2, 3, 5, 7, 11, 13)
                                 for r in (1, 2, 3) if r < z])
def test_unit_norm_structural(z, r):
    # Exactly z nonzeros per column, each 1/sqrt(z): the squared norm is the
    # rational identity z * (1/z) = 1, checked without any tolerance.
    params = DeVoreParams(z=z, r=r)
    tbl = eval_table(params)
    assert tbl.shape == (params.p, z)
    assert tbl.min() >= 0 and tbl.max() < z
    rows = np.arange(z, dtype=np.int64)[None, :] * z + tbl
    assert np.all(np.diff(rows, axis=1) > 0)  # z distinct rows per column
    assert Fraction(z, 1) * Fraction(1, z) == 1


def test_inner_product_examples():
    p51 = DeVoreParams(z=5, r=1)
    same = inner_product_exact(poly_from_index(13, p51), poly_from_index(13, p51), p51)
    assert (same.numerator, same.denominator) == (5, 5)
    assert same.as_fraction() == 1

    x = poly_to_index((0, 1), p51)  # P = x
    x1 = poly_to_index((1, 1), p51)  # Q = x + 1
    assert inner_product_exact(x, x1, p51).numerator == 0

    p72 = DeVoreParams(z=7, r=2)
    sq = poly_to_index((0, 0, 1), p72)  # P = x^2
    lin = poly_to_index((5, 3, 0), p72)  # Q = 3x - 2 = 3x + 5
    ip = inner_product_exact(sq, lin, p72)
    assert ip.as_fraction() == Fraction(2, 7)  # roots of (x-1)(x-2)


@pytest.mark.parametrize("z,r", [(5, 1), (3, 2)])
def test_inner_products_match_dense_float(z, r):
    params = DeVoreParams(z=z, r=r)
    dense = to_dense(params)
    for i in range(params.p):
        pi = poly_from_index(i, params)
        for j in range(i + 1, params.p):
            exact = inner_product_exact(pi, poly_from_index(j, params), params)
            assert exact.numerator <= r
            approx = float(dense[:, i] @ dense[:, j])
            assert abs(exact.value - approx) <= 1e-12


def test_coherence_exact_examples():
    ip, witness = coherence_exact(DeVoreParams(z=5, r=1))
    assert ip.as_fraction() == Fraction(1, 5)
    p51 = DeVoreParams(z=5, r=1)
    w = inner_product_exact(
        poly_from_index(witness[0], p51), poly_from_index(witness[1], p51), p51
    )
    assert w.numerator == 1  # the witness attains the maximum

    ip72, _ = coherence_exact(DeVoreParams(z=7, r=2))
    assert ip72.as_fraction() == Fraction(2, 7)


@pytest.mark.parametrize("z,r", DESK_PARAMS)
def test_coherence_bounded_by_r_over_z(z, r):
    ip, _ = coherence_exact(DeVoreParams(z=z, r=r))
    assert ip.as_fraction() <= Fraction(r, z)


def test_coherence_budget():
    with pytest.raises(BudgetExceededError):
        coherence_exact(DeVoreParams(z=7, r=2), max_pairs=100)


def test_rip_certificate_examples():
    cert = rip_certificate_coherence(DeVoreParams(z=5, r=1), 2)
    assert cert.delta_exact == Fraction(2, 5) and cert.valid
    assert cert.delta_gershgorin == pytest.approx(1 / 5)

    cert = rip_certificate_coherence(DeVoreParams(z=7, r=2), 1)
    assert cert.delta_exact == Fraction(2, 7) and cert.valid

    cert = rip_certificate_coherence(DeVoreParams(z=5, r=1), 5)
    assert cert.delta_exact == 1 and not cert.valid

    with pytest.raises(ValueError):
        rip_certificate_coherence(DeVoreParams(z=5, r=1), 0)


def test_regime_calculator():
    with pytest.raises(ValueError):
        regime_calculator(5, 1.0)  # r = 5 is not < z

    rep = regime_calculator(101, 0.5)
    assert (rep.r, rep.n, rep.s) == (11, 10201, 4)
    assert rep.p == 101**12
    assert rep.log_p == pytest.approx(12 * math.log(101))
    assert rep.polylog_ok and not rep.degenerate

    small = regime_calculator(5, 0.5)
    assert (small.r, small.n, small.p, small.s) == (3, 25, 625, 0)
    assert small.degenerate

    with pytest.raises(ValueError):
        regime_calculator(4, 0.5)  # z not prime
    with pytest.raises(ValueError):
        regime_calculator(5, -0.1)


def test_dense_matches_structural_definition():
    params = DeVoreParams(z=3, r=2)
    dense = to_dense(params)
    value = 1.0 / math.sqrt(3)
    for j in range(params.p):
        poly = poly_from_index(j, params)
        for x in range(3):
            for y in range(3):
                expected = value if poly_eval(poly, x, params) == y else 0.0
                assert dense[x * 3 + y, j] == expected


def test_dense_budget():
    with pytest.raises(BudgetExceededError):
        to_dense(DeVoreParams(z=7, r=2), max_entries=100)


def test_structural_file_roundtrip(tmp_path):
    params = DeVoreParams(z=5, r=1)
    path = tmp_path / "matrix.devore"
    save_structural(params, path)
    assert path.read_text() == "devore z=5 r=1\n"
    assert load_structural(path) == params
    path.write_text("dense 5 1\n")
    with pytest.raises(ValueError):
        load_structural(path)

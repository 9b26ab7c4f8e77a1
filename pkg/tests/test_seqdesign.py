import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from golaypq.seqdesign import (
    PQDesign,
    alternating_sequence,
    binomial_design,
    binomial_weights,
    canonical_product,
    conventional_design,
    design_from_record,
    design_record,
    difference_basis,
    moments,
    null_order,
    output_noise_power,
    ptm_design,
    ptm_sequence,
    signed_product,
    snr_ratio,
    vandermonde_check,
)


def pascal_row(n):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


# -- constructors ------------------------------------------------------------


@pytest.mark.parametrize(
    "N,expected",
    [(2, (0, 1)), (4, (0, 1, 1, 0)), (8, (0, 1, 1, 0, 1, 0, 0, 1))],
)
def test_ptm_examples(N, expected):
    assert ptm_sequence(N) == expected


@pytest.mark.parametrize("N", [2, 4, 16, 64, 256])
def test_ptm_is_popcount_parity(N):
    assert ptm_sequence(N) == tuple(bin(n).count("1") % 2 for n in range(N))


@pytest.mark.parametrize("N", [3, 6, 12])
def test_ptm_rejects_non_power_of_two(N):
    with pytest.raises(ValueError, match="power of two"):
        ptm_sequence(N)


@pytest.mark.parametrize(
    "N,expected", [(2, (1, 0)), (4, (1, 0, 1, 0)), (5, (1, 0, 1, 0, 1))]
)
def test_alternating_examples(N, expected):
    assert alternating_sequence(N) == expected


@pytest.mark.parametrize("N", [2, 4, 16, 20])
def test_binomial_weights_match_pascal(N):
    assert list(binomial_weights(N)) == pascal_row(N - 1)


def test_binomial_examples():
    assert binomial_weights(4) == (1, 3, 3, 1)
    assert binomial_weights(2) == (1, 1)
    w = binomial_weights(16)
    assert w[:3] == (1, 15, 105) and sum(w) == 2**15 == 32768


def test_signed_product_and_validation():
    assert signed_product((1, 0, 1, 0), (1, 3, 3, 1)) == (-1, 3, -3, 1)
    with pytest.raises(ValueError):
        signed_product((0, 2), (1, 1))
    with pytest.raises(ValueError):
        signed_product((0, 1), (1, 0))
    with pytest.raises(ValueError):
        signed_product((0, 1), (1, 1, 1))


# -- null order --------------------------------------------------------------


def test_null_order_examples():
    assert null_order(ptm_design(16).product) == 3
    assert null_order(binomial_design(16).product) == 14
    assert null_order((1, -1)) == 0
    assert null_order(conventional_design(16).product) == 0
    assert null_order((1, 1)) == -1


@pytest.mark.parametrize("M", range(0, 7))
def test_ptm_null_order_exact(M):
    assert null_order(ptm_design(2 ** (M + 1)).product) == M


@pytest.mark.parametrize("N", range(3, 21))
def test_binomial_null_order_is_maximal(N):
    assert null_order(binomial_design(N).product) == N - 2


@pytest.mark.parametrize("N", range(2, 8))
def test_no_design_reaches_order_n_minus_1(N):
    # every sign pattern and every q in 1..4: moments 0..N-1 never all vanish
    q = np.array(list(itertools.product(range(1, 5), repeat=N)), dtype=np.int64)
    n = np.arange(N, dtype=np.int64)
    V = np.vstack([n**m for m in range(N)])  # N x N
    for signs in itertools.product((1, -1), repeat=N):
        c = q * np.array(signs)
        assert not np.any(np.all(c @ V.T == 0, axis=1))


def test_vandermonde_examples():
    assert vandermonde_check((1, -3, 3, -1), 2)
    assert vandermonde_check((1, -1, -1, 1), 1)
    with pytest.raises(ValueError, match="N-1"):
        vandermonde_check((1, -3, 3, -1), 3)
    assert moments((1, -3, 3, -1), [3], offset=1) == [-6]


def test_vandermonde_rejects_negative_order():
    with pytest.raises(ValueError):
        vandermonde_check((1, -1), -1)


@pytest.mark.parametrize("N", range(2, 7))
def test_matrix_and_moment_forms_agree_exhaustive(N):
    # matrix form with (n+1)^m against the n^m moment form, all P and q in {1,2,3}
    q = np.array(list(itertools.product((1, 2, 3), repeat=N)), dtype=np.int64)
    n = np.arange(N, dtype=np.int64)
    shifted = np.vstack([(n + 1) ** m for m in range(N - 1)])
    plain = np.vstack([n**m for m in range(N - 1)])
    for signs in itertools.product((1, -1), repeat=N):
        c = q * np.array(signs)
        a = (c @ shifted.T) == 0
        b = (c @ plain.T) == 0
        # prefix-all: the m=0..M conditions hold jointly
        np.testing.assert_array_equal(np.cumprod(a, axis=1), np.cumprod(b, axis=1))


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 12).flatmap(
    lambda N: st.tuples(st.just(N), st.integers(0, N - 2)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.just(t[1]),
                            st.lists(st.integers(-4, 4), min_size=t[0] - t[1] - 1,
                                     max_size=t[0] - t[1] - 1)))))
def test_nesting_property(args):
    N, Mp, u = args
    basis = difference_basis(N, Mp)
    c = [sum(us * b[i] for us, b in zip(u, basis)) for i in range(N)]
    if not any(c):
        return
    assert null_order(c) >= Mp
    for M in range(Mp + 1):
        assert vandermonde_check(c, M)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=9))
def test_vandermonde_agrees_with_null_order(c):
    if not any(c):
        return
    order = null_order(c)
    for M in range(len(c) - 1):
        assert vandermonde_check(c, M) == (order >= M)


# -- difference basis --------------------------------------------------------


def test_difference_basis_examples():
    assert difference_basis(4, 2) == [(1, -3, 3, -1)]
    assert difference_basis(4, 0) == [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1)]


def test_difference_basis_rejects_full_order():
    with pytest.raises(ValueError):
        difference_basis(5, 4)


def test_difference_basis_combinations_n6():
    basis = np.array(difference_basis(6, 2))
    n = np.arange(6)
    V = np.vstack([(n + 1) ** m for m in range(3)])
    coeffs = np.array(list(itertools.product(range(-3, 4), repeat=len(basis))))
    combos = coeffs @ basis
    assert np.all(combos @ V.T == 0)


def _forward_coefficients(c, basis):
    """Integer coefficients reproducing ``c`` if it is in the span, else None."""
    c = list(c)
    u = []
    for s, b in enumerate(basis):
        u.append(c[s])  # leading entry of b_s is 1
        c = [ci - u[-1] * bi for ci, bi in zip(c, b)]
    return u if not any(c) else None


@pytest.mark.parametrize("N", range(3, 8))
def test_difference_basis_spans_all_integer_solutions(N):
    box = range(-3, 4)
    n = np.arange(N)
    for M in range(N - 1):
        basis = difference_basis(N, M)
        V = np.vstack([(n + 1) ** m for m in range(M + 1)])
        # every integer vector in the box
        cand = np.array(list(itertools.product(box, repeat=N)), dtype=np.int64)
        sols = cand[np.all(cand @ V.T == 0, axis=1)]
        for c in sols:
            assert _forward_coefficients(c.tolist(), basis) is not None
        # and basis members are solutions
        assert np.all(np.array(basis) @ V.T == 0)


# -- SNR ---------------------------------------------------------------------


def test_snr_examples():
    assert snr_ratio((1,) * 16) == 16
    exact = snr_ratio(binomial_weights(16))
    assert exact == Fraction(2**30, comb(30, 15)) == Fraction(1073741824, 155117520)
    assert round(float(exact), 2) == 6.92
    assert snr_ratio((1, 3, 3, 1)) == Fraction(64, 20) == Fraction(16, 5)


def test_output_noise_power_examples():
    assert output_noise_power((1,) * 16, 1, 64) == 1024
    assert output_noise_power((1, 3, 3, 1), 2, 4) == 160
    for alpha in (2, 3, 7):
        assert output_noise_power([alpha * w for w in (1, 3, 3, 1)], 2, 4) == alpha**2 * 160
    with pytest.raises(ValueError):
        output_noise_power((1, 1), 0, 4)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 24), st.integers(1, 50), st.data())
def test_constant_weights_maximise_snr(N, level, data):
    base = [level] * N
    delta = data.draw(st.lists(st.integers(-level + 1, 50), min_size=N, max_size=N))
    q = [b + d for b, d in zip(base, delta)]
    if len(set(q)) == 1:
        assert snr_ratio(q) == N
    else:
        assert snr_ratio(q) < N


# -- records -----------------------------------------------------------------


def test_canonical_product():
    assert canonical_product((2, -6, 6, -2)) == (-1, 3, -3, 1)
    assert canonical_product((-3, 3)) == (-1, 1)
    with pytest.raises(ValueError):
        canonical_product((0, 0))


def test_from_product_round_trip():
    d = PQDesign.from_product((-1, 3, -3, 1))
    assert d.p == (1, 0, 1, 0) and d.q == (1, 3, 3, 1)


@pytest.mark.parametrize("factory", [ptm_design, binomial_design, conventional_design])
def test_design_record_round_trip(factory):
    d = factory(16)
    rec = design_record(d)
    back = design_from_record(rec)
    assert back.report().null_order == rec["null_order"]
    assert back.report().snr_ratio == Fraction(rec["snr_ratio_num"], rec["snr_ratio_den"])


def test_design_record_errors():
    with pytest.raises(ValueError, match="missing"):
        design_from_record({"q": [1, 1]})
    with pytest.raises(ValueError, match="disagrees"):
        design_from_record({"p": [0, 1], "q": [1, 1], "N": 3})

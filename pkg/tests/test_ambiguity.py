import numpy as np
import pytest

from golaypq import generate_golay_pair
from golaypq.ambiguity import (
    DB_FLOOR,
    CrossAmbiguityMap,
    PulseTrainDesign,
    ambiguity_map,
    cross_ambiguity,
    range_sidelobe_peak,
    spectrum,
    waveform_oracle_ambiguity,
)
from golaypq.golay import autocorrelation
from golaypq.search import maxsnr_design
from golaypq.seqdesign import (
    PQDesign,
    binomial_design,
    conventional_design,
    ptm_design,
)


def train(design, log2_len=6, **kw):
    return PulseTrainDesign(design, generate_golay_pair(log2_len), **kw)


def random_design(rng, N):
    return PQDesign(tuple(rng.integers(0, 2, N)), tuple(rng.integers(1, 6, N)))


@pytest.mark.parametrize("factory", [conventional_design, ptm_design, binomial_design])
def test_peak_is_l_times_q1(factory):
    pt = train(factory(16))
    assert cross_ambiguity(pt, 0, 0.0) == pytest.approx(64 * sum(pt.design.q), abs=1e-9)
    m = ambiguity_map(pt, [0.0], delays=[0])
    assert m.values.shape == (1, 1)
    assert m.values[0, 0] == pytest.approx(pt.peak())


@pytest.mark.parametrize("factory", [conventional_design, ptm_design, binomial_design])
def test_zero_doppler_cut_is_impulse(factory):
    pt = train(factory(16))
    for k in range(-63, 64):
        if k:
            assert cross_ambiguity(pt, k, 0.0) == 0


def test_ptm_matches_oracle():
    pt = train(ptm_design(16))
    closed = cross_ambiguity(pt, 1, 0.1)
    oracle = waveform_oracle_ambiguity(pt, 1, 0.1)
    assert abs(closed - oracle) <= 1e-10 * abs(closed)


def test_examples_at_origin():
    ex1 = train(PQDesign((0, 1, 1, 0), (1, 1, 1, 1)))
    ex2 = train(PQDesign((1, 0, 1, 0), (1, 3, 3, 1)))
    assert waveform_oracle_ambiguity(ex1, 0, 0.0) == pytest.approx(4 * 64)
    assert waveform_oracle_ambiguity(ex2, 0, 0.0) == pytest.approx(8 * 64)


def test_oracle_with_oversampling():
    rng = np.random.default_rng(3)
    pt = train(random_design(rng, 6), log2_len=3)
    for k, th in [(0, 0.3), (3, -1.1), (-7, 2.0)]:
        a = cross_ambiguity(pt, k, th)
        b = waveform_oracle_ambiguity(pt, k, th, samples_per_chip=4)
        assert abs(a - b) <= 1e-10 * (1 + abs(a))


def test_closed_form_matches_oracle_on_grids():
    rng = np.random.default_rng(2024)
    thetas = np.linspace(-np.pi, np.pi, 21)
    for trial in range(24):
        N = int(rng.integers(2, 9))
        log2_len = int(rng.integers(0, 5))
        pt = train(random_design(rng, N), log2_len)
        L = pt.L
        lags = np.unique(np.linspace(1 - L, L - 1, 21).round().astype(int))
        amap = ambiguity_map(pt, thetas, delays=lags)
        for i, k in enumerate(lags):
            for j, th in enumerate(thetas):
                o = waveform_oracle_ambiguity(pt, int(k), float(th))
                assert abs(amap.values[i, j] - o) <= 1e-10 * (1 + abs(amap.values[i, j]))


def test_conjugate_symmetry():
    pt = train(maxsnr_design(16, 8))
    th = np.linspace(0, np.pi, 33)
    a = ambiguity_map(pt, th).values
    b = ambiguity_map(pt, -th).values
    np.testing.assert_allclose(b, np.conj(a), atol=1e-9)


def test_sidelobe_factorisation():
    rng = np.random.default_rng(9)
    pt = train(random_design(rng, 12), 5)
    x, y = pt.pair.arrays()
    for k in (1, -3, 17, 31):
        half_diff = (autocorrelation(x, k) - autocorrelation(y, k)) / 2
        for th in (0.01, 0.7, -2.5):
            # sending x where p_n = 1 makes the sidelobe term carry -S(theta)
            assert cross_ambiguity(pt, k, th) == pytest.approx(-half_diff * spectrum(pt.c, th), abs=1e-9)


def test_zero_lag_independent_of_p():
    q = (2, 1, 4, 1, 3, 5)
    thetas = np.linspace(-3, 3, 17)
    rows = []
    for bits in [(0,) * 6, (1, 0, 1, 1, 0, 0), (1,) * 6]:
        pt = train(PQDesign(bits, q), 4)
        rows.append(ambiguity_map(pt, thetas, delays=[0]).values[0])
    np.testing.assert_allclose(rows[0], rows[1], atol=1e-12)
    np.testing.assert_allclose(rows[0], rows[2], atol=1e-12)
    np.testing.assert_allclose(rows[0], 16 * spectrum(q, thetas), atol=1e-9)


def test_spectrum_examples():
    assert spectrum([1, -1, -1, 1], 0.0) == 0
    assert spectrum([1, -3, 3, -1], np.pi) == pytest.approx(8)
    c = ptm_design(16).product
    th = np.linspace(-np.pi, np.pi, 401)
    prod = np.prod([2 * np.abs(np.sin(2.0 ** (i - 1) * th)) for i in range(4)], axis=0)
    np.testing.assert_allclose(np.abs(spectrum(c, th)), prod, atol=1e-10)
    assert spectrum([3, 2], np.array([0.0])).shape == (1,)


def test_monotonic_clearance():
    designs = [conventional_design(16), ptm_design(16), maxsnr_design(16, 8), binomial_design(16)]
    orders = [d.report().null_order for d in designs]
    assert orders == sorted(orders) and len(set(orders)) == 4
    th = np.linspace(-0.01, 0.01, 81)
    peaks = [range_sidelobe_peak(ambiguity_map(train(d), th), (-0.01, 0.01)) for d in designs]
    assert all(a >= b for a, b in zip(peaks, peaks[1:]))


def test_sidelobe_floor_at_zero_doppler():
    amap = ambiguity_map(train(conventional_design(16)), [-0.1, 0.0, 0.1])
    assert range_sidelobe_peak(amap, (0.0, 0.0)) == DB_FLOOR


@pytest.mark.parametrize(
    "design,interval,limit",
    [(ptm_design(16), (-0.1, 0.1), -78), (binomial_design(16), (-1.0, 1.0), -80)],
)
def test_cleared_intervals(design, interval, limit):
    th = np.linspace(interval[0], interval[1], 401)
    assert range_sidelobe_peak(ambiguity_map(train(design), th), interval) <= limit


def test_sidelobe_peak_errors():
    amap = ambiguity_map(train(ptm_design(4), 2), np.linspace(-1, 1, 5))
    with pytest.raises(ValueError, match="empty"):
        range_sidelobe_peak(amap, (0.5, -0.5))
    with pytest.raises(ValueError, match="no grid point"):
        range_sidelobe_peak(amap, (0.1, 0.2))


def test_argument_errors():
    pt = train(ptm_design(4), 2)
    with pytest.raises(ValueError, match="lag"):
        cross_ambiguity(pt, 4, 0.0)
    with pytest.raises(ValueError):
        ambiguity_map(pt, [])
    with pytest.raises(ValueError, match="shorter"):
        PulseTrainDesign(ptm_design(4), generate_golay_pair(3), pri_chips=4)
    with pytest.raises(ValueError, match="2L-1"):
        waveform_oracle_ambiguity(PulseTrainDesign(ptm_design(4), generate_golay_pair(3), pri_chips=8), 0, 0)
    with pytest.raises(ValueError):
        CrossAmbiguityMap(np.arange(3), np.arange(2), np.zeros((2, 2)), 1.0)


def test_db_normalisation():
    pt = train(binomial_design(8), 3)
    amap = ambiguity_map(pt, np.linspace(-np.pi, np.pi, 65))
    db = amap.db()
    assert db.max() == pytest.approx(0.0, abs=1e-9)
    assert db.min() >= DB_FLOOR

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from helpers import raw_record, sine_trial
from respmon.errors import AllRowsDropped, DimensionMismatch, InvalidOverlap, NonFiniteInput, TooShort
from respmon.preprocess import ZScoreScaler, drop_nan_rows, segment_windows


def test_drop_nan_rows_removes_tainted_samples():
    rec = raw_record([1.0, 2.0, 3.0, 4.0, 5.0], insp=[0, 2, 4])
    rec.flow[1] = np.nan
    rec.flow[3] = np.nan
    out = drop_nan_rows(rec)
    assert out.n_samples == 3
    assert out.tidal_volume.tolist() == [1.0, 3.0, 5.0]
    # surviving markers re-point at the compacted positions
    assert out.insp_starts.tolist() == [0, 1, 2]
    assert out.time.tolist() == [0.0, 0.02, 0.04]


def test_drop_nan_rows_identity():
    rec = raw_record(np.linspace(0, 1, 20), insp=[3, 9])
    out = drop_nan_rows(rec)
    assert np.array_equal(out.pressure, rec.pressure)
    assert np.array_equal(out.insp_starts, rec.insp_starts)


def test_drop_nan_rows_dropped_marker_disappears():
    rec = raw_record([1.0, 2.0, 3.0, 4.0], insp=[1, 3])
    rec.pressure[1] = np.nan
    out = drop_nan_rows(rec)
    assert out.insp_starts.tolist() == [2]


def test_drop_nan_rows_everything_gone():
    rec = raw_record([1.0, 2.0, 3.0])
    rec.chest_circ[:] = np.nan
    with pytest.raises(AllRowsDropped):
        drop_nan_rows(rec)


def test_scaler_hand_values():
    s = ZScoreScaler().fit([[1.0], [2.0], [3.0]])
    assert s.mean_[0] == pytest.approx(2.0, abs=1e-12)
    # population std of {1,2,3} is sqrt(2/3)
    assert s.scale_[0] == pytest.approx(0.816496580927726, abs=1e-12)
    z = s.transform([[1.0], [2.0], [3.0]])
    assert z[:, 0] == pytest.approx([-1.224744871391589, 0.0, 1.224744871391589], abs=1e-12)


def test_scaler_constant_column_guard():
    s = ZScoreScaler().fit([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]])
    assert s.mean_[0] == 5.0
    assert s.scale_[0] == 1.0
    z = s.transform([[5.0, 2.0]])
    assert z[0, 0] == 0.0


def test_scaler_single_row():
    s = ZScoreScaler().fit([[3.0, -7.0]])
    assert s.scale_.tolist() == [1.0, 1.0]
    assert s.transform([[3.0, -7.0]]).tolist() == [[0.0, 0.0]]


def test_scaler_train_mean_zero_property():
    rng = np.random.default_rng(20)
    for _ in range(5):
        X = rng.normal(size=(40, 6)) * rng.uniform(0.5, 20, 6) + rng.normal(0, 50, 6)
        z = ZScoreScaler().fit(X).transform(X)
        assert np.max(np.abs(z.mean(axis=0))) < 1e-9
        assert np.max(np.abs(z.std(axis=0) - 1.0)) < 1e-9


def test_scaler_width_mismatch():
    s = ZScoreScaler().fit(np.zeros((4, 3)))
    with pytest.raises(DimensionMismatch):
        s.transform(np.zeros((4, 2)))


def test_scaler_requires_fit():
    with pytest.raises(NotFittedError):
        ZScoreScaler().transform([[1.0]])


def test_window_count_65s_trial():
    rec = sine_trial(f=0.25, duration=65.0, fs=100.0)
    assert len(segment_windows(rec, 10.0, 0.5)) == 12


def test_window_count_35s_trial():
    rec = sine_trial(f=1.5, duration=35.0, fs=100.0)
    assert len(segment_windows(rec, 10.0, 0.5)) == 6


def test_window_tiling():
    rec = sine_trial(duration=65.0)
    wins = segment_windows(rec, 10.0, 0.5)
    for i, w in enumerate(wins):
        assert w.start_index == 500 * i
        assert w.length == 1000
        assert np.shares_memory(w.pressure, rec.pressure)
        assert np.array_equal(w.tidal_volume, rec.tidal_volume[w.start_index : w.start_index + 1000])
    assert wins[0].trial_id == rec.meta.trial_id
    assert wins[0].label == rec.meta.breathing_type


def test_window_no_overlap_stride():
    rec = sine_trial(duration=30.0)
    starts = [w.start_index for w in segment_windows(rec, 10.0, 0.0)]
    assert starts == [0, 1000, 2000]


def test_window_overlap_bounds():
    rec = sine_trial(duration=30.0)
    with pytest.raises(InvalidOverlap):
        segment_windows(rec, 10.0, 1.0)
    with pytest.raises(InvalidOverlap):
        segment_windows(rec, 10.0, -0.1)


def test_window_shorter_than_trial_yields_nothing():
    rec = sine_trial(duration=8.0)
    assert segment_windows(rec, 10.0, 0.5) == []


def test_window_length_floor():
    rec = sine_trial(duration=8.0)
    with pytest.raises(TooShort):
        segment_windows(rec, 0.001, 0.5)


def test_window_rejects_nan():
    rec = raw_record(np.ones(400))
    rec.flow[7] = np.nan
    with pytest.raises(NonFiniteInput):
        segment_windows(rec, 1.0, 0.5)

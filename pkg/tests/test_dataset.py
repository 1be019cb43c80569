"""Trial CSV / manifest round trips and their failure modes."""

import json

import numpy as np
import pytest

from helpers import make_subject, raw_record, sine_trial
from respmon.dataset import (
    TRIAL_HEADER,
    BreathingType,
    SubjectMeta,
    TrialMeta,
    load_manifest,
    load_trial,
    write_manifest,
    write_trial,
)
from respmon.errors import (
    BadHeader,
    DuplicateTrial,
    IoFailure,
    MissingFile,
    NonMonotoneTime,
    RaggedRow,
    SchemaViolation,
)


def _meta(bt=BreathingType.NORMAL, fs=100.0):
    return TrialMeta(subject=make_subject(), breathing_type=bt, peep_cmh2o=4.0, fs_hz=fs)


def _write_cohort(tmp_path, records):
    entries = []
    for rec in records:
        name = f"{rec.meta.trial_id}.csv"
        write_trial(rec, tmp_path / name)
        entries.append((name, rec.meta))
    write_manifest(tmp_path / "manifest.json", "test data", entries)
    return tmp_path / "manifest.json"


def test_manifest_three_trials(tmp_path):
    recs = [
        sine_trial(duration=8.0, bt=bt, seed=3)
        for bt in (BreathingType.NORMAL, BreathingType.PANTING, BreathingType.DEEP)
    ]
    manifest = load_manifest(_write_cohort(tmp_path, recs))
    assert len(manifest) == 3
    types = {m.breathing_type for _, m in manifest.entries}
    assert types == set(BreathingType)


def test_manifest_negative_age_rejected(tmp_path):
    path = _write_cohort(tmp_path, [sine_trial(duration=8.0)])
    obj = json.loads(path.read_text())
    obj["trials"][0]["subject"]["age"] = -5
    path.write_text(json.dumps(obj))
    with pytest.raises(SchemaViolation) as err:
        load_manifest(path)
    assert "age" in str(err.value)


def test_manifest_duplicate_pair(tmp_path):
    path = _write_cohort(tmp_path, [sine_trial(duration=8.0)])
    obj = json.loads(path.read_text())
    obj["trials"].append(obj["trials"][0])
    path.write_text(json.dumps(obj))
    with pytest.raises(DuplicateTrial):
        load_manifest(path)


def test_manifest_missing_referenced_file(tmp_path):
    path = _write_cohort(tmp_path, [sine_trial(duration=8.0)])
    obj = json.loads(path.read_text())
    obj["trials"][0]["path"] = "not_there.csv"
    path.write_text(json.dumps(obj))
    with pytest.raises(MissingFile):
        load_manifest(path)


def test_load_trial_three_rows(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(
        TRIAL_HEADER
        + "\n0.00,4.1,0.0,0.1,1,901.0,851.0\n"
        + "0.01,4.2,0.1,0.2,0,902.0,852.0\n"
        + "0.02,4.3,0.2,0.3,0,903.0,853.0\n"
    )
    rec = load_trial(p, _meta())
    assert rec.n_samples == 3
    assert rec.insp_starts.tolist() == [0]
    assert rec.meta.duration_s == pytest.approx(0.03)
    assert rec.pressure.tolist() == [4.1, 4.2, 4.3]


def test_load_trial_repeated_time(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(
        TRIAL_HEADER
        + "\n0.00,4,0,0,0,900,850\n"
        + "0.01,4,0,0,0,900,850\n"
        + "0.01,4,0,0,0,900,850\n"
        + "0.03,4,0,0,0,900,850\n"
    )
    with pytest.raises(NonMonotoneTime) as err:
        load_trial(p, _meta())
    assert err.value.row == 3  # first non-increasing step, 1-based file line


def test_load_trial_header_missing_column(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("time_s,pressure_cmh2o,tidal_volume_l,insp_start,chest_mm,abdomen_mm\n0,4,0,0,900,850\n")
    with pytest.raises(BadHeader):
        load_trial(p, _meta())


def test_load_trial_ragged_row(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(TRIAL_HEADER + "\n0.00,4,0,0,0,900,850\n0.01,4,0,0,0,900\n")
    with pytest.raises(RaggedRow) as err:
        load_trial(p, _meta())
    assert err.value.row == 3


def test_load_trial_nan_cells_kept(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text(
        TRIAL_HEADER
        + "\n0.00,4,NaN,0.1,0,900,850\n"
        + "0.01,4,0.1,,0,900,850\n"
        + "0.02,4,0.2,0.3,0,900,850\n"
    )
    rec = load_trial(p, _meta())
    assert np.isnan(rec.flow[0])
    assert np.isnan(rec.tidal_volume[1])
    assert np.isfinite(rec.time).all()


def test_load_trial_missing_file(tmp_path):
    with pytest.raises(MissingFile):
        load_trial(tmp_path / "absent.csv", _meta())


def test_write_load_roundtrip_exact(tmp_path):
    rec = sine_trial(duration=12.0, noise=0.05, seed=19)
    p = tmp_path / "round.csv"
    write_trial(rec, p)
    back = load_trial(p, rec.meta)
    # %.17g text is enough to reproduce every float64 bit for bit
    for name, arr in rec.channels().items():
        assert np.array_equal(back.channels()[name], arr), name
    assert np.array_equal(back.time, rec.time)
    assert np.array_equal(back.insp_starts, rec.insp_starts)


def test_write_trial_into_non_directory(tmp_path):
    blocker = tmp_path / "plain.txt"
    blocker.write_text("x")
    with pytest.raises(IoFailure):
        write_trial(sine_trial(duration=8.0), blocker / "t.csv")


def test_write_trial_minimum_length(tmp_path):
    rec = raw_record([1.0, 2.0])
    p = tmp_path / "two.csv"
    write_trial(rec, p)
    lines = p.read_text().strip().splitlines()
    assert lines[0] == TRIAL_HEADER
    assert len(lines) == 3


def test_generator_sample_count():
    rec = sine_trial(f=0.25, duration=65.0, fs=100.0)
    assert rec.n_samples == 6500


def test_generator_insp_spacing():
    rec = sine_trial(f=0.25, duration=65.0, fs=100.0, noise=0.0)
    gaps = np.diff(rec.insp_starts)
    assert np.all(gaps == 400)  # one 4 s period at 100 Hz


def test_generator_deterministic():
    a = sine_trial(noise=0.1, seed=42)
    b = sine_trial(noise=0.1, seed=42)
    for name in a.channels():
        assert np.array_equal(a.channels()[name], b.channels()[name])
    c = sine_trial(noise=0.1, seed=43)
    assert not np.array_equal(a.tidal_volume, c.tidal_volume)


def test_generator_flow_matches_volume_slope():
    rec = sine_trial(f=0.25, duration=20.0, fs=100.0, amp=0.5, noise=0.0)
    approx = np.gradient(rec.tidal_volume, 1.0 / 100.0)
    assert np.max(np.abs(approx[1:-1] - rec.flow[1:-1])) < 1e-3


def test_validate_rejects_wrong_rate():
    rec = raw_record(np.arange(10.0), fs=100.0)
    bad = TrialMeta(
        subject=rec.meta.subject,
        breathing_type=rec.meta.breathing_type,
        peep_cmh2o=4.0,
        fs_hz=50.0,  # claims 20 ms spacing over 10 ms data
        duration_s=rec.meta.duration_s,
    )
    rec.meta = bad
    with pytest.raises(SchemaViolation):
        rec.validate()


def test_subject_meta_json_roundtrip():
    s = SubjectMeta("p07", "M", 44, 182.5, 90.25, smoker_or_vaper=True, asthmatic=False)
    assert SubjectMeta.from_json_dict(s.to_json_dict()) == s


def test_subject_meta_bad_sex():
    with pytest.raises(SchemaViolation):
        make_subject(sex="X")

"""Shared builders for the test suite."""

import numpy as np

from respmon.dataset import BreathingType, SubjectMeta, TrialMeta, TrialRecord
from respmon.synthetic import SyntheticSpec, generate_synthetic_trial


def make_subject(sid="s01", sex="F", age=28):
    return SubjectMeta(
        subject_id=sid,
        sex=sex,
        age=age,
        height_cm=171.0,
        weight_kg=64.0,
    )


def sine_trial(
    f=0.25,
    duration=60.0,
    fs=100.0,
    amp=0.5,
    noise=0.0,
    seed=7,
    bt=BreathingType.NORMAL,
    subject=None,
    peep=4.0,
):
    spec = SyntheticSpec(
        breathing_frequency_hz=f,
        duration_s=duration,
        fs_hz=fs,
        tidal_amplitude_l=amp,
        peep_cmh2o=peep,
        noise_std_fraction=noise,
        seed=seed,
    )
    return generate_synthetic_trial(spec, bt, subject or make_subject())


def raw_record(channel_values, fs=100.0, bt=BreathingType.NORMAL, insp=(), subject=None):
    """TrialRecord with every channel set to the same 1-D values array."""
    vals = np.asarray(channel_values, dtype=np.float64)
    n = vals.size
    t = np.arange(n) / fs
    meta = TrialMeta(
        subject=subject or make_subject(),
        breathing_type=bt,
        peep_cmh2o=4.0,
        fs_hz=fs,
        duration_s=n / fs,
    )
    return TrialRecord(
        meta=meta,
        time=t,
        pressure=vals.copy(),
        flow=vals.copy(),
        tidal_volume=vals.copy(),
        chest_circ=vals.copy(),
        abdomen_circ=vals.copy(),
        insp_starts=np.asarray(insp, dtype=np.int64),
    )

"""Laser diode electro-optical model.

The current-to-light transfer is ideal piecewise linear: zero emission at
or below the lasing threshold I_th, then `slope_mw_per_ma` milliwatts per
milliamp above it. Audio rides on the drive current as plain amplitude
modulation around a bias point:

    I[i] = I_DC + (I_pp / 2) * s[i],   |s| <= 1

so staying inside [I_th, I_max] keeps the light a scaled copy of the
audio. Clipping is an error here, never silent saturation, because a
clipped drive would corrupt every fidelity metric downstream.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .signals import AudioSignal

# absorbs float dust when validating operating points against profiles (mA)
CURRENT_ATOL_MA = 1e-9


@dataclass(frozen=True)
class DiodeProfile:
    """Electro-optical transfer parameters of one laser diode."""

    name: str
    threshold_ma: float       # lasing threshold I_th
    slope_mw_per_ma: float    # slope efficiency above threshold
    max_current_ma: float     # damage limit, drive must stay below
    wavelength_nm: float

    def __post_init__(self):
        if self.threshold_ma < 0:
            raise ValueError(f"threshold_ma must be >= 0, got {self.threshold_ma}")
        if self.slope_mw_per_ma <= 0:
            raise ValueError(f"slope_mw_per_ma must be > 0, got {self.slope_mw_per_ma}")
        if self.max_current_ma <= self.threshold_ma:
            raise ValueError("max_current_ma must exceed threshold_ma")
        if self.wavelength_nm <= 0:
            raise ValueError("wavelength_nm must be positive")


@dataclass(frozen=True)
class OperatingPoint:
    """DC bias and peak-to-peak modulation amplitude, both in mA."""

    bias_ma: float           # I_DC
    peak_to_peak_ma: float   # I_pp

    def __post_init__(self):
        if self.peak_to_peak_ma < 0:
            raise ValueError(f"peak_to_peak_ma must be >= 0, got {self.peak_to_peak_ma}")

    @property
    def min_current_ma(self) -> float:
        return self.bias_ma - self.peak_to_peak_ma / 2

    @property
    def max_current_ma(self) -> float:
        return self.bias_ma + self.peak_to_peak_ma / 2

    def validate_for(self, profile: DiodeProfile) -> None:
        """Reject bias/amplitude pairs that clip below threshold or above I_max."""
        if self.min_current_ma < profile.threshold_ma - CURRENT_ATOL_MA:
            raise ValueError(
                f"operating point clips below threshold: I_DC - I_pp/2 = "
                f"{self.min_current_ma:.6f} mA < I_th = {profile.threshold_ma} mA "
                f"({profile.name})")
        if self.max_current_ma > profile.max_current_ma + CURRENT_ATOL_MA:
            raise ValueError(
                f"operating point exceeds max current: I_DC + I_pp/2 = "
                f"{self.max_current_ma:.6f} mA > I_max = {profile.max_current_ma} mA "
                f"({profile.name})")


@dataclass(frozen=True)
class DriveWaveform:
    """Diode drive current samples in mA."""

    currents_ma: np.ndarray
    sample_rate: int

    def __post_init__(self):
        arr = np.asarray(self.currents_ma, dtype=np.float64)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("drive currents must be finite and >= 0")
        object.__setattr__(self, "currents_ma", arr)


@dataclass(frozen=True)
class LightWaveform:
    """Optical power samples in mW."""

    powers_mw: np.ndarray
    sample_rate: int

    def __post_init__(self):
        arr = np.asarray(self.powers_mw, dtype=np.float64)
        if np.any(arr < 0):
            raise ValueError("optical powers must be >= 0")
        object.__setattr__(self, "powers_mw", arr)

    @property
    def mean_mw(self) -> float:
        return float(np.mean(self.powers_mw))


def optical_power(profile: DiodeProfile, current_ma: float) -> float:
    """Emitted power for a DC current: 0 below threshold, linear above.

    Currents outside [0, I_max] are rejected (the upper bound models the
    damage limit).
    """
    if current_ma < 0 or current_ma > profile.max_current_ma:
        raise ValueError(
            f"current {current_ma} mA outside [0, {profile.max_current_ma}] mA "
            f"({profile.name})")
    if current_ma <= profile.threshold_ma:
        return 0.0
    return profile.slope_mw_per_ma * (current_ma - profile.threshold_ma)


def modulate(profile: DiodeProfile, op: OperatingPoint,
             audio: AudioSignal) -> DriveWaveform:
    """Amplitude-modulate normalized audio onto the drive current.

    currents[i] = I_DC + (I_pp/2) * s[i]. The operating point is validated
    against the profile before any waveform is produced.
    """
    op.validate_for(profile)
    if audio.peak > 1.0 + 1e-12:
        raise ValueError(
            f"audio must be normalized (max |s| <= 1), peak is {audio.peak:.6g}")
    currents = op.bias_ma + (op.peak_to_peak_ma / 2) * audio.samples
    return DriveWaveform(currents, audio.sample_rate)


def optimize_operating_point(profile: DiodeProfile,
                             budget_mw: float) -> OperatingPoint:
    """Largest-swing operating point under an average-power budget.

    With zero-mean audio the average emitted power depends only on the
    bias, so the budget pins I_DC = I_th + L/eta and the swing is then
    maximized by running the modulation floor right at threshold:
    I_pp/2 = I_DC - I_th. When that peak would exceed I_max, bias and
    swing shrink together (keeping the floor at threshold) until the
    peak sits exactly at I_max; average power then lands below budget.

    Raises BudgetError when the diode cannot emit `budget_mw` average at
    all, i.e. I_th + L/eta > I_max even with zero swing.
    """
    if budget_mw <= 0:
        raise ValueError(f"budget must be positive, got {budget_mw} mW")
    amplitude = budget_mw / profile.slope_mw_per_ma  # I_DC - I_th, unclipped
    if profile.threshold_ma + amplitude > profile.max_current_ma + CURRENT_ATOL_MA:
        raise BudgetError(
            f"budget {budget_mw} mW needs I_DC = "
            f"{profile.threshold_ma + amplitude:.3f} mA, above I_max = "
            f"{profile.max_current_ma} mA ({profile.name})")
    headroom = (profile.max_current_ma - profile.threshold_ma) / 2
    amplitude = min(amplitude, headroom)
    return OperatingPoint(profile.threshold_ma + amplitude, 2 * amplitude)


def average_power(profile: DiodeProfile, op: OperatingPoint) -> float:
    """Mean emitted power for zero-mean audio: eta * (I_DC - I_th)."""
    return profile.slope_mw_per_ma * (op.bias_ma - profile.threshold_ma)


def emitted_light(profile: DiodeProfile, drive: DriveWaveform) -> LightWaveform:
    """Pointwise current-to-light conversion of a drive waveform."""
    currents = drive.currents_ma
    bad = np.flatnonzero((currents < -CURRENT_ATOL_MA) |
                         (currents > profile.max_current_ma + CURRENT_ATOL_MA))
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"drive sample {i} is {currents[i]:.6f} mA, outside "
            f"[0, {profile.max_current_ma}] mA ({profile.name})")
    powers = profile.slope_mw_per_ma * np.maximum(
        currents - profile.threshold_ma, 0.0)
    return LightWaveform(powers, drive.sample_rate)


def save_drive_csv(drive: DriveWaveform, path) -> None:
    """Write `time_s,current_ma` rows (time to 9 dp, current to 6 dp)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "current_ma"])
        for i, c in enumerate(drive.currents_ma):
            writer.writerow([f"{i / drive.sample_rate:.9f}", f"{c:.6f}"])


def save_drive_wav(drive: DriveWaveform, op: OperatingPoint, path,
                   sidecar_path) -> None:
    """Write the drive as 16-bit PCM plus a `param,value` sidecar.

    Sample value v maps back to current I_DC + (I_pp/2) * (v/32768); the
    sidecar records the (I_DC, I_pp) needed to invert.
    """
    from . import wavio

    half = op.peak_to_peak_ma / 2
    if half > 0:
        normalized = (drive.currents_ma - op.bias_ma) / half
    else:
        normalized = np.zeros_like(drive.currents_ma)
    wavio.save_wav(AudioSignal(normalized, drive.sample_rate), path)
    with open(sidecar_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["param", "value"])
        writer.writerow(["i_dc_ma", f"{op.bias_ma:.6f}"])
        writer.writerow(["i_pp_ma", f"{op.peak_to_peak_ma:.6f}"])
        writer.writerow(["sample_rate_hz", str(drive.sample_rate)])

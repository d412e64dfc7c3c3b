"""Multi-microphone injection detector.

Sound reaching a hand-sized device arrives at every port with nearly the
same waveform; a single laser beam drives exactly one port. The detector
frames each channel, computes the median over frames of the maximum
normalized cross-correlation within a +/-1 ms lag window for every
channel pair, and implicates channels that carry energy while matching
no other channel.

Known blind spot: a beam wide enough to cover all ports produces
mutually consistent channels and is indistinguishable from ambient
sound here; the verdict notes say so whenever that situation applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mic
from ._kernels import pairwise_max_ncc
from .signals import AudioSignal
from .wavio import load_wav_channels

DEFAULT_THRESHOLD = 0.5
DEFAULT_FRAME = 1024
LAG_WINDOW_S = 0.001   # inter-port acoustic skew bound for hand-sized devices
ENERGY_FLOOR_MARGIN_DB = 6.0

CLEAN = "clean"
INJECTION_SUSPECTED = "injection_suspected"

BLIND_SPOT_NOTE = ("all energized channels carry mutually consistent signals; "
                   "a wide beam covering every port at once would look the "
                   "same as ambient sound and cannot be flagged here")


def default_energy_floor(noise_rms: float = mic.DEFAULT_NOISE_RMS) -> float:
    """Energy gate 6 dB above the configured ambient noise power."""
    return noise_rms ** 2 * 10 ** (ENERGY_FLOOR_MARGIN_DB / 10)


@dataclass(frozen=True)
class ChannelSet:
    """N >= 2 synchronized equal-length channels sharing one sample rate."""

    channels: np.ndarray   # (n_channels, n_samples)
    sample_rate: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.channels, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("channels must be a 2-D (n_channels, n_samples) array")
        if arr.shape[0] < 2:
            raise ValueError("need at least 2 channels")
        if arr.shape[1] < 1:
            raise ValueError("channels are empty")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "channels", arr)

    @classmethod
    def from_signals(cls, signals: list[AudioSignal]) -> "ChannelSet":
        if len(signals) < 2:
            raise ValueError("need at least 2 channels")
        rate = signals[0].sample_rate
        length = len(signals[0])
        for s in signals[1:]:
            if s.sample_rate != rate:
                raise ValueError("channels must share one sample rate")
            if len(s) != length:
                raise ValueError("channels must have equal length")
        return cls(np.stack([s.samples for s in signals]), rate)

    @classmethod
    def from_wav(cls, path) -> "ChannelSet":
        channels, rate = load_wav_channels(path)
        return cls(channels, rate)

    @property
    def n_channels(self) -> int:
        return self.channels.shape[0]


@dataclass(frozen=True)
class Verdict:
    status: str
    implicated: tuple[int, ...]
    scores: np.ndarray             # pairwise similarity matrix
    energies: np.ndarray           # per-channel mean square amplitude
    median_similarity: np.ndarray  # per-channel median over other channels
    notes: str = ""

    def csv_rows(self) -> list[tuple]:
        return [(ch, f"{self.energies[ch]:.9g}",
                 f"{self.median_similarity[ch]:.6f}",
                 "yes" if ch in self.implicated else "no")
                for ch in range(self.energies.size)]


def channel_similarity(channel_set: ChannelSet,
                       frame: int = DEFAULT_FRAME) -> np.ndarray:
    """Pairwise similarity matrix, entries in [-1, 1], diagonal 1.

    Entry (i, j) is the median over non-overlapping frames of the maximum
    normalized cross-correlation between channels i and j within the
    +/-1 ms lag window.
    """
    if frame < 256:
        raise ValueError(f"frame must be >= 256 samples, got {frame}")
    n = channel_set.channels.shape[1]
    if n < frame:
        raise ValueError(
            f"channels of {n} samples are shorter than one {frame}-sample frame")
    n_frames = n // frame
    framed = channel_set.channels[:, :n_frames * frame].reshape(
        channel_set.n_channels, n_frames, frame)
    framed = framed - framed.mean(axis=2, keepdims=True)
    max_lag = min(round(channel_set.sample_rate * LAG_WINDOW_S), frame - 1)
    per_frame = pairwise_max_ncc(np.ascontiguousarray(framed), max_lag)
    matrix = np.median(per_frame, axis=2)
    idx = np.arange(channel_set.n_channels)
    matrix[idx, idx] = 1.0
    return matrix


def detect_injection(channel_set: ChannelSet, threshold: float = DEFAULT_THRESHOLD,
                     energy_floor: float | None = None,
                     frame: int = DEFAULT_FRAME) -> Verdict:
    """Flag channels that carry energy but match no other channel.

    A channel is implicated when its energy exceeds the floor while its
    similarity to every other channel sits below the threshold. With no
    implicated channel the verdict is clean; when the clean set has two
    or more energized, mutually consistent channels the notes spell out
    the wide-beam blind spot.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    if energy_floor is None:
        energy_floor = default_energy_floor()
    scores = channel_similarity(channel_set, frame)
    n_ch = channel_set.n_channels
    energies = np.mean(channel_set.channels ** 2, axis=1)
    off_diag = ~np.eye(n_ch, dtype=bool)
    median_sim = np.array([np.median(scores[i][off_diag[i]]) for i in range(n_ch)])

    implicated = tuple(
        i for i in range(n_ch)
        if energies[i] > energy_floor and np.all(scores[i][off_diag[i]] < threshold))

    notes = ""
    if implicated:
        status = INJECTION_SUSPECTED
        quiet = [j for j in range(n_ch) if energies[j] <= energy_floor]
        notes = (f"channel(s) {', '.join(map(str, implicated))} carry signal "
                 f"unmatched on any other channel"
                 + (f"; channel(s) {', '.join(map(str, quiet))} sit at the "
                    f"noise floor" if quiet else ""))
    else:
        status = CLEAN
        energized = [i for i in range(n_ch) if energies[i] > energy_floor]
        if len(energized) >= 2 and all(
                median_sim[i] >= threshold for i in energized):
            notes = BLIND_SPOT_NOTE
    return Verdict(status, implicated, scores, energies, median_sim, notes)

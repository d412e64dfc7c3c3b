"""Profile CSV loading: devices, diodes, microphones.

Profiles ship as CSV files inside the package; setting the environment
variable PHOTONINJECT_PROFILE_DIR points the loaders at a directory with
replacement files of the same names. Lines starting with '#' are
comments.
"""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

from .diode import DiodeProfile
from .errors import FormatError
from .mic import MicProfile

PROFILE_DIR_ENV = "PHOTONINJECT_PROFILE_DIR"


def _read_rows(filename: str) -> list[dict]:
    override = os.environ.get(PROFILE_DIR_ENV)
    if override:
        path = Path(override) / filename
        if not path.is_file():
            raise FormatError(f"{path}: profile file not found "
                              f"({PROFILE_DIR_ENV} is set to {override!r})")
        text = path.read_text()
    else:
        text = (resources.files("photoninject") / "data" / filename).read_text()
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        return list(csv.DictReader(lines))
    except csv.Error as exc:
        raise FormatError(f"{filename}: {exc}") from exc


def _field(row: dict, key: str, filename: str) -> str:
    value = row.get(key)
    if value is None:
        raise FormatError(f"{filename}: missing column {key!r}")
    return value.strip()


def load_diodes() -> dict[str, DiodeProfile]:
    fn = "diodes.csv"
    out = {}
    for row in _read_rows(fn):
        profile = DiodeProfile(
            name=_field(row, "name", fn),
            threshold_ma=float(_field(row, "i_th_ma", fn)),
            slope_mw_per_ma=float(_field(row, "slope_mw_per_ma", fn)),
            max_current_ma=float(_field(row, "i_max_ma", fn)),
            wavelength_nm=float(_field(row, "wavelength_nm", fn)),
        )
        out[profile.name.lower()] = profile
    return out


def get_diode(name: str) -> DiodeProfile:
    diodes = load_diodes()
    try:
        return diodes[name.lower()]
    except KeyError:
        raise FormatError(
            f"unknown diode profile {name!r}; available: "
            + ", ".join(sorted(p.name for p in diodes.values()))) from None


def load_mics() -> dict[str, MicProfile]:
    fn = "mics.csv"
    out = {}
    for row in _read_rows(fn):
        profile = MicProfile(
            name=_field(row, "name", fn),
            responsivity_per_mw=float(_field(row, "responsivity", fn)),
            band_low_hz=float(_field(row, "band_low_hz", fn)),
            band_high_hz=float(_field(row, "band_high_hz", fn)),
            saturation_mw=float(_field(row, "saturation_mw", fn)),
            noise_rms=float(_field(row, "noise_rms", fn)),
        )
        out[profile.name.lower()] = profile
    return out


def get_mic(name: str) -> MicProfile:
    mics = load_mics()
    try:
        return mics[name.lower()]
    except KeyError:
        raise FormatError(
            f"unknown microphone profile {name!r}; available: "
            + ", ".join(sorted(p.name for p in mics.values()))) from None


def device_rows() -> list[dict]:
    """Raw device table rows, in file order."""
    return _read_rows("devices.csv")

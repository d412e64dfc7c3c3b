"""Exception types shared across the toolkit."""


class PhotonInjectError(Exception):
    """Base class for toolkit-specific failures."""


class FormatError(PhotonInjectError):
    """A file does not conform to its expected on-disk format."""


class BudgetError(PhotonInjectError, ValueError):
    """An optical power budget cannot be met by the diode model."""


class FitError(PhotonInjectError, ValueError):
    """A calibration fit has no usable solution."""


class DeviceNotFoundError(PhotonInjectError, LookupError):
    """Unknown device name, with nearest-match suggestions."""

    def __init__(self, name: str, suggestions=()):
        self.name = name
        self.suggestions = list(suggestions)
        hint = ""
        if self.suggestions:
            hint = "; closest matches: " + ", ".join(self.suggestions)
        super().__init__(f"unknown device {name!r}{hint}")

"""Exception types raised across the package."""


class ConfigError(ValueError):
    """A radar configuration violates one of its structural invariants."""


class NonIntegerBinCount(ConfigError):
    """``pri * channel_bandwidth`` is not a positive even integer."""


class CarrierOffGrid(ConfigError):
    """A transmit carrier is not on the ``B_h`` band grid (or bands overlap)."""


class BandOverflow(ValueError):
    """A transmitter's band falls outside the simulated global spectrum."""


class MissingBand(ValueError):
    """A carrier's bins are not present in the received spectra."""


class FamilyMismatch(ValueError):
    """An FDMA-only (or CDMA-only) stage received the wrong waveform family."""


class SingularLS(ArithmeticError):
    """The selected-atom matrix is rank deficient."""


class SceneTooDense(ValueError):
    """Not enough free grid cells to place the requested targets."""


class IndexOutOfRange(IndexError):
    """A grid index lies outside its dictionary."""

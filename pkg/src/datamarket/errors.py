"""Exception types shared across the simulator."""


class MarketError(Exception):
    """Base class for every simulator-specific error."""


class UnknownDataset(MarketError):
    """A dataset id the player has no record of."""


class NoFunds(MarketError):
    """Buyer budget cannot cover the ask."""


class NotOffered(MarketError):
    """Seller has no available supply of the dataset."""


class NotWanted(MarketError):
    """Dataset is not on the buyer's wishlist."""


class RunFinished(MarketError):
    """The market clock already reached the horizon."""


class NoHistory(MarketError):
    """A prediction was requested with no observed prices."""


class OracleTooLarge(MarketError):
    """Instance exceeds what full enumeration is allowed to chew on."""


class ConfigError(MarketError):
    """Invalid configuration; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class IoError(MarketError):
    """Output could not be written; the message names the path."""

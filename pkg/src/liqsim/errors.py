"""Exception hierarchy.

ProtocolError subclasses are "benign" during simulation: an action that
trips one is recorded as a failed action (an on-chain revert) and the run
continues. Everything else is a real error and propagates.
"""


class LiqsimError(Exception):
    """Base class for all package errors."""


class ConfigError(LiqsimError):
    """Invalid configuration value or unknown config key."""


class ValidationError(LiqsimError):
    """Input data violates a documented invariant."""


class ParseError(ValidationError):
    """Input file is structurally malformed."""


class IoError(LiqsimError):
    """Missing file or refused output (CLI exit code 2)."""


class DuplicateStat(LiqsimError):
    """A statistic name was registered twice."""


class DegenerateBaseline(LiqsimError):
    """Cost-effectiveness undefined: variant does not pay more than baseline."""


class ProtocolError(LiqsimError):
    """Base for action-level failures that mirror on-chain reverts."""


# -- vault ledger --------------------------------------------------------

class NotSafe(ProtocolError):
    """Vault would end up undercollateralized."""


class Dust(ProtocolError):
    """Vault debt would be positive but below the dust floor."""


class InsufficientGem(ProtocolError):
    """Not enough unlocked collateral."""


class InsufficientBalance(ProtocolError):
    """Not enough dai (or other balance) to move."""


class UnknownVault(ProtocolError):
    """Vault id does not exist."""


class NotOwner(ProtocolError):
    """Caller does not own the vault."""


class Underflow(ProtocolError):
    """Operation would drive a ledger position negative."""


# -- liquidation auctions -------------------------------------------------

class NotUnsafe(ProtocolError):
    """Vault is not eligible for liquidation."""


class SameTimestep(ProtocolError):
    """Vault went unsafe this timestep; liquidation must wait one step."""


class NotStale(ProtocolError):
    """Auction does not need a restart."""


class NeedsRedo(ProtocolError):
    """Auction is stale and must be restarted before it can be taken."""


class InsufficientDai(ProtocolError):
    """Keeper cannot pay for the auction slice."""


class Closed(ProtocolError):
    """Auction no longer exists."""

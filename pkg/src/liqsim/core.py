"""Vault ledger: collateral accounting, price spotting, and the Vow sink.

A single mutable ``Ledger`` owns every balance in a simulation run. It
re-implements the vault bookkeeping of the Dai system for one collateral
type: locked collateral (``ink``) and normalized debt (``art``) per vault,
unlocked collateral (``gem``) and dai per agent, plus the system-wide
debt / vice / sin totals that make conservation checkable to the integer.

The debt multiplier ``rate`` is fixed at 1.0 ray for the whole run; the
fields and formulas keep it explicit so the arithmetic reads like the
original.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    Dust,
    InsufficientBalance,
    InsufficientDai,
    InsufficientGem,
    NotOwner,
    NotSafe,
    Underflow,
    UnknownVault,
)
from .fixedpoint import RAY, Rad, Ray, Wad, rdiv, to_ray, wad_to_ray


@dataclass
class Vault:
    """One collateralized debt position."""

    owner: str
    ink: Wad = 0
    art: Wad = 0
    # timestep of the poke that saw this vault undercollateralized; cleared
    # when a later poke sees it safe again or when it is seized
    unsafe_since: int | None = None


@dataclass
class Ilk:
    """Risk parameters and running totals for the single collateral type."""

    mat: Ray = field(default_factory=lambda: to_ray("1.5"))
    rate: Ray = RAY
    dust: Rad = 0
    spot: Ray = 0
    total_art: Wad = 0


class Ledger:
    """Global protocol state machine. Single-threaded by construction."""

    def __init__(self, mat: Ray | None = None, dust: Rad = 0) -> None:
        self.ilk = Ilk(dust=dust)
        if mat is not None:
            if mat <= RAY:
                raise ValueError("mat must exceed 1.0 ray")
            self.ilk.mat = mat
        self.vaults: dict[str, Vault] = {}
        self.gem: dict[str, Wad] = {}
        self.dai: dict[str, Rad] = {}
        self.sin: Rad = 0
        self.vice: Rad = 0
        self.debt: Rad = 0
        self.feed_price: Wad = 0  # last poked oracle price
        self.collateral_minted: Wad = 0

    # -- balances ---------------------------------------------------------

    def gem_of(self, agent: str) -> Wad:
        return self.gem.get(agent, 0)

    def dai_of(self, agent: str) -> Rad:
        return self.dai.get(agent, 0)

    def mint_gem(self, agent: str, amount: Wad) -> None:
        """Credit exogenous collateral (simulation setup only)."""
        if amount < 0:
            raise ValueError("cannot mint negative collateral")
        self.gem[agent] = self.gem_of(agent) + amount
        self.collateral_minted += amount

    def add_gem(self, agent: str, amount: Wad) -> None:
        """Release escrowed collateral (auction settlement) to an agent."""
        if amount < 0:
            raise ValueError("cannot credit negative collateral")
        self.gem[agent] = self.gem_of(agent) + amount

    def vault(self, vault_id: str) -> Vault:
        try:
            return self.vaults[vault_id]
        except KeyError:
            raise UnknownVault(vault_id) from None

    # -- operations -------------------------------------------------------

    def frob(self, caller: str, vault_id: str, dink: Wad, dart: Wad) -> Vault:
        """Adjust a vault by (dink, dart), creating it on first touch.

        Positive dart draws dai to the owner; positive dink locks gem.
        The post-state must be safe whenever the change increases debt or
        removes collateral, and non-dust whenever debt remains.
        """
        vault = self.vaults.get(vault_id)
        if vault is None:
            vault = Vault(owner=caller)
        elif vault.owner != caller:
            raise NotOwner(f"{caller} does not own vault {vault_id}")

        new_ink = vault.ink + dink
        new_art = vault.art + dart
        if new_ink < 0 or new_art < 0:
            raise Underflow("vault position cannot go negative")
        if dink > 0 and self.gem_of(caller) < dink:
            raise InsufficientGem(f"{caller} holds {self.gem_of(caller)} < {dink}")
        ddebt = dart * self.ilk.rate  # wad * ray -> rad, exact
        if ddebt < 0 and self.dai_of(caller) < -ddebt:
            raise InsufficientBalance(f"{caller} cannot repay {-ddebt}")

        tab = new_art * self.ilk.rate
        if (dart > 0 or dink < 0) and tab > new_ink * self.ilk.spot:
            raise NotSafe(vault_id)
        if new_art > 0 and tab < self.ilk.dust:
            raise Dust(vault_id)

        vault.ink = new_ink
        vault.art = new_art
        self.vaults[vault_id] = vault
        self.gem[caller] = self.gem_of(caller) - dink
        self.dai[caller] = self.dai_of(caller) + ddebt
        self.ilk.total_art += dart
        self.debt += ddebt
        return vault

    def poke(self, feed_price: Wad, now: int) -> Ray:
        """Push a new oracle price and refresh every vault's safety flag.

        Only newly-unsafe vaults get ``unsafe_since = now``, so an onset
        survives later pokes at lower prices; a vault seen safe again has
        its pending episode discarded.
        """
        if feed_price <= 0:
            raise ValueError("feed price must be positive")
        self.feed_price = feed_price
        self.ilk.spot = rdiv(wad_to_ray(feed_price), self.ilk.mat)
        for vault in self.vaults.values():
            unsafe = vault.art * self.ilk.rate > vault.ink * self.ilk.spot
            if unsafe and vault.unsafe_since is None:
                vault.unsafe_since = now
            elif not unsafe:
                vault.unsafe_since = None
        return self.ilk.spot

    def is_unsafe(self, vault_id: str) -> bool:
        vault = self.vault(vault_id)
        return vault.art * self.ilk.rate > vault.ink * self.ilk.spot

    def grab(self, vault_id: str) -> tuple[Wad, Wad]:
        """Confiscate a vault into the liquidation path.

        Zeroes the position and books the seized debt as unbacked
        (sin/vice). Idempotent on an already-empty vault.
        """
        vault = self.vault(vault_id)
        ink, art = vault.ink, vault.art
        vault.ink = 0
        vault.art = 0
        vault.unsafe_since = None
        self.ilk.total_art -= art
        seized = art * self.ilk.rate
        self.sin += seized
        self.vice += seized
        return ink, art

    def suck(self, recipient: str, amount: Rad) -> None:
        """Mint unbacked dai to an agent (incentive payouts, seed capital)."""
        if amount < 0:
            raise ValueError("cannot suck a negative amount")
        self.dai[recipient] = self.dai_of(recipient) + amount
        self.sin += amount
        self.vice += amount
        self.debt += amount

    def settle_unbacked(self, payer: str, amount: Rad) -> None:
        """Burn a payer's dai against the Vow's unbacked debt."""
        if amount < 0:
            raise ValueError("cannot settle a negative amount")
        if self.dai_of(payer) < amount:
            raise InsufficientDai(f"{payer} cannot pay {amount}")
        assert self.sin >= amount, "settling more than outstanding sin"
        self.dai[payer] -= amount
        self.sin -= amount
        self.vice -= amount
        self.debt -= amount

    def move_dai(self, src: str, dst: str, amount: Rad) -> None:
        if amount < 0:
            raise ValueError("cannot move a negative amount")
        if self.dai_of(src) < amount:
            raise InsufficientBalance(f"{src} holds {self.dai_of(src)} < {amount}")
        self.dai[src] = self.dai_of(src) - amount
        self.dai[dst] = self.dai_of(dst) + amount

    def move_gem(self, src: str, dst: str, amount: Wad) -> None:
        if amount < 0:
            raise ValueError("cannot move a negative amount")
        if self.gem_of(src) < amount:
            raise InsufficientBalance(f"{src} holds {self.gem_of(src)} < {amount}")
        self.gem[src] = self.gem_of(src) - amount
        self.gem[dst] = self.gem_of(dst) + amount

    # -- invariants ------------------------------------------------------

    def check_invariants(self) -> None:
        """Assert the conservation identities, exactly."""
        total_art = sum(v.art for v in self.vaults.values())
        assert total_art == self.ilk.total_art, "total_art drifted"
        assert self.debt == self.ilk.total_art * self.ilk.rate + self.vice, (
            "debt != total_art * rate + vice"
        )
        assert sum(self.dai.values()) == self.debt, "sum(dai) != debt"
        assert self.vice == self.sin, "vice != sin"
        assert all(b >= 0 for b in self.dai.values()), "negative dai balance"
        assert all(b >= 0 for b in self.gem.values()), "negative gem balance"
        assert all(v.ink >= 0 and v.art >= 0 for v in self.vaults.values())

    # -- debugging --------------------------------------------------------

    def state_dict(self) -> dict:
        """JSON-serializable snapshot of the whole ledger."""
        return {
            "feed_price": self.feed_price,
            "ilk": {
                "mat": self.ilk.mat,
                "rate": self.ilk.rate,
                "dust": self.ilk.dust,
                "spot": self.ilk.spot,
                "total_art": self.ilk.total_art,
            },
            "vaults": {
                vid: {
                    "owner": v.owner,
                    "ink": v.ink,
                    "art": v.art,
                    "unsafe_since": v.unsafe_since,
                }
                for vid, v in sorted(self.vaults.items())
            },
            "gem": dict(sorted(self.gem.items())),
            "dai": dict(sorted(self.dai.items())),
            "sin": self.sin,
            "vice": self.vice,
            "debt": self.debt,
        }

"""Dutch-auction liquidation mechanics and the chip/tip incentive calculus.

``AuctionHouse`` seizes unsafe vaults into falling-price collateral
auctions, restarts stale ones, and settles partial or full takes against
the ledger. Incentives for liquidating and restarting are minted as
unbacked dai through the ledger's ``suck``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import Ledger
from .errors import Closed, NeedsRedo, NotStale, NotUnsafe, SameTimestep
from .fixedpoint import RAY, Rad, Ray, Wad, rdiv, rmul, rpow, to_rad, to_ray, wad_to_ray


@dataclass(frozen=True)
class IncentiveParams:
    """Keeper reward for a liquidation or restart: chip * tab + tip."""

    chip: Ray  # proportional fee, fraction of the auction tab
    tip: Rad  # flat fee, dai

    def __post_init__(self) -> None:
        if not 0 <= self.chip < RAY:
            raise ValueError("chip must lie in [0, 1) ray")
        if self.tip < 0:
            raise ValueError("tip must be non-negative")

    @classmethod
    def from_numbers(cls, chip: float | str, tip: float | str) -> IncentiveParams:
        return cls(chip=to_ray(chip), tip=to_rad(tip))


@dataclass(frozen=True)
class AuctionParams:
    """Shape of the price curve and the staleness limits."""

    buf: Ray  # multiplier on the oracle price for the starting bid
    tail: int  # max timesteps per price cycle
    cusp: Ray  # max fractional drop per cycle
    step_factor: Ray  # per-timestep multiplicative price decay
    chop: Ray  # liquidation penalty on the seized debt

    def __post_init__(self) -> None:
        if self.buf < RAY:
            raise ValueError("buf must be >= 1.0 ray")
        if not 0 < self.cusp < RAY:
            raise ValueError("cusp must lie in (0, 1) ray")
        if not 0 < self.step_factor < RAY:
            raise ValueError("step_factor must lie in (0, 1) ray")
        if self.tail < 1:
            raise ValueError("tail must be >= 1 timestep")
        if self.chop < RAY:
            raise ValueError("chop must be >= 1.0 ray")

    @classmethod
    def from_numbers(
        cls,
        buf: float | str = "1.25",
        tail: int = 14,
        cusp: float | str = "0.45",
        step_factor: float | str = "0.945",
        chop: float | str = "1.0",
    ) -> AuctionParams:
        return cls(
            buf=to_ray(buf),
            tail=int(tail),
            cusp=to_ray(cusp),
            step_factor=to_ray(step_factor),
            chop=to_ray(chop),
        )


@dataclass
class Auction:
    """A live collateral auction."""

    id: int
    lot: Wad  # collateral remaining
    tab: Rad  # dai still owed
    top: Ray  # starting price of the current cycle
    tic: int  # timestep the current cycle started
    usr: str  # original vault owner (gets leftover collateral)


def incentive(tab: Rad, params: IncentiveParams) -> Rad:
    """Reward for liquidating or restarting an auction with this tab."""
    if tab < 0:
        raise ValueError("tab must be non-negative")
    return rmul(tab, params.chip) + params.tip


def auction_price(top: Ray, elapsed: int, params: AuctionParams) -> Ray:
    """Bid price after ``elapsed`` timesteps of exponential decay."""
    if elapsed < 0:
        raise ValueError("elapsed must be non-negative")
    return rmul(top, rpow(params.step_factor, elapsed))


def needs_redo(top: Ray, tic: int, now: int, params: AuctionParams) -> bool:
    """True once a cycle ran too long or its price dropped too far."""
    elapsed = now - tic
    if elapsed > params.tail:
        return True
    price = auction_price(top, elapsed, params)
    return rdiv(price, top) < params.cusp


class BarkResult(NamedTuple):
    auction_id: int
    onset: int  # timestep the vault went unsafe
    paid: Rad  # incentive minted to the keeper


class RedoResult(NamedTuple):
    paid: Rad


class TakeResult(NamedTuple):
    slice: Wad  # collateral bought
    owe: Rad  # dai paid, exactly slice * price
    closed: bool


class AuctionHouse:
    """Liquidation engine bound to one ledger."""

    def __init__(
        self,
        ledger: Ledger,
        auction_params: AuctionParams,
        incentive_params: IncentiveParams,
    ) -> None:
        self.ledger = ledger
        self.params = auction_params
        self.incentives = incentive_params
        self.auctions: dict[int, Auction] = {}
        self._next_id = 1
        self.total_incentives_paid: Rad = 0

    def live(self, auction_id: int) -> Auction:
        try:
            return self.auctions[auction_id]
        except KeyError:
            raise Closed(f"auction {auction_id}") from None

    def needs_redo(self, auction_id: int, now: int) -> bool:
        a = self.live(auction_id)
        return needs_redo(a.top, a.tic, now, self.params)

    def _pay_incentive(self, keeper_id: str, tab: Rad) -> Rad:
        paid = incentive(tab, self.incentives)
        self.ledger.suck(keeper_id, paid)
        self.total_incentives_paid += paid
        return paid

    def bark(self, vault_id: str, keeper_id: str, now: int) -> BarkResult:
        """Liquidate an unsafe vault into a new auction.

        A vault can only be barked from the timestep after the poke that
        flagged it, so every response-time episode is at least one step.
        """
        vault = self.ledger.vault(vault_id)
        if not self.ledger.is_unsafe(vault_id):
            raise NotUnsafe(vault_id)
        if vault.unsafe_since is None or vault.unsafe_since >= now:
            raise SameTimestep(vault_id)
        onset = vault.unsafe_since

        ink, art = self.ledger.grab(vault_id)
        tab = rmul(art * self.ledger.ilk.rate, self.params.chop)
        top = rmul(wad_to_ray(self.ledger.feed_price), self.params.buf)
        auction = Auction(
            id=self._next_id, lot=ink, tab=tab, top=top, tic=now, usr=vault.owner
        )
        self._next_id += 1
        if auction.lot > 0 and auction.tab > 0:
            self.auctions[auction.id] = auction
        # a collateral-less seizure leaves its whole tab as sin, no auction

        paid = self._pay_incentive(keeper_id, tab)
        return BarkResult(auction.id, onset, paid)

    def redo(self, auction_id: int, keeper_id: str, now: int) -> RedoResult:
        """Restart a stale auction from a fresh oracle price."""
        a = self.live(auction_id)
        if not needs_redo(a.top, a.tic, now, self.params):
            raise NotStale(f"auction {auction_id}")
        a.top = rmul(wad_to_ray(self.ledger.feed_price), self.params.buf)
        a.tic = now
        paid = self._pay_incentive(keeper_id, a.tab)
        return RedoResult(paid)

    def take(self, auction_id: int, keeper_id: str, max_qty: Wad, now: int) -> TakeResult:
        """Buy up to ``max_qty`` collateral at the current curve price.

        slice = min(lot, max_qty, tab // price) and owe = slice * price,
        so the keeper's dai decrease equals the tab decrease exactly.
        Truncating tab // price can strand a residual tab smaller than the
        price of one collateral-wei; such an auction can never raise
        another unit, so it is closed and the residual stays as sin.
        """
        a = self.live(auction_id)
        elapsed = now - a.tic
        if needs_redo(a.top, a.tic, now, self.params):
            raise NeedsRedo(f"auction {auction_id}")
        price = auction_price(a.top, elapsed, self.params)

        slice_ = min(a.lot, max_qty, a.tab // price)  # rad // ray -> wad, floor
        if slice_ <= 0:
            return TakeResult(0, 0, False)
        owe = slice_ * price  # wad * ray -> rad, exact

        self.ledger.settle_unbacked(keeper_id, owe)
        self.ledger.add_gem(keeper_id, slice_)
        a.lot -= slice_
        a.tab -= owe

        closed = a.lot == 0 or a.tab < price
        if closed:
            if a.lot > 0:
                self.ledger.add_gem(a.usr, a.lot)  # leftover back to the owner
            del self.auctions[a.id]
        return TakeResult(slice_, owe, closed)

    def state_dict(self) -> dict:
        """JSON-serializable auction table."""
        return {
            str(aid): {
                "lot": a.lot,
                "tab": a.tab,
                "top": a.top,
                "tic": a.tic,
                "usr": a.usr,
            }
            for aid, a in sorted(self.auctions.items())
        }

"""Historical market feeds, the gas-cost model, and AMM slippage quoting.

Feeds are replayed from CSV at a fixed 10-minute cadence. Reserve data
describes a constant-product pool and is used only to quote what a keeper
would get for dumping seized collateral; the simulation never trades
against it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from .errors import IoError, ParseError, ValidationError
from .fixedpoint import RAY, Rad, Wad, to_wad

TICK_SECONDS = 600
ONE_DAY_TICKS = 144

CSV_HEADER = [
    "timestamp",
    "eth_price_dai",
    "gas_price_gwei",
    "uniswap_eth_reserve",
    "uniswap_dai_reserve",
]


@dataclass(frozen=True)
class FeedTick:
    """One 10-minute market snapshot."""

    timestamp: int  # unix seconds
    eth_price: Wad  # dai per ETH
    gas_price: Wad  # gwei
    eth_reserve: Wad
    dai_reserve: Wad


@dataclass(frozen=True)
class Timeframe:
    """An immutable, validated sequence of ticks; shareable across runs."""

    name: str
    ticks: tuple[FeedTick, ...]

    def __len__(self) -> int:
        return len(self.ticks)

    def __getitem__(self, i: int) -> FeedTick:
        return self.ticks[i]


def _validate_ticks(name: str, ticks: tuple[FeedTick, ...], one_day: bool) -> None:
    if len(ticks) < 2:
        raise ValidationError(f"{name}: need at least 2 ticks, got {len(ticks)}")
    if one_day and len(ticks) != ONE_DAY_TICKS:
        raise ValidationError(
            f"{name}: one-day frame must have {ONE_DAY_TICKS} ticks, got {len(ticks)}"
        )
    prev = None
    for i, tick in enumerate(ticks):
        for field in ("eth_price", "gas_price", "eth_reserve", "dai_reserve"):
            if getattr(tick, field) <= 0:
                raise ValidationError(f"{name}: row {i}: non-positive {field}")
        if prev is not None:
            if tick.timestamp <= prev.timestamp:
                raise ValidationError(f"{name}: row {i}: timestamps not increasing")
            if tick.timestamp - prev.timestamp != TICK_SECONDS:
                raise ValidationError(
                    f"{name}: row {i}: cadence {tick.timestamp - prev.timestamp}s, "
                    f"expected {TICK_SECONDS}s"
                )
        prev = tick


def load_timeframe(path: str | Path, one_day: bool = False) -> Timeframe:
    """Load and validate a feed CSV.

    Decimal fields are parsed with round-half-even at the wad scale, so two
    loads of the same file are bit-identical.
    """
    path = Path(path)
    if not path.exists():
        raise IoError(f"feed file not found: {path}")
    ticks: list[FeedTick] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != CSV_HEADER:
            raise ParseError(
                f"{path.name}: expected header {','.join(CSV_HEADER)}, "
                f"got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                if any(row[k] is None or row[k] == "" for k in CSV_HEADER):
                    raise InvalidOperation
                ticks.append(
                    FeedTick(
                        timestamp=int(row["timestamp"]),
                        eth_price=to_wad(Decimal(row["eth_price_dai"])),
                        gas_price=to_wad(Decimal(row["gas_price_gwei"])),
                        eth_reserve=to_wad(Decimal(row["uniswap_eth_reserve"])),
                        dai_reserve=to_wad(Decimal(row["uniswap_dai_reserve"])),
                    )
                )
            except (InvalidOperation, ValueError, KeyError):
                raise ParseError(f"{path.name}: malformed row at line {lineno}") from None
    frame = Timeframe(name=path.stem, ticks=tuple(ticks))
    _validate_ticks(frame.name, frame.ticks, one_day)
    return frame


@dataclass(frozen=True)
class GasModel:
    """Gas units per protocol interaction, sampled per profitability check."""

    mean_units: int = 300_000
    sd_units: int = 30_000
    floor_units: int = 21_000

    def __post_init__(self) -> None:
        if self.floor_units < 21_000:
            raise ValidationError("floor_units below the minimum transaction gas")
        if self.mean_units <= self.floor_units:
            raise ValidationError("mean_units must exceed floor_units")
        if self.sd_units < 0:
            raise ValidationError("sd_units must be non-negative")

    def sample_units(self, rng: np.random.Generator) -> int:
        """Normal draw, clamped below at the floor, rounded to an integer."""
        draw = rng.normal(self.mean_units, self.sd_units)
        return int(round(max(float(self.floor_units), float(draw))))


def gas_cost_dai(units: int, gas_price: Wad, eth_price: Wad) -> Rad:
    """Dai cost of a transaction: units * gas_price(gwei) * 1e-9 * eth_price.

    With both prices in wad the product lands on the rad scale exactly
    (1e18 * 1e18 * 1e9-implied-shift = 1e45), so no division is needed.
    """
    if units < 0 or gas_price < 0 or eth_price < 0:
        raise ValueError("gas cost inputs must be non-negative")
    return units * gas_price * eth_price


def amm_out(amount_in: Wad, eth_reserve: Wad, dai_reserve: Wad) -> Rad:
    """Dai received for selling ETH into a constant-product pool, 0.3% fee.

    Floor division at the wad scale matches the pool's own integer rule:
    out = in*997*dai_reserve / (eth_reserve*1000 + in*997).
    """
    if amount_in < 0:
        raise ValueError("amount_in must be non-negative")
    if eth_reserve <= 0 or dai_reserve <= 0:
        raise ValueError("reserves must be positive")
    if amount_in == 0:
        return 0
    in_with_fee = amount_in * 997
    out_wad = in_with_fee * dai_reserve // (eth_reserve * 1000 + in_with_fee)
    return out_wad * RAY  # wad -> rad

"""The five keeper archetypes and the actions they emit.

Keepers are pure over a start-of-timestep snapshot: they never touch the
ledger directly, they only emit ``Action`` values that the engine executes
(and re-validates) later in a shuffled order. Every keeper, whatever its
job, opens one vault with its whole ETH balance at the first timestep.

Each keeper owns an RNG stream derived from the master seed and keyed by
(kind, index), so changing one population count never perturbs the draws
of keepers of other kinds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ConfigError
from .feeds import GasModel, amm_out, gas_cost_dai
from .fixedpoint import RAY, Rad, Ray, Wad, rmul, to_rad, to_ray, to_wad, wad_to_ray
from .liquidation import AuctionParams, IncentiveParams, auction_price, incentive, needs_redo


class ActionKind(enum.Enum):
    OPEN_VAULT = "open_vault"
    POKE = "poke"
    BARK = "bark"
    REDO = "redo"
    TAKE = "take"
    TIMESTEP_START = "timestep_start"
    TIMESTEP_END = "timestep_end"


SENTINEL_KINDS = frozenset({ActionKind.TIMESTEP_START, ActionKind.TIMESTEP_END})


@dataclass(frozen=True)
class Action:
    """One intent emitted by a keeper (or, for sentinels, by the engine)."""

    kind: ActionKind
    actor: str
    price: Wad | None = None  # POKE
    ink: Wad | None = None  # OPEN_VAULT
    art: Wad | None = None  # OPEN_VAULT
    vault_id: str | None = None  # BARK
    auction_id: int | None = None  # REDO / TAKE
    max_qty: Wad | None = None  # TAKE


@dataclass(frozen=True)
class VaultView:
    id: str
    ink: Wad
    art: Wad
    unsafe_since: int | None


@dataclass(frozen=True)
class AuctionView:
    id: int
    lot: Wad
    tab: Rad
    top: Ray
    tic: int
    usr: str


@dataclass(frozen=True)
class Snapshot:
    """Read-only world state at the start of a timestep."""

    t: int
    eth_price: Wad
    gas_price: Wad
    eth_reserve: Wad
    dai_reserve: Wad
    spot: Ray
    rate: Ray
    dust: Rad
    incentive: IncentiveParams
    auction: AuctionParams
    vaults: tuple[VaultView, ...]
    auctions: tuple[AuctionView, ...]
    dai: Mapping[str, Rad]


class KeeperKind(enum.Enum):
    VAULT = "vault"
    SPOTTER = "spotter"
    BARK = "bark"
    REDO = "redo"
    CLIPPER = "clipper"


# spawn-key codes for per-keeper RNG streams; stable across config changes
_STREAM_CODE = {
    KeeperKind.VAULT: 0,
    KeeperKind.SPOTTER: 1,
    KeeperKind.BARK: 2,
    KeeperKind.REDO: 3,
    KeeperKind.CLIPPER: 4,
}


@dataclass(frozen=True)
class KeeperPopulationConfig:
    """Population counts and parameter distributions.

    Sampled parameters are clamped into their valid ranges; the sd fields
    may be zeroed for degenerate (deterministic) populations.
    """

    n_vault: int = 50
    n_spotter: int = 1
    n_bark: int = 5
    n_redo: int = 5
    n_clipper: int = 5

    eth_balance_mean: float = 10.0
    eth_balance_sd: float = 2.0
    eth_balance_min: float = 1.0

    target_cr_mean: float = 1.75
    target_cr_sd: float = 0.15
    target_cr_margin: float = 0.05  # minimum headroom above the liquidation ratio

    discount_mean: float = 0.85
    discount_sd: float = 0.05
    discount_min: float = 0.5
    discount_max: float = 0.99

    dai_budget_mean: float = 50_000.0
    dai_budget_sd: float = 10_000.0
    dai_budget_min: float = 0.0

    def validate(self) -> None:
        counts = {
            "n_vault": self.n_vault,
            "n_spotter": self.n_spotter,
            "n_bark": self.n_bark,
            "n_redo": self.n_redo,
            "n_clipper": self.n_clipper,
        }
        for name, n in counts.items():
            if n < 0 or n != int(n):
                raise ConfigError(f"{name} must be a non-negative integer")
        if self.n_spotter < 1:
            raise ConfigError("at least one spotter is required to push prices")
        for name in ("eth_balance_sd", "target_cr_sd", "discount_sd", "dai_budget_sd"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if not 0 < self.discount_min <= self.discount_max < 1:
            raise ConfigError("discount bounds must satisfy 0 < min <= max < 1")
        if self.eth_balance_min <= 0:
            raise ConfigError("eth_balance_min must be positive")
        if self.target_cr_margin <= 0:
            raise ConfigError("target_cr_margin must be positive")

    @property
    def total(self) -> int:
        return self.n_vault + self.n_spotter + self.n_bark + self.n_redo + self.n_clipper


def _clamped_normal(
    rng: np.random.Generator, mean: float, sd: float, lo: float, hi: float | None = None
) -> float:
    x = float(rng.normal(mean, sd))
    x = max(lo, x)
    if hi is not None:
        x = min(hi, x)
    return x


class Keeper:
    """Base agent: opens one vault at t=0, then sits idle."""

    kind = KeeperKind.VAULT

    def __init__(
        self,
        keeper_id: str,
        rng: np.random.Generator,
        gas_model: GasModel,
        eth_balance: Wad,
        target_cr: Wad,
    ) -> None:
        self.id = keeper_id
        self.rng = rng
        self.gas_model = gas_model
        self.eth_balance = eth_balance
        self.target_cr = target_cr  # wad-scaled collateralization ratio

    def actions(self, snap: Snapshot) -> list[Action]:
        if snap.t == 0:
            return self._open_vault(snap)
        return []

    def _open_vault(self, snap: Snapshot) -> list[Action]:
        ink = self.eth_balance
        if ink <= 0:
            return []
        art = ink * snap.eth_price // self.target_cr  # draw up to the target ratio
        if art <= 0 or art * snap.rate < snap.dust:
            return []  # too small to ever exist as a vault
        return [Action(ActionKind.OPEN_VAULT, self.id, ink=ink, art=art)]

    def _sampled_gas_cost(self, snap: Snapshot) -> Rad:
        units = self.gas_model.sample_units(self.rng)
        return gas_cost_dai(units, snap.gas_price, snap.eth_price)


class SpotterKeeper(Keeper):
    """Pushes the feed price into the ledger every timestep."""

    kind = KeeperKind.SPOTTER

    def actions(self, snap: Snapshot) -> list[Action]:
        acts = super().actions(snap)
        acts.append(Action(ActionKind.POKE, self.id, price=snap.eth_price))
        return acts


class BarkKeeper(Keeper):
    """Liquidates flagged vaults whenever the incentive beats the gas cost."""

    kind = KeeperKind.BARK

    def actions(self, snap: Snapshot) -> list[Action]:
        acts = super().actions(snap)
        for v in snap.vaults:
            if v.unsafe_since is None:
                continue  # snapshot flags always predate this timestep
            tab = rmul(v.art * snap.rate, snap.auction.chop)
            if incentive(tab, snap.incentive) > self._sampled_gas_cost(snap):
                acts.append(Action(ActionKind.BARK, self.id, vault_id=v.id))
        return acts


class RedoKeeper(Keeper):
    """Restarts stale auctions whenever the incentive beats the gas cost."""

    kind = KeeperKind.REDO

    def actions(self, snap: Snapshot) -> list[Action]:
        acts = super().actions(snap)
        for a in snap.auctions:
            if not needs_redo(a.top, a.tic, snap.t, snap.auction):
                continue
            if incentive(a.tab, snap.incentive) > self._sampled_gas_cost(snap):
                acts.append(Action(ActionKind.REDO, self.id, auction_id=a.id))
        return acts


class ClipperKeeper(Keeper):
    """Takes whole auction lots when capital, discount, and profit line up.

    Conditions are checked in a fixed order (capital, discount, profit) and
    the gas draw happens only for the profit check, so RNG consumption is
    reproducible.
    """

    kind = KeeperKind.CLIPPER

    def __init__(self, *args, desired_discount: Ray, dai_budget: Rad, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.desired_discount = desired_discount
        self.dai_budget = dai_budget

    def actions(self, snap: Snapshot) -> list[Action]:
        acts = super().actions(snap)
        balance = snap.dai.get(self.id, 0)
        for a in snap.auctions:
            price = auction_price(a.top, snap.t - a.tic, snap.auction)
            whole_lot_cost = a.lot * price  # wad * ray -> rad
            if balance < whole_lot_cost:
                continue
            if price > rmul(wad_to_ray(snap.eth_price), self.desired_discount):
                continue
            proceeds = amm_out(a.lot, snap.eth_reserve, snap.dai_reserve)
            if proceeds - whole_lot_cost - self._sampled_gas_cost(snap) > 0:
                acts.append(Action(ActionKind.TAKE, self.id, auction_id=a.id, max_qty=a.lot))
        return acts


def init_population(
    config: KeeperPopulationConfig,
    master_seed: int,
    mat: Ray,
    gas_model: GasModel,
) -> list[Keeper]:
    """Instantiate the full keeper population with sampled parameters.

    Each keeper's parameters come from its own RNG stream, which the keeper
    then keeps for runtime gas draws.
    """
    config.validate()
    mat_f = mat / RAY
    keepers: list[Keeper] = []

    def make_rng(kind: KeeperKind, index: int) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=master_seed, spawn_key=(_STREAM_CODE[kind], index)
        )
        return np.random.default_rng(seq)

    def base_params(rng: np.random.Generator) -> tuple[Wad, Wad]:
        eth = _clamped_normal(
            rng, config.eth_balance_mean, config.eth_balance_sd, config.eth_balance_min
        )
        cr = _clamped_normal(
            rng, config.target_cr_mean, config.target_cr_sd, mat_f + config.target_cr_margin
        )
        return to_wad(eth), to_wad(cr)

    specs: list[tuple[KeeperKind, int, type[Keeper]]] = [
        (KeeperKind.VAULT, config.n_vault, Keeper),
        (KeeperKind.SPOTTER, config.n_spotter, SpotterKeeper),
        (KeeperKind.BARK, config.n_bark, BarkKeeper),
        (KeeperKind.REDO, config.n_redo, RedoKeeper),
        (KeeperKind.CLIPPER, config.n_clipper, ClipperKeeper),
    ]
    for kind, count, cls in specs:
        for i in range(count):
            rng = make_rng(kind, i)
            eth, cr = base_params(rng)
            kid = f"{kind.value}-{i}"
            if cls is ClipperKeeper:
                discount = _clamped_normal(
                    rng,
                    config.discount_mean,
                    config.discount_sd,
                    config.discount_min,
                    config.discount_max,
                )
                budget = _clamped_normal(
                    rng, config.dai_budget_mean, config.dai_budget_sd, config.dai_budget_min
                )
                keepers.append(
                    ClipperKeeper(
                        kid,
                        rng,
                        gas_model,
                        eth,
                        cr,
                        desired_discount=to_ray(discount),
                        dai_budget=to_rad(budget),
                    )
                )
            else:
                keepers.append(cls(kid, rng, gas_model, eth, cr))
    return keepers

"""Run-level metrics: response time and incentive cost-effectiveness."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DegenerateBaseline


def avg_response_time(episodes: Iterable[Sequence[int]]) -> float | None:
    """Mean timesteps from a vault going unsafe to its liquidation.

    Returns None (reported as null) when no vault was liquidated; an
    average of nothing is absent, not zero.
    """
    lengths = [liquidated - onset for onset, liquidated in episodes]
    if not lengths:
        return None
    return sum(lengths) / len(lengths)


def cost_effectiveness(
    base: tuple[float, float], variant: tuple[float, float]
) -> float:
    """Percent decrease in response time per additional dai of incentive.

    ``base`` and ``variant`` are (avg_response_time, total_incentives)
    pairs; the variant must actually pay more than the baseline.
    """
    base_rt, base_inc = base
    var_rt, var_inc = variant
    if var_inc <= base_inc:
        raise DegenerateBaseline(
            f"variant incentives {var_inc} do not exceed baseline {base_inc}"
        )
    if base_rt <= 0:
        raise DegenerateBaseline("baseline response time must be positive")
    return 100.0 * (base_rt - var_rt) / base_rt / (var_inc - base_inc)

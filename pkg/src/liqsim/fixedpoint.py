"""Integer fixed-point arithmetic on three scales.

Quantities follow the Dai codebase convention:

    wad  10**18   token amounts (ETH collateral, normalized debt)
    ray  10**27   rates and price ratios
    rad  10**45   dai balances and debt (wad * ray, exact)

All values are plain Python ints, so conservation identities hold exactly
at any magnitude. Division truncates toward zero; every call site that
relies on the truncation direction says so. Negative operands are rejected
by the r* helpers because ledger positions are never negative.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, localcontext

WAD = 10**18
RAY = 10**27
RAD = 10**45

# type aliases for signature readability; plain ints at the given scale
Wad = int
Ray = int
Rad = int

_PREC = 80


def _to_fixed(value: int | float | str | Decimal, scale: int) -> int:
    """Scale a human-unit number to a fixed-point int, round half to even.

    Floats go through str() so that e.g. 0.001 lands on 10**24 ray exactly
    instead of dragging binary representation error into the ledger.
    """
    if isinstance(value, int):
        return value * scale
    if isinstance(value, float):
        value = str(value)
    with localcontext() as ctx:
        ctx.prec = _PREC
        d = Decimal(value) * scale
        return int(d.quantize(Decimal(1), rounding=ROUND_HALF_EVEN))


def to_wad(value: int | float | str | Decimal) -> Wad:
    return _to_fixed(value, WAD)


def to_ray(value: int | float | str | Decimal) -> Ray:
    return _to_fixed(value, RAY)


def to_rad(value: int | float | str | Decimal) -> Rad:
    return _to_fixed(value, RAD)


def wad_to_ray(x: Wad) -> Ray:
    return x * 10**9


def rmul(x: int, y: Ray) -> int:
    """x * y / RAY, truncated. Keeps the scale of x."""
    if x < 0 or y < 0:
        raise ValueError("rmul operands must be non-negative")
    return x * y // RAY


def rdiv(x: int, y: int) -> Ray:
    """x / y as a ray ratio, truncated."""
    if x < 0 or y <= 0:
        raise ValueError("rdiv needs non-negative x and positive y")
    return x * RAY // y


def rpow(x: Ray, n: int) -> Ray:
    """x ** n in ray, exact: one truncating division at the end.

    A single big-int power avoids the per-step truncation of iterated
    rmul, which makes price curves provably non-increasing.
    """
    if x < 0 or n < 0:
        raise ValueError("rpow needs non-negative operands")
    if n == 0:
        return RAY
    return x**n // RAY ** (n - 1)


def rad_to_decimal(x: Rad) -> Decimal:
    """Exact dai amount of a rad balance."""
    with localcontext() as ctx:
        ctx.prec = _PREC
        return Decimal(x) / RAD


def wad_to_decimal(x: Wad) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        return Decimal(x) / WAD


def fmt_dai(x: Rad) -> str:
    """Exact, minimal decimal string of a rad amount (no exponent form)."""
    s = format(rad_to_decimal(x), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s or "0"

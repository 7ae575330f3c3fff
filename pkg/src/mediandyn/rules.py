"""Single-site update rules.

All four rules are order statistics of the polled opinions: majority is the
median of a binary pool, and zero-temperature Glauber dynamics is the
coin-flip median of a binary pool.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .graph import Graph, effective_neighborhood


class RuleKind(enum.Enum):
    MEDIAN = "median"
    MEDIAN_COINS = "median_coins"
    MAJORITY = "majority"
    ZTGD = "ztgd"

    @property
    def binary(self) -> bool:
        return self in (RuleKind.MAJORITY, RuleKind.ZTGD)

    @property
    def coins(self) -> bool:
        """True for rules that break even-degree ties with a coin instead of self-inclusion."""
        return self in (RuleKind.MEDIAN_COINS, RuleKind.ZTGD)

    @classmethod
    def parse(cls, name: "str | RuleKind") -> "RuleKind":
        if isinstance(name, RuleKind):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown rule {name!r}; expected one of "
                             f"{[r.value for r in cls]}") from None


def _check_binary(pool):
    for v in pool:
        if v != 0 and v != 1:
            raise ValueError(f"non-binary opinion {v!r} in pool")


def median_update(pool: Sequence[float]) -> float:
    """Middle order statistic of an odd-size pool."""
    if len(pool) % 2 == 0:
        raise ValueError(f"median_update needs an odd pool, got size {len(pool)}")
    return sorted(pool)[len(pool) // 2]


def median_coins_update(pool: Sequence[float], coin: int) -> float:
    """Lower (``coin=0``) or upper (``coin=1``) middle value of an even-size pool."""
    m = len(pool)
    if m == 0 or m % 2:
        raise ValueError(f"median_coins_update needs a non-empty even pool, got size {m}")
    s = sorted(pool)
    return s[m // 2] if coin else s[m // 2 - 1]


def majority_update(pool: Sequence[int]) -> int:
    if len(pool) % 2 == 0:
        raise ValueError(f"majority_update needs an odd pool, got size {len(pool)}")
    _check_binary(pool)
    return int(2 * sum(pool) > len(pool))


def ztgd_update(pool: Sequence[int], current: int, coin: int) -> int:
    """Strict majority of the neighbors; an exact tie goes to ``coin``.

    ``current`` does not influence the outcome; it is accepted so the call
    mirrors a flip-rate description of the dynamics.
    """
    m = len(pool)
    if m % 2:
        raise ValueError(f"ztgd_update needs an even pool, got size {m}")
    _check_binary(pool)
    ones = sum(pool)
    if 2 * ones > m:
        return 1
    if 2 * ones < m:
        return 0
    return int(coin)


def pool_vertices(g: Graph, rule: RuleKind, x: int) -> list[int]:
    """Vertices polled by ``x`` under ``rule``'s tie convention."""
    if rule.coins:
        return list(g.neighbors(x))
    return effective_neighborhood(g, x)


def site_update(g: Graph, rule: RuleKind, values: np.ndarray, x: int, coin: int):
    """New opinion of ``x`` when its clock rings, given the current configuration."""
    pool = [values[y] for y in pool_vertices(g, rule, x)]
    if not pool:
        return values[x]
    if len(pool) % 2:
        return majority_update(pool) if rule.binary else median_update(pool)
    if rule is RuleKind.ZTGD:
        return ztgd_update(pool, values[x], coin)
    return median_coins_update(pool, coin)

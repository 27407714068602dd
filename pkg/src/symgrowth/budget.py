"""Global pair budget shared by the fast path and the reference oracles.

Product-style operations cost one group multiplication per element pair.
Any single call whose pair count would exceed the budget is refused up
front with ``PairBudgetError`` so runaway instances fail fast instead of
grinding.  The default is 10^8 pairs; the environment variable
``SYMGROWTH_BUDGET_PAIRS`` or ``set_pair_budget`` overrides it.
"""

from __future__ import annotations

import os

from .errors import PairBudgetError, ParameterError

DEFAULT_PAIR_BUDGET = 10**8
BUDGET_ENV = "SYMGROWTH_BUDGET_PAIRS"

_pair_budget: int | None = None


def _env_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_PAIR_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ParameterError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


def pair_budget() -> int:
    """Current cap on group multiplications per product-style call."""
    return _pair_budget if _pair_budget is not None else _env_budget()


def set_pair_budget(value: int | None) -> None:
    """Override the pair budget for this process; None restores the default."""
    global _pair_budget
    if value is not None:
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ParameterError(f"pair budget must be a positive integer, got {value!r}")
    _pair_budget = value


def charge_pairs(needed: int) -> None:
    """Raise PairBudgetError if ``needed`` multiplications exceed the budget."""
    budget = pair_budget()
    if needed > budget:
        raise PairBudgetError(needed, budget)

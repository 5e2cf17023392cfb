"""Size limits shared by the enumeration-based routines."""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace
from typing import Iterator


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed the configured bound."""


@dataclass(frozen=True)
class Budget:
    # bound on sum(dims) of any Representation
    max_total_dim: int = 12
    # bound on prod_v p**(d_v * d_v) for subobject enumeration;
    # 3**36 is the worst case for total dimension 6 over F_3
    enumeration_cutoff: int = 3**36
    # bound on p**(hom dimension) for exhaustive hom-space searches
    hom_search_cutoff: int = 10**5
    # random draws tried before giving up in a search past hom_search_cutoff
    sample_trials: int = 2000


_current: contextvars.ContextVar[Budget] = contextvars.ContextVar("exactcat_budget", default=Budget())


def current_budget() -> Budget:
    return _current.get()


@contextlib.contextmanager
def use_budget(budget: Budget | None = None, **overrides) -> Iterator[Budget]:
    """Temporarily install a budget, e.g. ``with use_budget(hom_search_cutoff=10): ...``."""
    b = replace(budget or _current.get(), **overrides)
    token = _current.set(b)
    try:
        yield b
    finally:
        _current.reset(token)

"""Exact partial-augmentation constraints for torsion units of integral group rings."""

from __future__ import annotations

from .engine import (
    Engine,
    OrderVerdict,
    Selection,
    Status,
    feasible_towers,
    kimmerle,
    order_verdict,
    spectrum,
)
from .tables import CharacterTable, load, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "CharacterTable",
    "Engine",
    "OrderVerdict",
    "Selection",
    "Status",
    "__version__",
    "feasible_towers",
    "kimmerle",
    "load",
    "order_verdict",
    "parse",
    "serialize",
    "spectrum",
]

"""Artificial best algorithm: per problem, the data of the algorithm with the smallest aRT."""

from __future__ import annotations

from typing import Mapping, NamedTuple

from .model import InvalidArgumentError, RuntimeTable, TableKey
from .runtime import art

BEST_LABEL = "best"


class Selection(NamedTuple):
    algorithm: str
    art: float


SelectionMap = dict[TableKey, Selection]


def select_best(tables: Mapping[str, RuntimeTable]) -> SelectionMap:
    """Pick, for every (function, dimension, precision), the algorithm with minimal aRT.

    Ties go to the algorithm with more successes, then to the smallest name.
    All tables must cover the same keys.
    """
    if not tables:
        raise InvalidArgumentError("need at least one algorithm")
    names = sorted(tables)
    keys = set(tables[names[0]])
    for name in names[1:]:
        if set(tables[name]) != keys:
            raise InvalidArgumentError(f"runtime table of {name!r} covers different problems than {names[0]!r}")
    selection: SelectionMap = {}
    for key in sorted(keys, key=lambda k: (k[0], k[1], -k[2])):
        best = min(names, key=lambda a: (art(tables[a][key]), -tables[a][key].n_success, a))
        selection[key] = Selection(best, art(tables[best][key]))
    return selection


def compose_virtual_dataset(selection: SelectionMap, tables: Mapping[str, RuntimeTable],
                            label: str = BEST_LABEL) -> RuntimeTable:
    """Runtime table holding, per key, the trials of the selected algorithm."""
    entries = {}
    for key, chosen in selection.items():
        try:
            entries[key] = tables[chosen.algorithm][key]
        except KeyError:
            raise InvalidArgumentError(f"no data for {chosen.algorithm!r} at {key}") from None
    return RuntimeTable(entries, algorithm=label)

"""Disk cache for character tables, keyed by group digest and prime.

Strictly an optimization: a cache hit reconstructs the exact same table a
fresh computation would produce, so downstream output is byte-identical
whether the cache is cold, warm, or disabled.  The directory comes from
the environment at call time (see config.cache_dir).
"""

from __future__ import annotations

import json
import os

from . import config
from .characters import CharacterTable, character_table, splitting_prime
from .groups import FiniteGroup


def _entry_path(base: str, digest: str, prime: int) -> str:
    return os.path.join(base, f"{digest}-p{prime}.json")


def _canonical_prime(group: FiniteGroup, prime: int | None) -> int:
    if prime is not None:
        return prime
    return splitting_prime(group.exponent, group.order)


def store_table(table: CharacterTable) -> str:
    """Write one table to the cache; returns the file path."""
    base = config.cache_dir()
    os.makedirs(base, exist_ok=True)
    path = _entry_path(base, table.group.table_digest, table.prime)
    payload = json.dumps(table.serialize(), sort_keys=True,
                         separators=(",", ":"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)
    return path


def load_table(group: FiniteGroup, prime: int) -> CharacterTable | None:
    """Reconstruct a cached table, or None on miss or stale entry."""
    path = _entry_path(config.cache_dir(), group.table_digest, prime)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if (data.get("schema") != "bohrsound/chartable/1"
            or data.get("group_digest") != group.table_digest
            or data.get("order") != group.order
            or data.get("prime") != prime
            or data.get("class_reps") != list(group.class_reps)):
        return None
    return CharacterTable(group, prime, data["degrees"], data["values"])


def cached_character_table(group: FiniteGroup,
                           prime: int | None = None) -> CharacterTable:
    """character_table with a read-through disk cache."""
    p = _canonical_prime(group, prime)
    table = load_table(group, p)
    if table is None:
        table = character_table(group, prime=p)
        store_table(table)
    return table


def warm(groups) -> list[str]:
    """Compute and store tables for every group; returns written paths."""
    return [store_table(character_table(g)) for g in groups]


def clear() -> int:
    """Remove all cache entries; returns how many files were deleted."""
    base = config.cache_dir()
    removed = 0
    if os.path.isdir(base):
        for name in sorted(os.listdir(base)):
            if name.endswith(".json"):
                os.unlink(os.path.join(base, name))
                removed += 1
    return removed


def inspect() -> list[dict]:
    """One row per cache entry: digest, order, prime, class count."""
    base = config.cache_dir()
    rows = []
    if os.path.isdir(base):
        for name in sorted(os.listdir(base)):
            if not name.endswith(".json"):
                continue
            try:
                with open(os.path.join(base, name), encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, ValueError):
                continue
            rows.append({
                "file": name,
                "group_digest": data.get("group_digest"),
                "order": data.get("order"),
                "prime": data.get("prime"),
                "classes": len(data.get("class_reps", [])),
            })
    return rows

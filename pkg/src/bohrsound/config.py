"""Size limits and environment knobs.

All limits are module constants so tests can monkeypatch them; the CLI reads
the cache directory from the environment at call time.
"""

from __future__ import annotations

import os

# exhaustive multiplication-table validation up to this order, seeded sampling above
VALIDATE_EXHAUSTIVE_MAX = 512
VALIDATE_SAMPLE_FACTOR = 10  # sampled triples = factor * order**2
VALIDATE_SAMPLE_SEED = 0xB04A

# character tables refuse larger groups (Dixon cost grows fast past this)
CHARTABLE_MAX_ORDER = 1024
PRIME_SEARCH_LIMIT = 1 << 31

HEISENBERG_MAX_LEVEL = 4

# Minkowski's bound is astronomically large past small rank; refuse above this
MINKOWSKI_MAX_RANK = 8

DEFAULT_ORBIT_CAP = 10**6

# finite results serialize full element lists up to this order
SERIALIZE_ELEMENTS_MAX = 10**4

CACHE_ENV_VAR = "BOHRSOUND_CACHE_DIR"


def cache_dir() -> str:
    base = os.environ.get(CACHE_ENV_VAR)
    if base:
        return base
    return os.path.join(os.path.expanduser("~"), ".cache", "bohrsound")

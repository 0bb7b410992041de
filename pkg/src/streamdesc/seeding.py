"""Deterministic 64-bit seed derivation."""

import os

_MASK64 = 0xFFFFFFFFFFFFFFFF

SEED_ENV_VAR = "STREAMDESC_SEED"


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(seed: int, *keys: int) -> int:
    """Derive a child seed from ``seed`` and a path of integer keys.

    Distinct key paths give (with overwhelming probability) distinct,
    decorrelated 64-bit seeds.
    """
    h = _splitmix64(seed & _MASK64)
    for k in keys:
        h = _splitmix64(h ^ (k & _MASK64))
    return h


def default_seed() -> int:
    value = os.environ.get(SEED_ENV_VAR)
    return int(value) if value else 0

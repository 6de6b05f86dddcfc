"""Deterministic seed derivation.

All stochastic components draw from numpy's PCG64 generator seeded through
this module, so a single run-level seed fixes every shuffle, bootstrap and
feature subset.  String components (dataset names, model keys) are hashed
with SHA-256 rather than Python's salted ``hash()`` to keep derived seeds
stable across processes and platforms.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_seed", "rng_from"]

_MASK64 = (1 << 64) - 1


def _component_to_int(component: int | str) -> int:
    if isinstance(component, (int, np.integer)):
        return int(component) & _MASK64
    digest = hashlib.sha256(str(component).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(*components: int | str) -> int:
    """Collapse (seed, name, index, ...) into one 64-bit seed."""
    entropy = [_component_to_int(c) for c in components]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def rng_from(*components: int | str) -> np.random.Generator:
    """PCG64 generator keyed by the given components."""
    return np.random.Generator(np.random.PCG64(derive_seed(*components)))

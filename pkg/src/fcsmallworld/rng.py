"""Seeded random streams.

Every random draw in the package goes through :func:`make_rng`, which wraps
numpy's Philox-4x64 counter-based bit generator keyed by a 64-bit integer.
Normal variates come from ``Generator.standard_normal`` (numpy's ziggurat
method), so a (key, numpy version) pair fixes every output.

Per-task keys are derived with :func:`derive_seed`, a SplitMix64 chain over
the master seed and a sequence of integer/float/string components. Floats are
mixed by their IEEE-754 bit pattern and strings by their UTF-8 bytes, so a key
depends only on the parameter *values*, never on where they sit in a grid.
"""

from __future__ import annotations

import struct

import numpy as np

MASK64 = (1 << 64) - 1

# stream tags used by the sweep
STREAM_SC = "sc"
STREAM_NOISE = "noise"
STREAM_TIE = "tie"
STREAM_NULL = "null"


def splitmix64(x: int) -> int:
    """One SplitMix64 output step (Steele, Lea & Flood 2014)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _component_words(value) -> list[int]:
    if isinstance(value, (bool, np.bool_)):
        return [1, int(value)]
    if isinstance(value, (int, np.integer)):
        return [2, int(value) & MASK64]
    if isinstance(value, (float, np.floating)):
        (bits,) = struct.unpack("<Q", struct.pack("<d", float(value)))
        return [3, bits]
    if isinstance(value, str):
        raw = value.encode("utf-8")
        words = [4, len(raw)]
        for k in range(0, len(raw), 8):
            words.append(int.from_bytes(raw[k:k + 8].ljust(8, b"\0"), "little"))
        return words
    raise TypeError(f"cannot mix seed component of type {type(value).__name__}")


def derive_seed(master_seed: int, *components) -> int:
    """Mix a master seed and components into a 64-bit key.

    Each component is prefixed with a type tag, so ``1`` and ``1.0`` and
    ``"1"`` give different keys.
    """
    h = splitmix64(int(master_seed) & MASK64)
    for comp in components:
        for word in _component_words(comp):
            h = splitmix64(h ^ word)
    return h


def make_rng(seed: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))

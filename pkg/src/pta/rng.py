"""Seedable deterministic generator for probabilistic transitions.

splitmix64 is used because its entire state is a single 64-bit word, which
makes interpreter frames trivially copyable and replay byte-exact.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def next_u64(state: int) -> tuple[int, int]:
    """Advance one splitmix64 step. Returns (new_state, output)."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return state, z


def next_uniform(state: int) -> tuple[int, float]:
    """Advance one step and map the output into [0, 1)."""
    state, z = next_u64(state)
    return state, z / 2**64

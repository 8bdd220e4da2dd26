"""Counter-based pseudo-randomness: a uniform draw is a pure function of its key.

Keys are tuples of integers such as (seed, vertex_id) or
(seed, instance_id, draw_index). SplitMix64 finalisation mixes each component.
"""

_MASK = (1 << 64) - 1
_INV_2_53 = 2.0 ** -53


def _mix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def keyed_uniform(*key: int) -> float:
    """Uniform float in [0, 1) determined by ``key``."""
    h = 0x243F6A8885A308D3
    for k in key:
        h = _mix(h ^ (k & _MASK))
    return (h >> 11) * _INV_2_53


def keyed_coin(p: float, *key: int) -> bool:
    if p >= 1.0:
        return True
    return keyed_uniform(*key) < p

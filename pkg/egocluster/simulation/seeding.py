# -*- coding: utf-8 -*-
# Описание: Зёрна репликаций через финализатор SplitMix64.

MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def mix(base_seed: int, r: int) -> int:
    """
    seed_r = splitmix64(base_seed + (r + 1)·0x9E3779B97F4A7C15 mod 2^64).
    Зерно репликации зависит только от (base_seed, r).

    :param base_seed: базовое 64-битное зерно.
    :param r: номер репликации.
    :return: 64-битное зерно.
    """
    if r < 0:
        raise ValueError("replication index must be nonnegative")
    return splitmix64(base_seed + (r + 1) * GOLDEN_GAMMA)

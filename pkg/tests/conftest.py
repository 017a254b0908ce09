"""Shared brute-force oracles for the jump and variation dynamic programs.

Everything here enumerates subsequences literally, so it is exponential in
the path length and only usable for short paths. The helpers are vectorized
across a whole batch of paths at once, which keeps even the exhaustive
length-6 sweep in the acceptance suite cheap.
"""

import itertools
import math

import numpy as np

# matches the relative slack jump_count grants at the threshold
SLACK = 1e-12


def subsequences(n):
    """All index tuples of length >= 2, in increasing order."""
    out = []
    for m in range(2, n + 1):
        out.extend(itertools.combinations(range(n), m))
    return out


def brute_jump_count_batch(values, lam):
    """Exhaustive lambda-jump count; values has one path per row."""
    vals = np.asarray(values)
    best = np.zeros(vals.shape[0], dtype=np.int64)
    cut = lam * (1.0 - SLACK)
    for idx in subsequences(vals.shape[1]):
        gaps = np.abs(np.diff(vals[:, list(idx)], axis=1))
        ok = np.all(gaps >= cut, axis=1)
        best = np.maximum(best, np.where(ok, len(idx) - 1, 0))
    return best


def brute_variation_batch(values, r):
    """Exhaustive r-variation; values has one path per row."""
    vals = np.asarray(values)
    n = vals.shape[1]
    best = np.zeros(vals.shape[0])
    if math.isinf(r):
        for i, j in itertools.combinations(range(n), 2):
            best = np.maximum(best, np.abs(vals[:, j] - vals[:, i]))
        return best
    for idx in subsequences(n):
        gaps = np.abs(np.diff(vals[:, list(idx)], axis=1))
        best = np.maximum(best, np.sum(gaps**r, axis=1))
    return best ** (1.0 / r)

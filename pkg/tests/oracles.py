"""Independent reference implementations used by the tests.

Everything here is written from the definitions with plain loops, so it shares
no code with the package under test.
"""
import cmath
import itertools
import math

import numpy as np


def in_block(k, s):
    """[2^(s_j - 1)] <= |k_j| < 2^(s_j) for every coordinate."""
    return all(int(2 ** (sj - 1)) <= abs(kj) < 2 ** sj for kj, sj in zip(k, s))


def block(s):
    top = 2 ** max(s)
    rng = range(-top, top + 1)
    return {k for k in itertools.product(rng, repeat=len(s)) if in_block(k, s)}


def layer(j, d):
    out = set()
    for s in itertools.product(range(j + 1), repeat=d):
        if sum(s) == j:
            out |= block(s)
    return out


def cross(n, d):
    out = set()
    for j in range(n + 1):
        out |= layer(j, d)
    return out


def evaluate(coefs, x):
    """coefs: dict k-tuple -> complex; x: tuple of angles."""
    return sum(c * cmath.exp(1j * sum(ki * xi for ki, xi in zip(k, x))) for k, c in coefs.items())


def gram(freqs, points):
    m = len(points)
    G = np.zeros((len(freqs), len(freqs)), dtype=complex)
    for a, k in enumerate(freqs):
        for b, l in enumerate(freqs):
            G[a, b] = sum(cmath.exp(1j * sum((ki - li) * x for ki, li, x in zip(k, l, pt)))
                          for pt in points) / m
    return G


def best_v_term(Phi, f0, v):
    """min over v-subsets of the discrete L2 distance (mean-square normalization)."""
    m, N = Phi.shape
    best = math.inf
    for S in itertools.combinations(range(N), v):
        A = Phi[:, S]
        c, *_ = np.linalg.lstsq(A, f0, rcond=None)
        best = min(best, math.sqrt(np.mean(np.abs(f0 - A @ c) ** 2)))
    return best

"""Structural function classes defined through coefficient quasi-norms.

Two families are handled:

* ``W^{a,b}_{A_beta}``: for every hyperbolic layer j,
  ``|f_j|_{A_beta} <= 2^{-a j} * max(j, 1)^{(d-1) b}``;
* ``A^r_beta``: for every l_inf dyadic shell j,
  ``(sum |a_k|^beta)^{1/beta} <= 2^{-r j}``.

Membership is certified for the stored coefficient representation only.
"""
from dataclasses import dataclass

import numpy as np

from .index_sets import layer, linf_shell
from .trig import SparseCoefFn

__all__ = [
    "ClassParamsW",
    "ClassParamsA",
    "Membership",
    "dyadic_levels",
    "layer_index",
    "shell_index",
    "delta_s",
    "layer_part",
    "layer_parts",
    "a_beta_norm",
    "w_bound",
    "a_bound",
    "membership_W",
    "membership_A",
    "generate_W",
    "generate_A",
    "default_j_max",
    "PROFILES",
]

PROFILES = ("saturating", "saturating-spike", "random-sparse")

# Relative slack when comparing a layer quasi-norm with its bound.
_MEMBERSHIP_RTOL = 1e-12


@dataclass(frozen=True)
class ClassParamsW:
    a: float
    b: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")


@dataclass(frozen=True)
class ClassParamsA:
    r: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("r must be positive")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership test.

    ``j`` and ``excess`` describe the first violated layer (``excess`` is the
    ratio quasi-norm / bound); ``worst_ratio`` is the largest ratio seen.
    """
    member: bool
    j: int | None = None
    excess: float | None = None
    worst_ratio: float = 0.0


def default_j_max(d):
    return 12 if d == 1 else (8 if d == 2 else 6)


def dyadic_levels(indices):
    """Per-coordinate dyadic level s_j of each k (0 for k_j = 0, else bit length of |k_j|)."""
    a = np.abs(np.asarray(indices, dtype=np.int64))
    out = np.zeros_like(a)
    nz = a > 0
    out[nz] = np.floor(np.log2(a[nz])).astype(np.int64) + 1
    return out


def layer_index(indices):
    """||s||_1 of the block containing each k."""
    return dyadic_levels(indices).sum(axis=1)


def shell_index(indices):
    """Level j of the l_inf shell [2^(j-1)] <= ||k||_inf < 2^j containing each k."""
    linf = np.abs(np.asarray(indices, dtype=np.int64)).max(axis=1, keepdims=True)
    return dyadic_levels(linf)[:, 0]


def delta_s(f, s):
    """Restriction of f to the dyadic block rho(s)."""
    s = np.atleast_1d(np.asarray(s, dtype=np.int64))
    if s.shape[0] != f.d:
        raise ValueError("dyadic vector length differs from the dimension of f")
    mask = np.all(dyadic_levels(f.indices) == s[None, :], axis=1)
    return f.restrict(mask)


def layer_part(f, j):
    """f_j: the part of f with frequencies in the layer Delta Q_j."""
    return f.restrict(layer_index(f.indices) == j)


def layer_parts(f):
    """``{j: f_j}`` for every nonempty layer of f."""
    lj = layer_index(f.indices)
    return {int(j): f.restrict(lj == j) for j in np.unique(lj)}


def a_beta_norm(f, beta):
    """(sum_k |a_k|^beta)^(1/beta); accepts a SparseCoefFn or a coefficient array."""
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    coef = f.coef if isinstance(f, SparseCoefFn) else np.asarray(f)
    a = np.abs(coef)
    if a.size == 0:
        return 0.0
    if beta == 1:
        return float(a.sum())
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((a / scale) ** beta) ** (1.0 / beta))


def w_bound(j, params, d):
    jbar = max(j, 1)
    return 2.0 ** (-params.a * j) * float(jbar) ** ((d - 1) * params.b)


def a_bound(j, params):
    return 2.0 ** (-params.r * j)


def _membership(f, groups, bound, beta):
    worst = 0.0
    first = None
    for j in np.unique(groups):
        j = int(j)
        q = a_beta_norm(f.coef[groups == j], beta)
        ratio = q / bound(j)
        worst = max(worst, ratio)
        if first is None and ratio > 1.0 + _MEMBERSHIP_RTOL:
            first = (j, ratio)
    if first is None:
        return Membership(True, worst_ratio=worst)
    return Membership(False, j=first[0], excess=first[1], worst_ratio=worst)


def membership_W(f, params):
    return _membership(f, layer_index(f.indices), lambda j: w_bound(j, params, f.d), params.beta)


def membership_A(f, params, d=None):
    if d is not None and d != f.d:
        raise ValueError("dimension mismatch")
    return _membership(f, shell_index(f.indices), lambda j: a_bound(j, params), params.beta)


def _fill_group(members, target, beta, rng, profile, zero_freq_real):
    """Coefficients on ``members`` whose A_beta quasi-norm hits ``target``
    (scaled by a uniform (0, 1] factor for the random-sparse profile)."""
    n_all = len(members)
    if profile == "saturating":
        rows = np.arange(n_all)
        mags = np.full(n_all, target / n_all ** (1.0 / beta))
    elif profile == "saturating-spike":
        rows = np.array([rng.integers(n_all)])
        mags = np.array([target])
    elif profile == "random-sparse":
        n = int(rng.integers(1, n_all + 1))
        rows = np.sort(rng.choice(n_all, size=n, replace=False))
        w = rng.random(n) + 1e-3
        scale = 1.0 - rng.random()  # in (0, 1]
        mags = w * (scale * target / a_beta_norm(w, beta))
    else:
        raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    idx = members[rows]
    phases = np.exp(2j * np.pi * rng.random(len(rows)))
    if zero_freq_real:
        phases[np.all(idx == 0, axis=1)] = 1.0
    return idx, mags * phases


def _generate(groups, bound, beta, seed, profile, d):
    rng = np.random.default_rng(seed)
    all_idx, all_coef = [], []
    for j, members in groups:
        idx, coef = _fill_group(members.array, bound(j), beta, rng, profile, True)
        all_idx.append(idx)
        all_coef.append(coef)
    return SparseCoefFn(np.vstack(all_idx), np.concatenate(all_coef), d=d)


def generate_W(params, d, j_max=None, seed=0, profile="saturating"):
    """A member of W^{a,b}_{A_beta} with layers 0..j_max.

    ``saturating`` spreads the layer bound uniformly over the whole layer,
    ``saturating-spike`` puts it on one random index per layer, and
    ``random-sparse`` uses a random subset with the bound scaled by a uniform
    factor in (0, 1]. Phases are random; the constant term is real positive.
    """
    if j_max is None:
        j_max = default_j_max(d)
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    groups = [(j, layer(j, d)) for j in range(j_max + 1)]
    return _generate(groups, lambda j: w_bound(j, params, d), params.beta, seed, profile, d)


def generate_A(params, d, j_max=None, seed=0, profile="saturating"):
    """A member of A^r_beta with l_inf shells 0..j_max (profiles as in :func:`generate_W`)."""
    if j_max is None:
        j_max = default_j_max(d)
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    groups = [(j, linf_shell(j, d)) for j in range(j_max + 1)]
    return _generate(groups, lambda j: a_bound(j, params), params.beta, seed, profile, d)

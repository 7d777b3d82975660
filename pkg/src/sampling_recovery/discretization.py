"""Random point sets and L_2 universal sampling discretization checks.

For an orthonormal system the discretization inequalities
``c_lo ||f||_2^2 <= (1/m) sum |f(xi_j)|^2 <= c_hi ||f||_2^2`` on span{psi_k : k in J}
are equivalent to ``c_lo <= lambda_min <= lambda_max <= c_hi`` for the discrete
Gram matrix of the columns in J.  Universality over all u-term subspaces of a
dictionary is checked subset by subset.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .trig import PointSet, TrigSystem

__all__ = [
    "UdReport",
    "UdCapExceeded",
    "draw_points",
    "discrete_gram",
    "gram_spectrum",
    "verify_ud",
    "verify_one_sided",
    "m_budget",
    "EXHAUSTIVE_CAP",
]

EXHAUSTIVE_CAP = 10**6
_BATCH = 4096


class UdCapExceeded(ValueError):
    """Too many subsets for exhaustive checking; use ``mode="sampled"``."""


@dataclass
class UdReport:
    subspaces_checked: int
    mode: str
    worst_lower: float
    worst_upper: float
    passed: bool
    constants: tuple
    m: int = 0
    u: int = 0
    trials: int = 0
    seed: int | None = None

    @property
    def one_sided_D(self):
        """Smallest D with ||f||_2 <= D ||f||_{L_2(mu_m)} on the checked subspaces."""
        return math.inf if self.worst_lower <= 0 else 1.0 / math.sqrt(self.worst_lower)

    def csv_row(self):
        return {
            "m": self.m, "u": self.u, "mode": self.mode, "trials": self.trials,
            "worst_lower": f"{self.worst_lower:.12g}", "worst_upper": f"{self.worst_upper:.12g}",
            "pass": int(self.passed), "seed": "" if self.seed is None else self.seed,
        }


def draw_points(m, d=1, seed=None):
    """m i.i.d. uniform points on [0, 2*pi)^d from a seeded stream."""
    if m < 1:
        raise ValueError("m must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return PointSet(rng.uniform(0.0, 2.0 * np.pi, size=(m, d)))


def discrete_gram(xi, J, system=None):
    """G[k, l] = (1/m) sum_j psi_k(xi_j) conj(psi_l(xi_j)) for k, l in J."""
    system = system or TrigSystem()
    Phi = system.matrix(J, xi)
    return (Phi.T @ Phi.conj()) / xi.m


def gram_spectrum(xi, J, system=None):
    """Extreme eigenvalues ``(lambda_min, lambda_max)`` of the discrete Gram matrix."""
    ev = np.linalg.eigvalsh(discrete_gram(xi, J, system))
    return float(ev[0]), float(ev[-1])


def _subset_extremes(G, subsets):
    lo, hi = math.inf, -math.inf
    for start in range(0, len(subsets), _BATCH):
        S = subsets[start:start + _BATCH]
        ev = np.linalg.eigvalsh(G[S[:, :, None], S[:, None, :]])
        lo = min(lo, float(ev[:, 0].min()))
        hi = max(hi, float(ev[:, -1].max()))
    return lo, hi


def _scan(xi, dictionary, u, mode, trials, seed, cap, system):
    N = len(dictionary)
    if not 1 <= u <= N:
        raise ValueError(f"sparsity u={u} must lie in [1, {N}]")
    G = discrete_gram(xi, dictionary, system)
    if mode == "exhaustive":
        total = math.comb(N, u)
        if total > cap:
            raise UdCapExceeded(
                f"C({N}, {u}) = {total} subsets exceeds the cap {cap}; use mode='sampled'")
        lo, hi = math.inf, -math.inf
        combos = itertools.combinations(range(N), u)
        while True:
            chunk = np.array(list(itertools.islice(combos, _BATCH)), dtype=np.int64)
            if chunk.size == 0:
                break
            clo, chi = _subset_extremes(G, chunk)
            lo, hi = min(lo, clo), max(hi, chi)
        return lo, hi, total
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        subsets = np.array([np.sort(rng.choice(N, size=u, replace=False)) for _ in range(trials)],
                           dtype=np.int64)
        lo, hi = _subset_extremes(G, subsets)
        return lo, hi, trials
    raise ValueError(f"unknown mode {mode!r}")


def verify_ud(xi, dictionary, u, mode="exhaustive", trials=500, seed=0,
              c_lo=0.5, c_hi=1.5, cap=EXHAUSTIVE_CAP, system=None):
    """Check two-sided L_2 discretization on every (or ``trials`` random)
    u-element subspace of ``dictionary``.

    An exhaustive pass certifies the property for the whole collection; a
    sampled pass is evidence only (``report.mode == "sampled"``).
    """
    lo, hi, count = _scan(xi, dictionary, u, mode, trials, seed, cap, system)
    return UdReport(count, mode, lo, hi, bool(lo >= c_lo and hi <= c_hi), (c_lo, c_hi),
                    m=xi.m, u=u, trials=count, seed=seed if mode == "sampled" else None)


def verify_one_sided(xi, dictionary, u, D_target, mode="exhaustive", trials=500, seed=0,
                     cap=EXHAUSTIVE_CAP, system=None):
    """Check ``||f||_2 <= D_target * ||f||_{L_2(mu_m)}`` on u-term subspaces,
    i.e. ``lambda_min >= 1 / D_target^2``. Callers pass u = 2v for v-term recovery.
    """
    if not D_target > 0:
        raise ValueError("D_target must be positive")
    lo, hi, count = _scan(xi, dictionary, u, mode, trials, seed, cap, system)
    c_lo = 1.0 / D_target ** 2
    # lambda_min = 0 never passes, whatever D_target
    ok = lo > 0 and lo >= c_lo * (1 - 1e-12)
    return UdReport(count, mode, lo, hi, bool(ok), (c_lo, math.inf),
                    m=xi.m, u=u, trials=count, seed=seed if mode == "sampled" else None)


def m_budget(v, rule="log3", c_user=1.0):
    """ceil(c_user * v * (log 2v)^e) with e = 4 (``log4``) or e = 3 (``log3``)."""
    if v < 1:
        raise ValueError("v must be positive")
    if not c_user > 0:
        raise ValueError("c_user must be positive")
    exps = {"log4": 4, "log3": 3}
    if rule not in exps:
        raise ValueError(f"unknown rule {rule!r}; expected 'log4' or 'log3'")
    return max(1, math.ceil(c_user * v * math.log(2 * v) ** exps[rule]))

"""Sampling recovery: sample f on random points, approximate greedily, measure L_p error."""
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __schema_version__
from .classes import ClassParamsW, generate_A, generate_W, layer_index, layer_part
from .discretization import draw_points, m_budget, verify_ud
from .greedy import (BRUTE_FORCE_CAP, DictionaryOnPoints, best_v_term_discrete, greedy_a1_lp,
                     threshold_v, womp)
from .index_sets import IndexSet, hyperbolic_cross, layer
from .trig import QuadratureGrid, lp_norm_mu

__all__ = [
    "RecoveryConfig",
    "RecoveryReport",
    "default_dictionary",
    "prepare_points",
    "recover",
    "layered_approx",
    "layered_alpha",
    "layered_schedule",
    "empirical_rho",
    "REPORT_COLUMNS",
]

ALGORITHMS = ("womp", "oracle_bv", "layered")

REPORT_COLUMNS = ("schema_version", "algorithm", "d", "p", "beta", "a", "b", "v", "m", "m_rule",
                  "t", "seed", "ud_pass", "redraws", "err_lp", "err_l2_disc", "sigma_v", "iters",
                  "ms")


@dataclass
class RecoveryConfig:
    """Parameters of one recovery run.

    ``c_iter`` is the iteration multiplier: WOMP runs ceil(c_iter * v) steps and
    discretization is checked at sparsity u = ceil((1 + c_iter) v).
    """
    d: int = 1
    p: float = 2.0
    v: int = 1
    m_rule: str = "log3"
    m: int | None = None
    c_user: float = 2.0
    t: float = 1.0
    algorithm: str = "womp"
    dictionary: IndexSet | None = None
    seed: int = 0
    c_iter: float = 2.0
    verify: bool = True
    ud_trials: int = 200
    redraws: int = 10
    select: str = "max"
    oracle_cap: int = BRUTE_FORCE_CAP

    def __post_init__(self):
        if not self.p >= 2:
            raise ValueError("p must be >= 2")
        if self.v < 1:
            raise ValueError("v must be positive")
        if not 0 < self.t <= 1:
            raise ValueError("t must lie in (0, 1]")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.m_rule not in ("log3", "log4", "explicit"):
            raise ValueError("m_rule must be log3, log4 or explicit")
        if self.m_rule == "explicit" and not self.m:
            raise ValueError("m_rule=explicit requires m")

    @property
    def p_star(self):
        return min(self.p, 2.0)

    @property
    def u(self):
        return math.ceil((1 + self.c_iter) * self.v)

    @property
    def iterations(self):
        return math.ceil(self.c_iter * self.v)

    def sample_size(self):
        if self.m_rule == "explicit":
            return int(self.m)
        return m_budget(self.v, self.m_rule, self.c_user)


@dataclass
class RecoveryReport:
    algorithm: str
    d: int
    p: float
    v: int
    m: int
    m_rule: str
    t: float
    seed: int
    c_iter: float
    u: int
    dictionary_size: int
    ud_pass: bool | None
    ud_worst_lower: float | None
    ud_worst_upper: float | None
    redraws: int
    err_lp: float
    err_l2_disc: float | None
    sigma_v: float | None
    iters: int
    ms: float
    extra: dict = field(default_factory=dict)

    def csv_row(self, beta="", a="", b=""):
        def num(x):
            return "" if x is None else repr(float(x))
        return {
            "schema_version": __schema_version__, "algorithm": self.algorithm, "d": self.d,
            "p": num(self.p), "beta": beta, "a": a, "b": b, "v": self.v, "m": self.m,
            "m_rule": self.m_rule, "t": num(self.t), "seed": self.seed,
            "ud_pass": "" if self.ud_pass is None else int(self.ud_pass),
            "redraws": self.redraws, "err_lp": num(self.err_lp),
            "err_l2_disc": num(self.err_l2_disc), "sigma_v": num(self.sigma_v),
            "iters": self.iters, "ms": f"{self.ms:.1f}",
        }

    def as_dict(self):
        return asdict(self)


def default_dictionary(v, d):
    """Smallest hyperbolic cross Q_n with |Q_n| >= 4v."""
    size, n = 0, -1
    while size < 4 * v:
        n += 1
        size += len(layer(n, d))
    return hyperbolic_cross(n, d)


def prepare_points(cfg, dictionary, xi=None):
    """Draw (or accept) the point set and optionally check discretization.

    Up to ``cfg.redraws`` fresh draws are made until the sampled check at
    sparsity min(u, N) passes; the last draw is kept either way.  Returns
    ``(xi, ud_report_or_None, redraw_count)``.
    """
    u = min(cfg.u, len(dictionary))
    if xi is not None:
        rep = (verify_ud(xi, dictionary, u, mode="sampled", trials=cfg.ud_trials, seed=cfg.seed)
               if cfg.verify else None)
        return xi, rep, 0
    m = cfg.sample_size()
    rep = None
    attempts = max(1, cfg.redraws) if cfg.verify else 1
    for attempt in range(attempts):
        xi = draw_points(m, cfg.d, seed=np.random.default_rng([cfg.seed, attempt]))
        if not cfg.verify:
            return xi, None, 0
        rep = verify_ud(xi, dictionary, u, mode="sampled", trials=cfg.ud_trials,
                        seed=cfg.seed + attempt)
        if rep.passed:
            return xi, rep, attempt
    return xi, rep, attempts - 1


def _error_lp(f, approx, p):
    diff = (f - approx).pruned()
    if len(diff) == 0:
        return 0.0
    grid = QuadratureGrid.covering(diff.max_freq(), f.d)
    return lp_norm_mu(diff, p, grid)


def recover(f, cfg, xi=None, class_params=None):
    """Recover f from point samples.

    ``womp`` and ``oracle_bv`` use only the samples f(xi); ``layered`` is the
    coefficient-based constructive approximant (it needs ``class_params`` of a
    W class and ignores the points).  Returns ``(approximant, report)``.
    """
    start = time.perf_counter()
    if f.d != cfg.d:
        raise ValueError("dimension of f differs from cfg.d")
    dictionary = cfg.dictionary if cfg.dictionary is not None else default_dictionary(cfg.v, cfg.d)

    if cfg.algorithm == "layered":
        if not isinstance(class_params, ClassParamsW):
            raise ValueError("layered recovery needs ClassParamsW")
        approx = layered_approx(f, cfg.v, class_params, p=cfg.p)
        err = _error_lp(f, approx, cfg.p)
        ms = 1000 * (time.perf_counter() - start)
        return approx, RecoveryReport("layered", cfg.d, cfg.p, cfg.v, 0, cfg.m_rule, cfg.t,
                                      cfg.seed, cfg.c_iter, cfg.u, len(dictionary), None, None,
                                      None, 0, err, None, None, len(approx), ms)

    xi, ud, redraws = prepare_points(cfg, dictionary, xi)
    y = f(xi)
    D = DictionaryOnPoints.build(dictionary, xi)
    sigma = None
    feasible = math.comb(D.N, cfg.v) <= cfg.oracle_cap
    if cfg.algorithm == "womp":
        K = min(cfg.iterations, D.m, D.N)
        trace = womp(y, D, t=cfg.t, iterations=K, select=cfg.select, seed=cfg.seed)
        approx = D.to_coef_fn(trace.picks, trace.coefficients)
        err_disc = trace.residual_norms[-1]
        iters = trace.iterations
        if feasible:
            sigma = best_v_term_discrete(y, D, cfg.v, cap=cfg.oracle_cap).error
    else:
        best = best_v_term_discrete(y, D, cfg.v, cap=cfg.oracle_cap)
        approx = D.to_coef_fn(best.positions, best.coefficients)
        err_disc = sigma = best.error
        iters = cfg.v

    err = _error_lp(f, approx, cfg.p)
    ms = 1000 * (time.perf_counter() - start)
    report = RecoveryReport(cfg.algorithm, cfg.d, cfg.p, cfg.v, xi.m, cfg.m_rule, cfg.t, cfg.seed,
                            cfg.c_iter, cfg.u, len(dictionary),
                            None if ud is None else ud.passed,
                            None if ud is None else ud.worst_lower,
                            None if ud is None else ud.worst_upper,
                            redraws, err, err_disc, sigma, iters, ms)
    return approx, report


def layered_alpha(params, p):
    """alpha with alpha * (1/beta - 1/p*) = a/2, p* = min(p, 2)."""
    kappa = 1.0 / params.beta - 1.0 / min(p, 2.0)
    if kappa <= 0:
        raise ValueError("1/beta - 1/p* must be positive")
    return params.a / (2.0 * kappa)


def layered_schedule(n, alpha, d, j_last):
    """``{j: [2^(n - alpha (j - n)) j^(d-1)]}`` for j = n+1 .. j_last."""
    return {j: int(math.floor(2.0 ** (n - alpha * (j - n)) * j ** (d - 1)))
            for j in range(n + 1, j_last + 1)}


def layered_approx(f, v_total, params, p=2.0, xi=None):
    """Layer-by-layer constructive approximant with at most ``v_total`` terms.

    Keeps every coefficient of f in Q_n (n largest with |Q_n| <= v_total/2);
    each later layer j gets its v_j largest coefficients plus v_j relaxed-greedy
    terms for the remainder.  Far layers are trimmed first if the budget
    |Q_n| + sum 2 v_j would exceed ``v_total``.  With ``xi`` the greedy works
    in the mixed measure.
    """
    d = f.d
    n, size = None, 0
    while True:
        nxt = size + len(layer(0 if n is None else n + 1, d))
        if nxt > v_total / 2:
            break
        n = 0 if n is None else n + 1
        size = nxt
    if n is None:
        return threshold_v(f, v_total)[0]

    lj = layer_index(f.indices) if len(f) else np.zeros(0, dtype=np.int64)
    head = f.restrict(lj <= n)
    j_last = int(lj.max()) if len(f) else n
    vj = layered_schedule(n, layered_alpha(params, p), d, j_last)
    budget = v_total - size
    for j in sorted(vj, reverse=True):
        while vj[j] > 0 and 2 * sum(vj.values()) > budget:
            vj[j] -= 1

    approx = head
    for j, count in vj.items():
        if count == 0:
            continue
        fj = layer_part(f, j).pruned()
        if len(fj) == 0:
            continue
        kept, _ = threshold_v(fj, count)
        rest = (fj - kept).pruned()
        approx = approx + kept
        if len(rest):
            approx = approx + greedy_a1_lp(rest, rest.support, count, p, xi=xi)
    return approx.pruned()


def _member(kind, params, d, j_max, seed, profile):
    if kind == "W":
        return generate_W(params, d, j_max, seed=seed, profile=profile)
    return generate_A(params, d, j_max, seed=seed, profile=profile)


def _stream_seed(*keys):
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def empirical_rho(params, cfg, v_values, trials=1, seed=0, profile="saturating", j_max=None,
                  members=None):
    """Worst recovery error over class members for each v.

    For each v one point set is drawn (shared by all ``trials`` members of
    that block) and the largest errors are kept.  Members come from
    ``generate_W``/``generate_A`` according to the type of ``params``, or from
    the ``members(v, trial)`` callback when given.  Returns one row dict per v
    with the report columns.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = "W" if isinstance(params, ClassParamsW) else "A"
    rows = []
    for v in v_values:
        cfg_v = replace(cfg, v=int(v), seed=_stream_seed(seed, v))
        dictionary = cfg_v.dictionary if cfg_v.dictionary is not None else \
            default_dictionary(cfg_v.v, cfg_v.d)
        cfg_v = replace(cfg_v, dictionary=dictionary)
        xi = None
        redraws, ud = 0, None
        if cfg_v.algorithm != "layered":
            xi, ud, redraws = prepare_points(cfg_v, dictionary)
        worst = None
        for trial in range(trials):
            if members is not None:
                f = members(v, trial)
            else:
                f = _member(kind, params, cfg.d, j_max, _stream_seed(seed, v, trial), profile)
            _, rep = recover(f, replace(cfg_v, verify=False), xi=xi,
                             class_params=params if kind == "W" else None)
            if worst is None:
                worst = rep
            else:
                worst.err_lp = max(worst.err_lp, rep.err_lp)
                if rep.err_l2_disc is not None:
                    worst.err_l2_disc = max(worst.err_l2_disc, rep.err_l2_disc)
                if rep.sigma_v is not None:
                    worst.sigma_v = max(worst.sigma_v, rep.sigma_v)
                worst.iters = max(worst.iters, rep.iters)
                worst.ms += rep.ms
        worst.redraws = redraws
        worst.ud_pass = None if ud is None else ud.passed
        worst.ud_worst_lower = None if ud is None else ud.worst_lower
        worst.ud_worst_upper = None if ud is None else ud.worst_upper
        beta = params.beta
        a = params.a if kind == "W" else params.r
        b = params.b if kind == "W" else ""
        rows.append(worst.csv_row(beta=repr(float(beta)), a=repr(float(a)),
                                  b=repr(float(b)) if b != "" else ""))
    return rows


"""Greedy sparse approximation in L_2(xi) and L_p, plus brute-force oracles.

The discrete Hilbert space is L_2 of the uniform probability measure on m
sample points; a dictionary is the m x N table of the system restricted to
those points.  Everything here is deterministic given inputs and seed.
"""
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .classes import a_beta_norm
from .index_sets import IndexSet, full_cube
from .trig import (OVERSAMPLING, QuadratureGrid, SparseCoefFn, TrigSystem,
                   grid_values, lp_mean, trig_matrix)

__all__ = [
    "DictionaryOnPoints",
    "WompTrace",
    "BestTerm",
    "UpResult",
    "NikolskiiResult",
    "OracleCapExceeded",
    "womp",
    "best_v_term_discrete",
    "best_v_term_sup",
    "threshold_v",
    "tail_bound",
    "greedy_a1_lp",
    "greedy_a1_lp_path",
    "up_constant",
    "nikolskii_check",
    "riesz_bessel_check",
    "BRUTE_FORCE_CAP",
]

BRUTE_FORCE_CAP = 200_000
_DEPENDENT_RTOL = 1e-10


class OracleCapExceeded(ValueError):
    """Brute force would visit more subsets than allowed; use :func:`womp`."""


class DictionaryOnPoints:
    """A finite system restricted to a point set.

    ``values[j, n]`` is the n-th dictionary element at the j-th point.
    ``col_norms`` are the L_2(mu_m) norms of the columns; columns with zero
    norm are listed in ``zero_columns`` and never selected.
    """

    def __init__(self, values, indices=None, xi=None):
        values = np.asarray(values, dtype=np.complex128)
        if values.ndim != 2:
            raise ValueError("values must be an m x N table")
        self.values = values
        if indices is None:
            indices = IndexSet(np.arange(values.shape[1])[:, None], d=1)
        if len(indices) != values.shape[1]:
            raise ValueError("one index per column is required")
        self.indices = indices
        self.xi = xi
        self.col_norms = np.sqrt(np.mean(np.abs(values) ** 2, axis=0))
        self.zero_columns = np.flatnonzero(self.col_norms == 0)

    @classmethod
    def build(cls, indices, xi, system=None):
        system = system or TrigSystem()
        return cls(system.matrix(indices, xi), indices, xi)

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def N(self):
        return self.values.shape[1]

    def index(self, pos):
        return self.indices.members[pos]

    def to_coef_fn(self, positions, coefficients):
        """Map column coefficients back to a SparseCoefFn over the dictionary indices."""
        return SparseCoefFn(self.indices.array[list(positions)], coefficients, d=self.indices.d)


@dataclass
class WompTrace:
    picks: list
    picked_indices: list
    residual_norms: list
    coefficients: np.ndarray
    t: float
    singular: bool = False
    residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def iterations(self):
        return len(self.picks)

    def csv_rows(self):
        rows = [{"iteration": 0, "picked_index": "", "residual_norm": f"{self.residual_norms[0]:.15g}"}]
        for i, (k, r) in enumerate(zip(self.picked_indices, self.residual_norms[1:]), start=1):
            rows.append({"iteration": i, "picked_index": " ".join(map(str, k)),
                         "residual_norm": f"{r:.15g}"})
        return rows


def _dnorm(x):
    return math.sqrt(float(np.mean(np.abs(x) ** 2)))


def womp(f0, dictionary, t=1.0, iterations=1, select="max", seed=None):
    """Weak Orthogonal Matching Pursuit in L_2(mu_m).

    Parameters
    ----------
    f0 : array of m samples
    dictionary : DictionaryOnPoints
    t : weakness parameter in (0, 1]; t = 1 is OMP
    iterations : number of steps K (K <= min(m, N))
    select : which admissible column to take at each step.
        ``"max"`` takes the largest normalized inner product, ``"first"`` the
        lexicographically first admissible column, ``"random"`` a seeded
        uniform choice among admissible columns.

    The projection is kept as an incrementally orthonormalized basis of the
    picked columns; final coefficients are a minimum-norm least-squares fit
    against the unnormalized columns.  The run stops early once the residual
    is orthogonal to every column.
    """
    f0 = np.asarray(f0, dtype=np.complex128)
    Phi = dictionary.values
    m, N = Phi.shape
    if f0.shape != (m,):
        raise ValueError(f"f0 must have {m} samples")
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    if iterations < 0 or iterations > m or iterations > N:
        raise ValueError(f"iterations={iterations} must not exceed m={m} or N={N}")
    if select not in ("max", "first", "random"):
        raise ValueError(f"unknown selection rule {select!r}")
    rng = np.random.default_rng(seed) if select == "random" else None

    usable = dictionary.col_norms > 0
    inv_norm = np.zeros(N)
    inv_norm[usable] = 1.0 / dictionary.col_norms[usable]
    scale = _dnorm(f0)

    r = f0.copy()
    basis = np.zeros((m, iterations), dtype=np.complex128)  # orthonormal basis of the picked span
    rank = 0
    picks, norms = [], [scale]
    singular = False
    available = usable.copy()
    for _ in range(iterations):
        ip = np.abs(Phi.conj().T @ r) / m * inv_norm
        ip[~available] = -1.0
        best = ip.max()
        if best <= 1e-14 * max(scale, 1e-300):
            break
        admissible = np.flatnonzero(ip >= t * best * (1 - 1e-12))
        if select == "max":
            g = int(np.argmax(ip))
        elif select == "first":
            g = int(admissible[0])
        else:
            g = int(rng.choice(admissible))
        picks.append(g)
        available[g] = False

        col = Phi[:, g].copy()
        orig = np.linalg.norm(col)
        Q = basis[:, :rank]
        for _ in range(2):  # Gram-Schmidt, repeated once for stability
            col -= Q @ (Q.conj().T @ col)
        nrm = np.linalg.norm(col)
        if nrm <= _DEPENDENT_RTOL * orig:
            singular = True
        else:
            q = col / nrm
            basis[:, rank] = q
            rank += 1
            r = r - q * np.vdot(q, r)
        norms.append(_dnorm(r))

    if picks:
        coef, *_ = np.linalg.lstsq(Phi[:, picks], f0, rcond=None)
        if singular:
            warnings.warn("WOMP picked numerically dependent columns; "
                          "coefficients are the minimum-norm least-squares solution",
                          RuntimeWarning, stacklevel=2)
    else:
        coef = np.zeros(0, dtype=np.complex128)
    return WompTrace(picks=picks, picked_indices=[dictionary.index(p) for p in picks],
                     residual_norms=norms, coefficients=coef, t=t, singular=singular,
                     residual=r)


@dataclass
class BestTerm:
    positions: tuple
    indices: list
    coefficients: np.ndarray
    error: float

    def csv_row(self, v):
        return {"v": v, "sigma_v": f"{self.error:.15g}",
                "argmin_subset": ";".join(" ".join(map(str, k)) for k in self.indices)}


def _lstsq_error(A, y):
    c, *_ = np.linalg.lstsq(A, y, rcond=None)
    return c, _dnorm(y - A @ c)


def best_v_term_discrete(f0, dictionary, v, cap=BRUTE_FORCE_CAP):
    """Exhaustive best v-term approximation of f0 in L_2(mu_m).

    Every v-subset of columns is scored through its normal equations; near-best
    candidates are then re-solved by least squares.  Ties go to the
    lexicographically first subset.
    """
    f0 = np.asarray(f0, dtype=np.complex128)
    Phi = dictionary.values
    m, N = Phi.shape
    if not 0 <= v <= N:
        raise ValueError(f"v={v} must lie in [0, {N}]")
    total = math.comb(N, v)
    if total > cap:
        raise OracleCapExceeded(f"C({N}, {v}) = {total} subsets exceeds cap {cap}; use womp")
    if v == 0:
        return BestTerm((), [], np.zeros(0, complex), _dnorm(f0))

    G = Phi.conj().T @ Phi
    b = Phi.conj().T @ f0
    energy = float(np.vdot(f0, f0).real)
    subsets = np.array(list(itertools.combinations(range(N), v)), dtype=np.int64)
    scores = np.empty(len(subsets))
    for start in range(0, len(subsets), 20000):
        S = subsets[start:start + 20000]
        Gs = G[S[:, :, None], S[:, None, :]]
        bs = b[S]
        x = np.einsum("bij,bj->bi", np.linalg.pinv(Gs, hermitian=True), bs)
        captured = np.einsum("bi,bi->b", bs.conj(), x).real
        scores[start:start + 20000] = energy - captured
    floor = scores.min()
    candidates = np.flatnonzero(scores <= floor + 1e-9 * max(energy, 1e-300))

    best = None
    for i in candidates:
        S = tuple(int(s) for s in subsets[i])
        c, err = _lstsq_error(Phi[:, S], f0)
        if best is None or err < best[2] - 1e-13 * max(math.sqrt(energy / m), 1e-300):
            best = (S, c, err)
    S, c, err = best
    return BestTerm(S, [dictionary.index(s) for s in S], c, err)


def threshold_v(f, v):
    """Keep the v largest |a_k| (ties: lexicographic); return (kept, l1 mass of the rest)."""
    if v < 0:
        raise ValueError("v must be nonnegative")
    order = np.argsort(-np.abs(f.coef), kind="stable")
    keep = np.zeros(len(f), dtype=bool)
    keep[order[:v]] = True
    tail = float(np.abs(f.coef[~keep]).sum())
    return f.restrict(keep), tail


def tail_bound(v, f, beta):
    """Right-hand side (v+1)^(1-1/beta) |f|_{A_beta} of the thresholding tail estimate."""
    return (v + 1) ** (1.0 - 1.0 / beta) * a_beta_norm(f, beta)


# ---------------------------------------------------------------------------
# Relaxed greedy over the A_1 hull in L_p


class _LpMeasure:
    """L_p(mu), L_p(mu_m) or the mixed measure, with values on grid and points."""

    def __init__(self, p, grid, xi):
        self.p = p
        self.grid = grid
        self.xi = xi

    def norm(self, vg, vx):
        p = self.p
        parts = []
        if vg is not None:
            parts.append(np.mean(np.abs(vg) ** p))
        if vx is not None:
            parts.append(np.mean(np.abs(vx) ** p))
        return float(np.mean(parts) ** (1.0 / p))

    def weight_grad(self, r):
        a = np.abs(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(a > 0, a ** (self.p - 2), 0.0)
        return w * r


def _grid_correlations(F, grid, kidx):
    """(1/G^d) sum_x F(x) conj(psi_k(x)) for every k in kidx, via one FFT."""
    G = grid.G
    spec = np.fft.fftn(F.reshape((G,) * grid.d)) / grid.size
    return spec[tuple(np.mod(kidx, G).T)]


def greedy_a1_lp_path(f, indices, steps, p, grid=None, xi=None):
    """Run the relaxed greedy for ``steps`` iterations.

    Returns a list of ``(approximant, error)`` after each step.  The greedy
    works on the hull of {eps * S * psi_k : eps in {1, -1, i, -i}, k in indices}
    with S = sum_k |Re a_k| + |Im a_k| (the A_1 norm for real
    coefficients); each step mixes the current approximant with the
    best extreme point, g <- (1 - lam) g + lam * h, lam chosen by line search.
    With ``xi`` the norm is taken under the mixed measure (mu + mu_m)/2.
    """
    if not 1 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    idx = indices.array if isinstance(indices, IndexSet) else np.asarray(indices)
    d = f.d
    M = max(f.max_freq(), int(np.abs(idx).max()) if idx.size else 0)
    if grid is None:
        grid = QuadratureGrid.covering(M, d, factor=2 if p == 2 else OVERSAMPLING)
    meas = _LpMeasure(p, grid, xi)
    nodes = grid.nodes()

    # the hull of the four multiples is an l_1 diamond in (Re, Im), so the
    # scale must be the real-imaginary l_1 mass for f to lie inside it
    S = float(np.sum(np.abs(f.coef.real) + np.abs(f.coef.imag)))
    fg = grid_values(f, grid)
    fx = f(xi) if xi is not None else None
    Px = trig_matrix(idx, xi) if xi is not None else None
    gg = np.zeros_like(fg)
    gx = None if xi is None else np.zeros_like(fx)
    coef = np.zeros(len(idx), dtype=np.complex128)
    units = np.array([1, -1, 1j, -1j])
    path = []
    for _ in range(steps):
        if S == 0:
            path.append((SparseCoefFn.zero(d), 0.0))
            continue
        rg = fg - gg
        corr = _grid_correlations(meas.weight_grad(rg), grid, idx)
        if xi is not None:
            rx = fx - gx
            corr = 0.5 * (corr + Px.conj().T @ meas.weight_grad(rx) / xi.m)
        # Re <F, eps psi_k> = Re(conj(eps) corr_k) is maximal at max(|Re|, |Im|)
        score = np.maximum(np.abs(corr.real), np.abs(corr.imag))
        k = int(np.argmax(score))
        eps = units[int(np.argmax((units.conj() * corr[k]).real))]
        hg = S * eps * np.exp(1j * (nodes @ idx[k].astype(float)))
        hx = None if xi is None else S * eps * Px[:, k]

        if p == 2 and xi is None:
            diff = hg - gg
            den = float(np.vdot(diff, diff).real)
            lam = 0.0 if den == 0 else float(np.clip(np.vdot(diff, rg).real / den, 0.0, 1.0))
        else:
            def obj(lam):
                vg = fg - (1 - lam) * gg - lam * hg
                vx = None if xi is None else fx - (1 - lam) * gx - lam * hx
                return meas.norm(vg, vx)
            res = minimize_scalar(obj, bounds=(0.0, 1.0), method="bounded",
                                  options={"xatol": 1e-12})
            lam = float(res.x)
            if obj(1.0) < res.fun:
                lam = 1.0
        gg = (1 - lam) * gg + lam * hg
        if xi is not None:
            gx = (1 - lam) * gx + lam * hx
        coef *= (1 - lam)
        coef[k] += lam * S * eps
        nz = coef != 0
        approx = SparseCoefFn(idx[nz], coef[nz], d=d)
        err = meas.norm(fg - gg, None if xi is None else fx - gx)
        path.append((approx, err))
    return path


def greedy_a1_lp(f, indices, v, p, grid=None, xi=None):
    """At most v-term approximant of f from span{psi_k : k in indices} in L_p.

    See :func:`greedy_a1_lp_path` for the algorithm; this returns the last
    approximant (the zero function when v = 0).
    """
    if v <= 0:
        return SparseCoefFn.zero(f.d)
    return greedy_a1_lp_path(f, indices, v, p, grid=grid, xi=xi)[-1][0]


# ---------------------------------------------------------------------------
# Property checkers


@dataclass
class UpResult:
    U: float
    mode: str
    pairs_checked: int
    unbounded: bool


def _orth_basis(A, rtol=1e-10):
    if A.shape[1] == 0:
        return A
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    rank = int(np.sum(s > rtol * (s[0] if s.size else 0)))
    return U[:, :rank]


def _up_ratio(Phi, A, J):
    QA = _orth_basis(Phi[:, list(A)])
    QJ = _orth_basis(Phi[:, list(J)])
    R = QA - QJ @ (QJ.conj().T @ QA) if QJ.shape[1] else QA
    s = np.linalg.svd(R, compute_uv=False)
    smin = float(s.min()) if s.size else 0.0
    return math.inf if smin <= 1e-12 else 1.0 / smin


def up_constant(dictionary, u, D_cap, cap=BRUTE_FORCE_CAP, trials=2000, seed=0):
    """Empirical constant U of the (u, D)-unconditional property.

    For each admissible pair (A, J), ``sup_{f in span A} ||f|| / dist(f, V_J)``
    equals 1 / sigma_min of the component of span A orthogonal to V_J; it is
    computed exactly rather than by sampling f.  J is always taken maximal
    (|J| = D - |A|) since enlarging J can only shrink the distance.  When the
    number of pairs exceeds ``cap`` a seeded random sample of pairs is used
    and ``mode`` is ``"sampled"``.
    """
    Phi = dictionary.values if isinstance(dictionary, DictionaryOnPoints) else np.asarray(dictionary)
    N = Phi.shape[1]
    if not 1 <= u <= D_cap:
        raise ValueError("need 1 <= u <= D")
    sizes = [(a, min(D_cap - a, N - a)) for a in range(1, min(u, N) + 1)]
    total = sum(math.comb(N, a) * math.comb(N - a, jl) for a, jl in sizes)
    worst, count = 0.0, 0
    if total <= cap:
        mode = "exhaustive"
        for a, jl in sizes:
            for A in itertools.combinations(range(N), a):
                rest = [i for i in range(N) if i not in A]
                for J in itertools.combinations(rest, jl):
                    worst = max(worst, _up_ratio(Phi, A, J))
                    count += 1
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            a, jl = sizes[int(rng.integers(len(sizes)))]
            perm = rng.permutation(N)
            worst = max(worst, _up_ratio(Phi, perm[:a], perm[a:a + jl]))
            count += 1
    return UpResult(worst, mode, count, math.isinf(worst))


@dataclass
class NikolskiiResult:
    worst_ratio: float
    bound: float
    witness: SparseCoefFn
    trials: int


def nikolskii_check(u, p, trials=500, seed=0, grid=None, d=1, max_freq=16):
    """Worst ||f||_p / ||f||_2 over random u-sparse trig polynomials.

    Frequencies are drawn without replacement from [-max_freq, max_freq]^d
    and coefficients are complex Gaussian.  The Dirichlet-type sum
    sum_{k=1..u} e^{ikx_1} is always included as the first trial.  The default
    grid has 4*max_freq + 1 nodes per axis, which makes p = 2 and p = 4 exact.
    """
    if not (2 <= p <= math.inf):
        raise ValueError("p must lie in [2, inf]")
    cube = full_cube(max_freq, d).array
    if u > len(cube):
        raise ValueError("u exceeds the number of available frequencies")
    if grid is None:
        grid = QuadratureGrid(4 * max_freq + 1, d)
    rng = np.random.default_rng(seed)
    ks = np.zeros((u, d), dtype=np.int64)
    ks[:, 0] = np.arange(1, u + 1)
    if u > max_freq:
        ks = cube[np.lexsort(np.abs(cube).T[::-1])][:u]
    candidates = [SparseCoefFn(ks, np.ones(u), d=d)]
    for _ in range(max(trials - 1, 0)):
        rows = rng.choice(len(cube), size=u, replace=False)
        c = rng.standard_normal(u) + 1j * rng.standard_normal(u)
        candidates.append(SparseCoefFn(cube[rows], c, d=d))
    worst, witness = 0.0, candidates[0]
    for f in candidates:
        vals = grid_values(f, grid)
        ratio = lp_mean(vals, p) / lp_mean(vals, 2)
        if ratio > worst:
            worst, witness = ratio, f
    bound = u ** (0.5 - (0.0 if math.isinf(p) else 1.0 / p))
    return NikolskiiResult(worst, bound, witness, len(candidates))


def riesz_bessel_check(dictionary, trials=1000, seed=0, extremal=True):
    """Empirical (R1, R2, K) of the Riesz and Bessel inequalities in L_2(mu_m).

    Ratios ||sum a_j phi_j|| / ||a||_2 are collected over complex Gaussian
    coefficient vectors; with ``extremal`` the Gram eigenvectors are added
    as trial directions, which makes the extremes exact.
    """
    Phi = dictionary.values if isinstance(dictionary, DictionaryOnPoints) else np.asarray(dictionary)
    m, N = Phi.shape
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((N, trials)) + 1j * rng.standard_normal((N, trials))
    if extremal:
        _, vecs = np.linalg.eigh(Phi.conj().T @ Phi / m)
        A = np.hstack([A, vecs])
    ratios = np.sqrt(np.mean(np.abs(Phi @ A) ** 2, axis=0)) / np.linalg.norm(A, axis=0)
    R1 = float(ratios.min())
    R2 = float(ratios.max())
    K = math.inf if R1 <= 1e-12 else 1.0 / R1 ** 2
    return R1, R2, K



def _minimax_lp(F, P, directions):
    """min_c max_{x, theta} Re(e^{-i theta} (F - P c)) as a linear program."""
    from scipy.optimize import linprog

    n = P.shape[1]
    rows, rhs = [], []
    for th in directions:
        rot = np.exp(-1j * th)
        W = rot * P
        # -(Re c Re W - Im c Im W) - s <= -Re(rot F)
        rows.append(np.hstack([-W.real, W.imag, -np.ones((P.shape[0], 1))]))
        rhs.append(-(rot * F).real)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    cost = np.zeros(2 * n + 1)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * (2 * n + 1), method="highs")
    if res.status != 0:
        raise RuntimeError(f"minimax LP failed: {res.message}")
    c = res.x[:n] + 1j * res.x[n:2 * n]
    return float(res.x[-1]), c


def best_v_term_sup(f, indices, v, grid=None, n_directions=32, cap=BRUTE_FORCE_CAP):
    """Brute-force sigma_v(f, {psi_k : k in indices})_inf on a grid.

    The complex modulus is replaced by the maximum of its projections on
    ``n_directions`` equally spaced directions, so the returned value is a lower
    bound for the grid minimax error, which in turn is at most the true
    sup-norm error; the true value is at most ``value / cos(pi / n_directions)``
    plus grid effects.  Returns ``(error, BestTerm)``.
    """
    idx = indices.array if isinstance(indices, IndexSet) else np.asarray(indices)
    N = len(idx)
    if math.comb(N, v) > cap:
        raise OracleCapExceeded(f"C({N}, {v}) subsets exceeds cap {cap}")
    if grid is None:
        M = max(f.max_freq(), int(np.abs(idx).max()))
        grid = QuadratureGrid.covering(M, f.d)
    F = grid_values(f, grid)
    Pall = trig_matrix(idx, grid.nodes())
    dirs = 2 * np.pi * np.arange(n_directions) / n_directions
    best = None
    for S in itertools.combinations(range(N), v):
        err, c = _minimax_lp(F, Pall[:, list(S)], dirs)
        if best is None or err < best[0] - 1e-12:
            best = (err, S, c)
    if best is None:
        return lp_mean(F, math.inf), BestTerm((), [], np.zeros(0, complex), lp_mean(F, math.inf))
    err, S, c = best
    members = [tuple(int(x) for x in idx[s]) for s in S]
    return err, BestTerm(S, members, c, err)

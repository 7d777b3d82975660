"""The trigonometric system e^{i(k,x)} on the torus [0, 2*pi)^d.

Functions are finitely supported coefficient maps (:class:`SparseCoefFn`).
Three measures are supported: the normalized Lebesgue measure (realised by an
equispaced :class:`QuadratureGrid`), the empirical measure of a
:class:`PointSet`, and their average (the "mixed" measure).
"""
import math
import warnings

import numpy as np

from .index_sets import IndexSet

__all__ = [
    "SparseCoefFn",
    "PointSet",
    "QuadratureGrid",
    "TrigSystem",
    "GridTooCoarseWarning",
    "trig_matrix",
    "evaluate",
    "grid_values",
    "lp_mean",
    "lp_norm_mu",
    "lp_norm_discrete",
    "lp_norm_mixed",
    "inner_product_discrete",
    "OVERSAMPLING",
]

TWO_PI = 2.0 * np.pi

# Default grid oversampling: G = OVERSAMPLING * max|k| + 1 nodes per axis.
OVERSAMPLING = 4

# Columns per chunk when building evaluation matrices.
_CHUNK = 1024


class GridTooCoarseWarning(UserWarning):
    """The quadrature grid cannot resolve the requested norm exactly."""


def _as_index_array(keys, d=None):
    arr = np.asarray(keys, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[:, None] if (d is None or d == 1) else arr[None, :]
    return arr


class SparseCoefFn:
    """Finite trigonometric sum f = sum_k a_k e^{i(k,x)}.

    Indices are kept in lexicographic order; repeated indices are summed.
    Zero coefficients are kept unless :meth:`pruned` is called, so the
    support is exactly what the caller put in.
    """

    __slots__ = ("indices", "coef")

    def __init__(self, indices, coef, d=None):
        idx = _as_index_array(indices, d)
        if idx.size == 0:
            if d is None:
                raise ValueError("empty SparseCoefFn needs an explicit dimension d")
            idx = np.zeros((0, d), dtype=np.int64)
        coef = np.asarray(coef, dtype=np.complex128).ravel()
        if coef.shape[0] != idx.shape[0]:
            raise ValueError("indices and coefficients differ in length")
        uniq, inverse = np.unique(idx, axis=0, return_inverse=True)
        summed = np.zeros(uniq.shape[0], dtype=np.complex128)
        np.add.at(summed, inverse.ravel(), coef)
        uniq.setflags(write=False)
        summed.setflags(write=False)
        self.indices = uniq
        self.coef = summed

    @classmethod
    def from_dict(cls, mapping, d=None):
        """Build from ``{k: a_k}``; integer keys are allowed when d = 1."""
        if not mapping:
            return cls.zero(d if d is not None else 1)
        keys = [(int(k),) if np.isscalar(k) else tuple(int(c) for c in k) for k in mapping]
        return cls(keys, list(mapping.values()), d=d)

    @classmethod
    def zero(cls, d):
        return cls(np.zeros((0, d), dtype=np.int64), [], d=d)

    @classmethod
    def single(cls, k, value=1.0):
        k = (int(k),) if np.isscalar(k) else tuple(int(c) for c in k)
        return cls([k], [value], d=len(k))

    @property
    def d(self):
        return self.indices.shape[1]

    @property
    def support(self):
        return IndexSet(self.indices, d=self.d)

    def __len__(self):
        return self.indices.shape[0]

    def to_dict(self):
        return {tuple(int(c) for c in k): complex(a) for k, a in zip(self.indices, self.coef)}

    def max_freq(self):
        return int(np.abs(self.indices).max()) if len(self) else 0

    def pruned(self, tol=0.0):
        keep = np.abs(self.coef) > tol
        return SparseCoefFn(self.indices[keep], self.coef[keep], d=self.d)

    def restrict(self, keep):
        """Restrict to a boolean row mask or to the members of an IndexSet."""
        if isinstance(keep, IndexSet):
            pos = keep.position()
            keep = np.array([tuple(int(c) for c in k) in pos for k in self.indices], dtype=bool)
        keep = np.asarray(keep, dtype=bool)
        return SparseCoefFn(self.indices[keep], self.coef[keep], d=self.d)

    def __call__(self, x):
        return evaluate(self, x)

    def _combine(self, other, sign):
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return SparseCoefFn(np.vstack([self.indices, other.indices]),
                            np.concatenate([self.coef, sign * other.coef]), d=self.d)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return SparseCoefFn(self.indices, -self.coef, d=self.d)

    def __mul__(self, scalar):
        return SparseCoefFn(self.indices, self.coef * scalar, d=self.d)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SparseCoefFn(self.indices, self.coef / scalar, d=self.d)

    def allclose(self, other, atol=1e-12):
        diff = (self - other).coef
        return bool(np.all(np.abs(diff) <= atol))

    def __repr__(self):
        return f"SparseCoefFn(d={self.d}, terms={len(self)})"


class PointSet:
    """m sample points on [0, 2*pi)^d, kept in sampling order."""

    __slots__ = ("points",)

    def __init__(self, points, d=None):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None] if (d is None or d == 1) else pts[None, :]
        if pts.shape[0] == 0:
            raise ValueError("a point set needs at least one point")
        if d is not None and pts.shape[1] != d:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {d}")
        pts = np.mod(pts, TWO_PI)
        pts[pts >= TWO_PI] = 0.0  # mod can round up to exactly 2*pi
        pts.setflags(write=False)
        self.points = pts

    @classmethod
    def equispaced(cls, G, d=1):
        """Tensor grid with nodes 2*pi*j/G per axis (G^d points)."""
        return cls(QuadratureGrid(G, d).nodes())

    @property
    def m(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"PointSet(m={self.m}, d={self.d})"


class QuadratureGrid:
    """Equispaced tensor grid with G nodes per axis and weights G^-d.

    Integrates every trigonometric polynomial with frequencies in [-(G-1), G-1]^d
    exactly, hence |f|^2 exactly whenever G >= 2M + 1.
    """

    __slots__ = ("G", "d")

    def __init__(self, G, d=1):
        if G < 1 or d < 1:
            raise ValueError("grid needs G >= 1 and d >= 1")
        self.G = int(G)
        self.d = int(d)

    @classmethod
    def covering(cls, max_freq, d, factor=OVERSAMPLING):
        return cls(factor * max(int(max_freq), 0) + 1, d)

    @property
    def size(self):
        return self.G ** self.d

    def nodes(self):
        axis = TWO_PI * np.arange(self.G) / self.G
        grids = np.meshgrid(*([axis] * self.d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def __repr__(self):
        return f"QuadratureGrid(G={self.G}, d={self.d})"


def trig_matrix(indices, points):
    """Evaluation table ``Phi[j, n] = exp(i (k_n, x_j))``."""
    k = indices.array if isinstance(indices, IndexSet) else _as_index_array(indices)
    x = points.points if isinstance(points, PointSet) else np.atleast_2d(points)
    return np.exp(1j * (x @ k.T.astype(np.float64)))


class TrigSystem:
    """Evaluation interface for the system; other systems can mimic ``matrix``."""

    name = "trig"
    sup_bound = 1.0

    def matrix(self, indices, points):
        return trig_matrix(indices, points)


def evaluate(f, x):
    """Evaluate f at one point (shape ``(d,)``) or at many (shape ``(m, d)``)."""
    if isinstance(x, PointSet):
        pts, scalar = x.points, False
    else:
        arr = np.asarray(x, dtype=np.float64)
        scalar = arr.ndim == 0 or (arr.ndim == 1 and arr.shape[0] == f.d)
        pts = arr.reshape(1, f.d) if scalar else (arr[:, None] if arr.ndim == 1 else arr)
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for start in range(0, len(f), _CHUNK):
        sl = slice(start, start + _CHUNK)
        out += trig_matrix(f.indices[sl], pts) @ f.coef[sl]
    return complex(out[0]) if scalar else out


def grid_values(f, grid):
    """Values of f at the grid nodes (C order, matching ``grid.nodes()``).

    Exact at the nodes for any G: frequencies are folded modulo G and summed,
    then a single inverse FFT evaluates the sum.
    """
    if f.d != grid.d:
        raise ValueError("dimension mismatch between function and grid")
    G = grid.G
    table = np.zeros((G,) * grid.d, dtype=np.complex128)
    if len(f):
        np.add.at(table, tuple(np.mod(f.indices, G).T), f.coef)
    return (np.fft.ifftn(table) * grid.size).ravel()


def lp_mean(values, p, weights=None):
    """(sum_j w_j |v_j|^p)^(1/p), with uniform weights by default; max for p = inf."""
    a = np.abs(np.asarray(values))
    if a.size == 0:
        raise ValueError("no values")
    if math.isinf(p):
        return float(a.max())
    if p <= 0:
        raise ValueError("p must be positive")
    # scale by the max so tiny or huge magnitudes do not under/overflow
    top = a.max()
    if top == 0:
        return 0.0
    if 1e-100 < top < 1e100:
        top = 1.0
    a = a / top
    if weights is None:
        return float(top * np.mean(a ** p) ** (1.0 / p))
    return float(top * np.sum(weights * a ** p) ** (1.0 / p))


def _check_grid(f, p, grid):
    M = f.max_freq()
    if p == 2:
        need = 2 * M + 1
    elif not math.isinf(p) and float(p).is_integer() and p % 2 == 0:
        need = int(p) * M + 1  # |f|^p is then a trig polynomial of degree pM
    else:
        need = OVERSAMPLING * M + 1
    if grid.G < need:
        warnings.warn(f"grid G={grid.G} below {need} needed for max frequency {M} at p={p}",
                      GridTooCoarseWarning, stacklevel=3)


def lp_norm_mu(f, p, grid=None):
    """L_p norm under normalized Lebesgue measure, computed on ``grid``.

    With ``grid=None`` the default oversampled grid covering f is used.
    A :class:`GridTooCoarseWarning` is emitted when the grid is too coarse for
    the exactness guarantee at this p.
    """
    if grid is None:
        grid = QuadratureGrid.covering(f.max_freq(), f.d)
    _check_grid(f, p, grid)
    return lp_mean(grid_values(f, grid), p)


def _samples(f, xi):
    if isinstance(f, SparseCoefFn):
        return evaluate(f, xi)
    vals = np.asarray(f)
    if vals.size == 0:
        raise ValueError("empty sample vector")
    if xi is not None and vals.shape[0] != xi.m:
        raise ValueError(f"sample vector has length {vals.shape[0]}, point set has {xi.m}")
    return vals


def lp_norm_discrete(f, p, xi=None):
    """((1/m) sum_j |f(xi_j)|^p)^(1/p) for a SparseCoefFn or a sample vector."""
    if isinstance(f, SparseCoefFn) and xi is None:
        raise ValueError("a point set is required to sample a SparseCoefFn")
    return lp_mean(_samples(f, xi), p)


def lp_norm_mixed(f, p, xi, grid=None):
    """Norm under (mu + mu_m)/2."""
    cont = lp_norm_mu(f, p, grid)
    disc = lp_norm_discrete(f, p, xi)
    if math.isinf(p):
        return max(cont, disc)
    return float(((cont ** p + disc ** p) / 2.0) ** (1.0 / p))


def inner_product_discrete(u, v, xi=None):
    """(1/m) sum_j u_j * conj(v_j)."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    if u.size == 0:
        raise ValueError("empty sample vectors")
    if xi is not None and u.shape[0] != xi.m:
        raise ValueError("sample vectors do not match the point set")
    return complex(np.vdot(v, u) / u.shape[0])

"""Frequency-domain index geometry on Z^d.

Dyadic blocks, hyperbolic-cross layers, hyperbolic crosses and full cubes.
All sets are enumerated explicitly and stored in lexicographic order so that
dictionaries built from them (and greedy tie-breaking) are reproducible.
"""

import numpy as np

__all__ = [
    "IndexSet",
    "dyadic_block",
    "layer",
    "hyperbolic_cross",
    "full_cube",
    "linf_shell",
    "dyadic_vectors",
    "block_bounds",
    "MAX_INDEX_SET_SIZE",
    "parse_index_set",
]

# Largest set we are willing to materialise.
MAX_INDEX_SET_SIZE = 10**8


def _lex_sort(arr):
    if len(arr) == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


class IndexSet:
    """Finite, lexicographically ordered set of multi-indices k in Z^d.

    Parameters
    ----------
    members : array_like of shape (N, d) or iterable of integer tuples
    d : int, optional
        Needed only when ``members`` is empty.
    label : str
        Provenance tag, e.g. ``"block(2,1)"``, ``"cross(4)"``, ``"custom"``.
    """

    __slots__ = ("_array", "_lookup", "label")

    def __init__(self, members, d=None, label="custom"):
        arr = np.asarray(list(members) if not isinstance(members, np.ndarray) else members,
                         dtype=np.int64)
        if arr.size == 0:
            if d is None:
                raise ValueError("empty IndexSet needs an explicit dimension d")
            arr = np.zeros((0, d), dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if d is not None and arr.shape[1] != d:
            raise ValueError(f"members have dimension {arr.shape[1]}, expected {d}")
        arr = np.unique(arr, axis=0)  # sorted lexicographically, duplicates removed
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)
        object.__setattr__(self, "_lookup", None)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("IndexSet is immutable")

    @property
    def array(self):
        """Read-only ``(N, d)`` integer array of the members."""
        return self._array

    @property
    def d(self):
        return self._array.shape[1]

    @property
    def members(self):
        return [tuple(int(c) for c in row) for row in self._array]

    def position(self):
        """Map from multi-index tuple to its row in :attr:`array`."""
        if self._lookup is None:
            object.__setattr__(self, "_lookup",
                               {k: i for i, k in enumerate(self.members)})
        return self._lookup

    def __len__(self):
        return self._array.shape[0]

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, k):
        if isinstance(k, (int, np.integer)):
            k = (int(k),)
        return tuple(int(c) for c in k) in self.position()

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self._array.shape == other._array.shape and bool(np.all(self._array == other._array))

    def __hash__(self):
        return hash(self._array.tobytes()) ^ hash(self._array.shape)

    def __repr__(self):
        return f"IndexSet(label={self.label!r}, d={self.d}, size={len(self)})"

    def union(self, other, label="custom"):
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return IndexSet(np.vstack([self._array, other._array]), d=self.d, label=label)

    def issubset(self, other):
        pos = other.position()
        return all(k in pos for k in self.members)

    def max_abs(self):
        """Largest |k_j| over all members and coordinates (0 for an empty set)."""
        return int(np.abs(self._array).max()) if len(self) else 0

    def to_text(self):
        """One integer tuple per line, e.g. ``-1 0``."""
        return "".join(" ".join(str(c) for c in row) + "\n" for row in self.members)

    @classmethod
    def from_text(cls, text, label="custom"):
        rows = [tuple(int(t) for t in line.split()) for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError("no indices in text")
        return cls(rows, label=label)


def block_bounds(s_j):
    """Return ``(lo, hi)`` with ``lo <= |k| < hi`` for one coordinate of rho(s)."""
    if s_j < 0:
        raise ValueError("dyadic coordinates must be nonnegative")
    lo = (2 ** s_j) // 2  # integer part of 2^(s-1); equals 0 for s = 0
    return lo, 2 ** s_j


def _axis_values(s_j):
    lo, hi = block_bounds(s_j)
    pos = np.arange(max(lo, 1), hi)
    vals = np.concatenate([-pos[::-1], [0] if lo == 0 else [], pos])
    return vals.astype(np.int64)


def _product(axes):
    size = 1
    for a in axes:
        size *= len(a)
    if size > MAX_INDEX_SET_SIZE:
        raise ValueError(f"index set of size {size} exceeds MAX_INDEX_SET_SIZE")
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def dyadic_block(s, d=None):
    """The dyadic block rho(s) = {k : [2^(s_j-1)] <= |k_j| < 2^(s_j)}."""
    s = tuple(int(c) for c in np.atleast_1d(s))
    if d is None:
        d = len(s)
    if len(s) != d:
        raise ValueError(f"s has length {len(s)} but d = {d}")
    if any(c < 0 for c in s):
        raise ValueError("dyadic vector must have nonnegative coordinates")
    arr = _product([_axis_values(c) for c in s])
    return IndexSet(arr, d=d, label="block(" + ",".join(map(str, s)) + ")")


def dyadic_vectors(d, total):
    """All s in N_0^d with ||s||_1 == total, in lexicographic order."""
    if total < 0:
        return []
    if d == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        out.extend((first,) + rest for rest in dyadic_vectors(d - 1, total - first))
    return out


def layer(j, d):
    """Layer Delta Q_j: the disjoint union of rho(s) over ||s||_1 = j."""
    if j < 0:
        raise ValueError("layer index must be nonnegative")
    if d < 1:
        raise ValueError("d must be positive")
    parts = [dyadic_block(s, d).array for s in dyadic_vectors(d, j)]
    return IndexSet(np.vstack(parts), d=d, label=f"layer({j})")


def hyperbolic_cross(n, d):
    """Q_n: union of rho(s) over ||s||_1 <= n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    parts = [layer(j, d).array for j in range(n + 1)]
    return IndexSet(np.vstack(parts), d=d, label=f"cross({n})")


def full_cube(M, d):
    """Pi(M) = [-M, M]^d."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    if d < 1:
        raise ValueError("d must be positive")
    if (2 * M + 1) ** d > MAX_INDEX_SET_SIZE:
        raise ValueError(f"(2M+1)^d = {(2 * M + 1) ** d} exceeds MAX_INDEX_SET_SIZE")
    axis = np.arange(-M, M + 1, dtype=np.int64)
    return IndexSet(_product([axis] * d), d=d, label=f"cube({M})")


def linf_shell(j, d):
    """Shell {k : [2^(j-1)] <= ||k||_inf < 2^j} used by the A^r_beta classes."""
    lo, hi = block_bounds(j)
    cube = full_cube(hi - 1, d).array
    norm = np.abs(cube).max(axis=1)
    return IndexSet(cube[norm >= lo], d=d, label=f"shell({j})")


def parse_index_set(text, d):
    """Build an IndexSet from a short spec like ``cross:4``, ``cube:8``,
    ``layer:3``, ``block:2,1`` or ``range:0,9`` (d = 1 only)."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "cross":
        return hyperbolic_cross(int(arg), d)
    if kind == "cube":
        return full_cube(int(arg), d)
    if kind == "layer":
        return layer(int(arg), d)
    if kind == "block":
        return dyadic_block(tuple(int(c) for c in arg.split(",")), d)
    if kind == "shell":
        return linf_shell(int(arg), d)
    if kind == "range":
        if d != 1:
            raise ValueError("range index sets are one-dimensional")
        lo, hi = (int(c) for c in arg.split(","))
        return IndexSet(np.arange(lo, hi + 1)[:, None], d=1, label=f"range({lo},{hi})")
    raise ValueError(f"unknown index set spec {text!r}")



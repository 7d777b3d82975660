"""Log-log slope fitting for error-decay experiments."""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RateFit", "fit_rate", "rate_exponent", "log_exponent"]


@dataclass
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    points: list = field(default_factory=list)
    log_correction_stripped: bool = False


def fit_rate(points, strip=None):
    """Least-squares fit of log(err') = slope * log(v) + intercept.

    ``err' = err / (log 2v)^strip`` when ``strip`` is given (natural logs).
    Points with nonpositive error are dropped with a warning; at least four
    must remain.
    """
    kept = []
    for v, err in points:
        if not err > 0:
            warnings.warn(f"dropping point v={v} with nonpositive error {err}", stacklevel=2)
            continue
        e = err / math.log(2 * v) ** strip if strip else err
        kept.append((math.log(v), math.log(e)))
    if len(kept) < 4:
        raise ValueError(f"need at least 4 usable points, got {len(kept)}")
    x = np.array([p[0] for p in kept])
    y = np.array([p[1] for p in kept])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid ** 2)) / ss_tot)
    return RateFit(float(slope), float(intercept), min(r2, 1.0), kept, bool(strip))


def rate_exponent(p, beta, a):
    """Exponent 1 - 1/p - 1/beta - a of v in the sampling-recovery bound."""
    return 1.0 - 1.0 / p - 1.0 / beta - a


def log_exponent(d, a, b):
    """Exponent (d-1)(a+b) of log(2v) in the same bound."""
    return (d - 1) * (a + b)

"""
Measuring decay rates of greedy approximation
=============================================

"""

import numpy as np

from sampling_recovery import (ClassParamsW, RecoveryConfig, SparseCoefFn, empirical_rho,
                               fit_rate)
from sampling_recovery.greedy import greedy_a1_lp_path

# Relaxed greedy on the A_1 hull: an equidistributed 16-term sum is the
# hardest case, and the L_2 error decays roughly like v^{-1/2}.
K = 16
f = SparseCoefFn(np.arange(1, K + 1)[:, None], np.full(K, 1.0 / K))
path = greedy_a1_lp_path(f, f.support, 32, p=2.0)
fit = fit_rate([(v, err) for v, (_, err) in enumerate(path, start=1)])
print(f"relaxed greedy slope {fit.slope:.3f}")

# Sampling recovery of W^{a,0}_{A_1} in one variable: the fitted exponent of
# v should sit near 1 - 1/2 - 1 - a.
for a in (1.0, 2.0):
    cfg = RecoveryConfig(d=1, p=2.0, verify=False)
    rows = empirical_rho(ClassParamsW(a=a), cfg, [4, 8, 16, 32], seed=0, j_max=10)
    fit = fit_rate([(int(r["v"]), float(r["err_lp"])) for r in rows])
    print(f"a={a}: slope {fit.slope:.3f}, expected {0.5 - 1 - a:.1f}")

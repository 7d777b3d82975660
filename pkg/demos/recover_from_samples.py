"""
Recovering a smooth function from random point samples
=======================================================

"""

import numpy as np

from sampling_recovery import (ClassParamsW, RecoveryConfig, generate_W, membership_W,
                               recover)

# A member of the class W^{1,0}_{A_1} in two variables: every layer of the
# hyperbolic cross carries coefficient mass 2^{-j}.
params = ClassParamsW(a=1.0, b=0.0, beta=1.0)
f = generate_W(params, d=2, j_max=6, seed=0)
print(len(f), "terms; member:", membership_W(f, params).member)

# Sample at m random points, run Weak Orthogonal Matching Pursuit for 2v steps
# and measure the L_2 error of the rebuilt trigonometric polynomial.
for v in (4, 8, 16, 32):
    cfg = RecoveryConfig(d=2, p=2.0, v=v, seed=1, ud_trials=100)
    approx, report = recover(f, cfg, class_params=params)
    print(f"v={v:3d} m={report.m:6d} terms={len(approx):3d} "
          f"L2 error={report.err_lp:.3e} ud_pass={report.ud_pass}")

# The same samples drive the discrete error; it tracks the continuous one.
print("discrete vs continuous:", report.err_l2_disc, report.err_lp)
print("largest recovered coefficient:", np.abs(approx.coef).max())

"""Probability of an empty interval in the bulk, and how fast the
large-gap formula takes over.

    python demos/sine_gap.py
"""

import math

import numpy as np

from gapdet import KernelSpec, fredholm_det, gap_ln_asymptotic
from gapdet.asymptotics import sine_constant
from gapdet.fredholm import auto_tolerance

spec = KernelSpec.sine()
print(f"{'s':>5} {'ln det':>14} {'asymptotic':>14} {'s * residual':>13} {'nodes':>6}")
cs, ss = [], [4.0, 6.0, 8.0, 10.0]
for s in np.arange(1.0, 11.0):
    r = fredholm_det(spec, s, tol=auto_tolerance(spec, s))
    a = gap_ln_asymptotic(spec, s).ln_value.real
    print(f"{s:5.1f} {r.ln_abs:14.8f} {a:14.8f} {s * abs(r.ln_abs - a):13.6f} {r.m_final:6d}")
    if s in ss:
        cs.append(r.ln_abs + s * s / 2 + 0.25 * math.log(s))

# the constant term, extrapolated in 1/s
c_inf = np.polyfit(1 / np.array(ss), cs, 3)[-1]
print(f"\nextrapolated constant {c_inf:.6f}, closed form {sine_constant():.6f}")

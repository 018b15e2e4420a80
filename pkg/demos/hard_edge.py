"""Hard edge: Bessel2 gap probabilities, the Edelman identity at a = 0,
and the Hankel ratio that converges to them.

    python demos/hard_edge.py
"""

import math

from gapdet import KernelSpec, fredholm_det, gap_ln_asymptotic, hankel_det, hankel_scaling_ratio
from gapdet.hankel import HankelWeight

# for a = 0 the determinant is exactly exp(-s/4)
for s in (4.0, 16.0, 64.0):
    r = fredholm_det(KernelSpec.bessel2(0), s)
    print(f"a=0   s={s:5.1f}  ln det = {r.ln_abs:+.12f}  -s/4 = {-s / 4:+.12f}")

# a = 1/2: residual against the tau_a formula decays like s^-1/2
spec = KernelSpec.bessel2(0.5)
for s in (16.0, 36.0, 64.0, 100.0):
    r = fredholm_det(spec, s)
    res = abs(r.ln_abs - gap_ln_asymptotic(spec, s).ln_value.real)
    print(f"a=1/2 s={s:5.1f}  residual = {res:.4e}  sqrt(s) * residual = {math.sqrt(s) * res:.4f}")

ref = fredholm_det(KernelSpec.bessel2(0), 4.0).value.real
for n in (16, 32, 64):
    h = hankel_det(HankelWeight(0.5, 0.0), n)
    dev = abs(hankel_scaling_ratio(n, 1.0, 0.5) - ref)
    print(f"Hankel n={n:3d}: {h.precision_bits_used} bits, |ratio - e^-1| = {dev:.3e}")

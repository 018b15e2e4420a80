"""The confluent hypergeometric determinant seen two ways: directly by
Nystrom, and as the limit of arc Toeplitz ratios D_n(2s/n) / D_n(0).

    python demos/chf_vs_toeplitz.py
"""

from gapdet import KernelSpec, fredholm_det, scaling_ratio

alpha, beta, s = 0.3, 0.4j, 2.0
ref = fredholm_det(KernelSpec.chf(alpha, beta), s).value
print(f"det(I - K) on (-{s}, {s}) = {ref.real:.10f}")
prev = None
for n in (32, 64, 128, 256):
    dev = abs(scaling_ratio(n, s, alpha, beta) - ref)
    note = "" if prev is None else f"  (x{prev / dev:.2f} smaller)"
    print(f"n = {n:4d}  |ratio - det| = {dev:.3e}{note}")
    prev = dev

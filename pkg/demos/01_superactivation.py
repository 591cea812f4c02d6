"""Superactivation of Bell nonlocality with Fibonacci anyons.

A single pair of tau anyons fused to the vacuum is entangled (nonzero
entanglement entropy) yet admits a local model: the CHSH combination
cannot leave the classical range.  The same is true for two joint copies.
With three joint copies, collective measurements push CHSH to about
2.63286, past the classical bound of 2.  This script walks through that
story end to end.
"""

import math

import fibanyon as fa

tau_pair = fa.new_schmidt_state({"tau": [1.0]})

print("single tau pair, total charge vacuum")
print(f"  entanglement entropy (AEE): {fa.aee(tau_pair):.10f}  (= log2 phi)")
print(f"  class: {fa.classify(tau_pair).name}  (charge entanglement only)")
print()

for n in (1, 2):
    result = fa.optimize_chsh(tau_pair, copies=n)
    outcome = fa.locality_certificate(fa.n_copy(tau_pair, n))
    print(f"{n} copy(ies): best CHSH = {result.value:.6f}  [{result.verdict}]")
    print(
        f"  separable certificate with {len(outcome.mixture.terms)} product term(s),"
        f" reconstruction residual {outcome.reconstruction_residual:.2e}"
    )
print()

result = fa.optimize_chsh(tau_pair, copies=3)
target = (4.0 * math.sqrt(2.0) * fa.PHI + 2.0) / fa.PHI**3
print(f"3 copies: best CHSH = {result.value:.6f}  [{result.verdict}]")
print(f"  analytic optimum (4*sqrt(2)*phi + 2)/phi^3 = {target:.6f}")
print(f"  optimal angles (radians): {[round(a, 6) for a in result.angles]}")
print(f"  certificate attempt: {fa.locality_certificate(fa.n_copy(tau_pair, 3))}")
print()
print("Nonlocality was activated by measuring copies jointly: the conventional")
print("entanglement of the 3-copy state is positive, while for 1 and 2 copies")
print("it vanishes and the state stays local.")

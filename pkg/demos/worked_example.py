"""
Walking through a five-orbital, three-pair AGP circuit
======================================================

The circuit starts from the determinant ``|00111>`` and applies four
split-and-cyclic-shift blocks.  After each one we print the amplitudes,
which can be compared with the factor tables in ``agpprep.oracles``.
"""

import numpy as np

from agpprep import oracles
from agpprep.circuit import Circuit, build_initial, build_scs, gate_stats, scs_order
from agpprep.esp import agp_angles
from agpprep.simulator import run_dense

rng = np.random.default_rng(5)
mags = rng.uniform(0.3, 2.0, 5)
print("magnitudes |eta_p|:", np.round(mags, 4))

############################################################
# Rotation angles.  Only cells reachable from |00111> are defined.

angles = agp_angles(mags, 3)
for p in range(5, 1, -1):
    row = [f"{angles.theta[p, q]:.4f}" if angles.reachable(p, q) else "  -   " for q in (1, 2, 3)]
    print(f"theta[{p}, 1..3] =", "  ".join(row))

############################################################
# Apply the blocks one at a time.

gates = list(build_initial(5, 3).gates)
for p, q in scs_order(5, 3):
    gates += build_scs(p, q, angles)
    state = run_dense(Circuit(5, gates)).final_state
    expected = oracles.intermediate_amplitudes(list(mags), f"SCS[{p},{q}]")
    print(f"\nafter SCS[{p},{q}]  ({len(gates)} gates so far)")
    for ket in sorted(expected):
        print(f"  |{ket}>  circuit {state.amplitude(ket).real:+.6f}   table {expected[ket]:+.6f}")

############################################################
# The final amplitudes are monomials in the magnitudes over sqrt(S_{5,3}).

final = oracles.final_amplitudes(list(mags))
err = max(abs(state.amplitude(k) - v) for k, v in final.items())
print(f"\nmax deviation from the monomial table: {err:.2e}")
print("gate counts:", gate_stats(Circuit(5, gates))["counts"])

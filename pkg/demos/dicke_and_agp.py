"""
Dicke states and complex AGP coefficients
=========================================

With every coefficient equal to one the AGP circuit prepares a Dicke state.
Adding magnitudes and phases changes only the rotation angles and the final
layer of Rz gates.
"""

from math import comb

import numpy as np

from agpprep.circuit import build_agp_circuit, build_dicke_circuit, gate_stats
from agpprep.simulator import run_subspace
from agpprep.states import GeminalVector, build_esp_state, fidelity

############################################################
# Dicke(8, 3): 56 strings, all with amplitude 1/sqrt(56).

c = build_dicke_circuit(8, 3)
s = run_subspace(c, 8, 3).final_state
print("distinct amplitudes:", np.unique(np.round(s.amplitudes.real, 12)))
print("1/sqrt(C(8,3)) =", 1 / np.sqrt(comb(8, 3)))
print("stats:", gate_stats(c))

############################################################
# A random complex AGP on ten orbitals with four pairs, checked against
# the directly constructed state.

rng = np.random.default_rng(0)
g = GeminalVector.random(10, 4, rng)
s = run_subspace(build_agp_circuit(g), 10, 4).final_state
print("\nfidelity with the direct state:", fidelity(s, build_esp_state(g)))

############################################################
# Largest amplitudes, with the occupied orbitals of each string.

order = np.argsort(-np.abs(s.amplitudes))[:5]
for i in order:
    occ = [p + 1 for p in range(10) if s.masks[i] >> p & 1]
    print(f"  orbitals {occ}:  {s.amplitudes[i]:.4f}")

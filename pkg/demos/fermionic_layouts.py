"""
From paired qubits to fermionic modes
=====================================

A seniority-zero AGP on M qubits becomes a 2M-qubit fermionic state by
copying each occupation onto a partner qubit.  Two layouts are offered, and
the qubit AGP variant treats all 2M modes independently.
"""

import numpy as np

from agpprep.circuit import build_fermionic_circuit, build_qagp_circuit, gate_stats
from agpprep.qasm import emit_qasm
from agpprep.simulator import run_dense
from agpprep.states import GeminalVector, build_esp_state, embed, fidelity, pair_expand

g = GeminalVector.random(3, 2, np.random.default_rng(2))

############################################################
# Block layout keeps orbital p on qubit p and its partner on qubit M + p.
# The interlaced layout puts each pair on neighbouring qubits via SWAPs.

for ordering in ("block", "interlaced"):
    c = build_fermionic_circuit(g, ordering)
    s = run_dense(c).final_state
    support = [format(i, "06b") for i in np.nonzero(np.abs(s.amplitudes) > 1e-12)[0]]
    f = fidelity(s, pair_expand(build_esp_state(g), ordering))
    print(f"{ordering:>10}: strings {support}  fidelity {f:.15f}  SWAPs {gate_stats(c)['counts']['SWAP']}")

############################################################
# The interlaced circuit as OpenQASM.

print()
print(emit_qasm(build_fermionic_circuit(g, "interlaced")))

############################################################
# The qubit AGP: weight-4 ESP state over six independent coefficients.

eta = np.array([0.4, 1.2, 0.7 + 0.3j, 1.0, -0.5j, 0.9])
s = run_dense(build_qagp_circuit(eta, 4)).final_state
ref = build_esp_state(GeminalVector.from_complex(eta, 4))
print("qAGP weight-4 sector size:", len(ref.amplitudes))
print("qAGP fidelity:", fidelity(s, embed(ref)))

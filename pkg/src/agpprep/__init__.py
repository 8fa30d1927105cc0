"""Deterministic state preparation for AGP / ESP states and relatives."""
from .circuit import (Circuit, Gate, build_agp_circuit, build_bts_circuit, build_c2, build_c3,
                      build_dicke_circuit, build_fermionic_circuit, build_jastrow,
                      build_qagp_circuit, build_scs, build_u_mn, gate_stats)
from .errors import DegenerateCoefficientError, DegenerateStateError, QasmError, UnsupportedCircuitError
from .esp import (AngleTable, BtpTable, EspTable, agp_angles, band_mask, bts_angles,
                  build_btp_table, build_esp_table, sum_esp)
from .pairing import (OptimizationReport, OptimizerOptions, PairingHamiltonian, energy,
                      exact_ground, hamiltonian_matrix, optimize_agp, optimize_bts, sweep)
from .qasm import emit_qasm, parse_qasm
from .simulator import SimulationResult, block_unitary, run_dense, run_subspace
from .states import (BtsCoefficients, DenseState, GeminalVector, SubspaceState, build_bts_state,
                     build_dicke, build_esp_state, build_qbcs, embed, fidelity, pair_expand,
                     project)

__version__ = "0.1.0"

import time
from math import comb, sqrt

import numpy as np
import pytest

from agpprep.circuit import (Circuit, Gate, build_agp_circuit, build_bts_circuit, build_c2,
                             build_c3, build_dicke_circuit, build_jastrow)
from agpprep.errors import UnsupportedCircuitError
from agpprep.simulator import MAX_DENSE_QUBITS, block_unitary, run_dense, run_subspace
from agpprep.states import (BtsCoefficients, DenseState, GeminalVector, build_esp_state, embed,
                            fidelity, project)
from agpprep import oracles


def random_block_circuit(M, N, rng, n_blocks=25):
    """Random weight-conserving blocks after a random weight-N determinant."""
    occ = rng.choice(M, N, replace=False) + 1
    gates = [Gate("X", (int(q),), block="init") for q in sorted(occ)]
    for k in range(n_blocks):
        tau = rng.uniform(-np.pi, np.pi)
        kind = rng.integers(0, 3)
        if kind == 0 and M >= 2:
            p = int(rng.integers(2, M + 1))
            gates += build_c2(p, tau, M)
        elif kind == 1 and M >= 3:
            p = int(rng.integers(3, M + 1))
            r = int(rng.integers(2, p))
            gates += build_c3(p, r, tau, M)
        else:
            q = int(rng.integers(1, M + 1))
            gates.append(Gate("Rz", (q,), tau, f"J[{q}]"))
        # consecutive blocks with equal labels would merge; keep them apart
        gates.append(Gate("Rz", (1,), 0.0, f"sep{k}"))
    return Circuit(M, gates)


def test_empty_and_x():
    init = DenseState.basis_state("010")
    np.testing.assert_array_equal(run_dense(Circuit(3), init).final_state.amplitudes, init.amplitudes)
    s = run_dense(Circuit(1, [Gate("X", (1,))])).final_state
    np.testing.assert_array_equal(s.amplitudes, [0, 1])
    s = run_dense(Circuit(3, [Gate("X", (1,))])).final_state
    assert s.amplitude("001") == 1


def test_qubit_ordering_of_two_qubit_gates():
    # CNOT control 1 -> target 3 on |001>
    s = run_dense(Circuit(3, [Gate("X", (1,)), Gate("CNOT", (1, 3))])).final_state
    assert s.amplitude("101") == 1
    s = run_dense(Circuit(3, [Gate("X", (1,)), Gate("SWAP", (1, 2))])).final_state
    assert s.amplitude("010") == 1


def test_worked_example_dense(rng):
    mags = rng.uniform(0.2, 2.0, 5)
    s = run_dense(build_agp_circuit(GeminalVector(mags, np.zeros(5), 3))).final_state
    for ket, amp in oracles.final_amplitudes(list(mags)).items():
        assert abs(s.amplitude(ket) - amp) <= 1e-10


def test_path_equivalence_random_blocks(rng):
    for _ in range(30):
        M = int(rng.integers(3, 13))
        N = int(rng.integers(1, M))
        c = random_block_circuit(M, N, rng)
        dense = run_dense(c, weight=N)
        sub = run_subspace(c, M, N)
        assert dense.leaked_norm <= 1e-12
        proj, _ = project(dense.final_state, N)
        assert fidelity(proj, sub.final_state) >= 1 - 1e-12
        np.testing.assert_allclose(proj.amplitudes, sub.final_state.amplitudes, atol=1e-12)


def test_path_equivalence_preparation_circuits(rng):
    for M, N in [(10, 5), (12, 4), (9, 7)]:
        g = GeminalVector.random(M, N, rng)
        b = BtsCoefficients.random(M, N, rng)
        for c in (build_agp_circuit(g), build_bts_circuit(b)):
            proj, leaked = project(run_dense(c).final_state, N)
            assert leaked <= 1e-12
            np.testing.assert_allclose(proj.amplitudes, run_subspace(c, M, N).final_state.amplitudes,
                                       atol=1e-12)


def test_dicke_12_6():
    s = run_subspace(build_dicke_circuit(12, 6), 12, 6).final_state
    np.testing.assert_allclose(s.amplitudes, 1 / sqrt(comb(12, 6)), atol=1e-12)


def test_jastrow_only_is_diagonal(rng):
    alpha = rng.uniform(-np.pi, np.pi, 4)
    c = Circuit(4, [Gate("X", (1,), block="init"), Gate("X", (3,), block="init")]) + build_jastrow(alpha)
    s = run_subspace(c, 4, 2).final_state
    nz = np.nonzero(np.abs(s.amplitudes) > 0)[0]
    assert list(s.masks[nz]) == [0b0101]
    # Rz(a) = diag(e^{-ia/2}, e^{ia/2})
    expected = np.exp(0.5j * (alpha[0] + alpha[2] - alpha[1] - alpha[3]))
    assert s.amplitudes[nz[0]] == pytest.approx(expected)


def test_norm_preservation(rng):
    for _ in range(10):
        M = int(rng.integers(2, 9))
        c = random_block_circuit(M, int(rng.integers(1, M)), rng, n_blocks=40)
        res = run_dense(c)
        assert abs(res.final_state.norm() - 1) <= 1e-12 * len(c)


def test_leaked_norm_accounts_for_everything(rng):
    gates = [Gate("Ry", (q,), float(t)) for q, t in zip(range(1, 6), rng.uniform(0, 3, 5))]
    res = run_dense(Circuit(5, gates), weight=2)
    sec, _ = project(res.final_state, 2)
    assert sec.norm() ** 2 + res.leaked_norm == pytest.approx(1.0, abs=1e-12)
    assert res.leaked_norm > 0.1


def test_linearity(rng):
    n = 6
    gates = []
    for _ in range(40):
        k = rng.integers(0, 4)
        qs = tuple(int(q) for q in rng.choice(n, 3, replace=False) + 1)
        t = float(rng.uniform(-3, 3))
        gates.append([Gate("Ry", qs[:1], t), Gate("CNOT", qs[:2]), Gate("CRy", qs[:2], t),
                      Gate("CCRy", qs, t)][k])
    c = Circuit(n, gates)
    a = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    b = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    al, be = 0.3 - 0.2j, 1.1 + 0.5j
    out = lambda v: run_dense(c, DenseState(n, v)).final_state.amplitudes
    np.testing.assert_allclose(out(al * a + be * b), al * out(a) + be * out(b), atol=1e-12)


def test_width_mismatch():
    with pytest.raises(ValueError):
        run_dense(Circuit(3), DenseState.zero(4))
    with pytest.raises(ValueError):
        run_subspace(Circuit(3), 4, 2)


def test_memory_guard():
    with pytest.raises(MemoryError):
        run_dense(Circuit(MAX_DENSE_QUBITS + 1))


def test_unsupported_circuits():
    # lone untagged CNOT breaks weight
    with pytest.raises(UnsupportedCircuitError):
        run_subspace(Circuit(3, [Gate("CNOT", (1, 2))]), 3, 1)
    with pytest.raises(UnsupportedCircuitError):
        run_subspace(Circuit(3, [Gate("Ry", (1,), 0.4, "r")]), 3, 1)
    with pytest.raises(UnsupportedCircuitError):
        run_subspace(Circuit(3, [Gate("X", (1,), block="init")]), 3, 2)
    four = [Gate("CNOT", (1, 2), block="b"), Gate("CNOT", (3, 4), block="b")]
    with pytest.raises(UnsupportedCircuitError):
        run_subspace(Circuit(4, four), 4, 2)


def test_block_unitary_examples():
    np.testing.assert_allclose(block_unitary(build_c2(2, 0.0, 3), (2, 3)), np.eye(4), atol=1e-15)
    theta = 0.6
    u = block_unitary(build_c2(2, 2 * np.arccos(theta), 3), (2, 3))
    tb = sqrt(1 - theta ** 2)
    np.testing.assert_allclose(u[1:3, 1:3], [[theta, tb], [-tb, theta]], atol=1e-15)
    u = block_unitary(build_c3(3, 2, 1.3, 3), (1, 2, 3))
    np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-12)
    with pytest.raises(ValueError):
        block_unitary([Gate("X", (1,))], (1, 2, 3, 4))
    with pytest.raises(ValueError):
        block_unitary([Gate("X", (5,))], (1, 2))


def test_subspace_speed_report(rng):
    """Informational: subspace vs dense timing at M=16, N=8 (no assertion on speed)."""
    c = build_agp_circuit(GeminalVector.random(16, 8, rng))
    t0 = time.perf_counter()
    sub = run_subspace(c, 16, 8)
    t1 = time.perf_counter()
    run_subspace(c, 16, 8)
    t2 = time.perf_counter()
    dense = run_dense(c)
    t3 = time.perf_counter()
    proj, _ = project(dense.final_state, 8)
    assert fidelity(proj, sub.final_state) >= 1 - 1e-10
    print(f"\nM=16 N=8: dense {t3 - t2:.3f}s, subspace cold {t1 - t0:.3f}s "
          f"({(t3 - t2) / (t1 - t0):.1f}x), warm {t2 - t1:.3f}s ({(t3 - t2) / (t2 - t1):.1f}x)")


def test_esp_state_from_subspace_path(rng):
    g = GeminalVector.random(8, 3, rng)
    s = run_subspace(build_agp_circuit(g), 8, 3).final_state
    assert fidelity(embed(s), embed(build_esp_state(g))) >= 1 - 1e-12

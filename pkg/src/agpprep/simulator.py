"""Exact statevector execution of :class:`~agpprep.circuit.Circuit`.

Two paths:

* :func:`run_dense` keeps all ``2**n`` amplitudes and applies gates one by
  one.  Qubit ``p`` is bit ``p - 1`` of the index, i.e. axis ``n - p`` of
  the ``(2,) * n`` tensor view.
* :func:`run_subspace` keeps only the ``C(M, N)`` amplitudes of the
  weight-``N`` sector and applies whole labelled blocks, each of which must
  conserve Hamming weight even though its elementary gates do not.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import basis
from .errors import UnsupportedCircuitError
from .states import DenseState, SubspaceState, project

MAX_DENSE_QUBITS = 26


@dataclass(frozen=True)
class SimulationResult:
    final_state: DenseState | SubspaceState
    leaked_norm: float = 0.0
    block_applications: int = 0


def _ry(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _controlled(u, n_controls):
    dim = 2 ** (n_controls + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2:, dim - 2:] = u
    return out


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]


def gate_matrix(g):
    """Unitary of a gate; ``g.qubits[0]`` is the most significant local bit."""
    k = g.kind
    if k == "X":
        return _X
    if k == "Ry":
        return _ry(g.angle)
    if k == "Rz":
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    if k == "CNOT":
        return _controlled(_X, 1)
    if k == "CRy":
        return _controlled(_ry(g.angle), 1)
    if k == "CCRy":
        return _controlled(_ry(g.angle), 2)
    if k == "SWAP":
        return _SWAP
    raise ValueError(f"no matrix for {k!r}")


def apply_matrix(psi, u, qubits, n):
    """Apply ``u`` to ``qubits`` of the ``n``-qubit vector ``psi`` (returns a new array).

    Extra trailing axes of ``psi`` are carried along as a batch.
    """
    k = len(qubits)
    batch = psi.shape[1:]
    axes = [n - q for q in qubits]
    t = np.moveaxis(psi.reshape((2,) * n + batch), axes, range(k))
    shape = t.shape
    t = (u @ t.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(t, range(k), axes).reshape((2 ** n,) + batch)


def _slot(n, fixed):
    """Basic-indexing key selecting ``qubit = bit`` for each ``(qubit, bit)`` in ``fixed``."""
    key = [slice(None)] * n
    for q, bit in fixed:
        key[n - q] = slice(bit, bit + 1)
    return tuple(key)


def apply_gate(t, g, n):
    """Apply gate ``g`` in place to the ``(2,) * n`` tensor ``t``.

    Controls select a strided view, so a gate with ``k`` controls only
    touches ``2**(n-k)`` amplitudes.
    """
    *controls, target = g.qubits
    on = [(c, 1) for c in controls]
    if g.kind == "SWAP":
        a, b = g.qubits
        s01, s10 = t[_slot(n, [(a, 0), (b, 1)])], t[_slot(n, [(a, 1), (b, 0)])]
        tmp = s01.copy()
        s01[...] = s10
        s10[...] = tmp
        return
    s0 = t[_slot(n, on + [(target, 0)])]
    s1 = t[_slot(n, on + [(target, 1)])]
    if g.kind in ("X", "CNOT"):
        tmp = s0.copy()
        s0[...] = s1
        s1[...] = tmp
    elif g.kind == "Rz":
        s0 *= np.exp(-0.5j * g.angle)
        s1 *= np.exp(0.5j * g.angle)
    else:
        c, sn = np.cos(g.angle / 2), np.sin(g.angle / 2)
        tmp = s0.copy()
        s0 *= c
        s0 -= sn * s1
        s1 *= c
        s1 += sn * tmp


def run_dense(c, init=None, weight=None):
    """Apply ``c`` to ``init`` (default ``|0...0>``).

    With ``weight`` set, ``leaked_norm`` is the squared norm of the final
    state outside that Hamming-weight sector.
    """
    n = c.width
    if n > MAX_DENSE_QUBITS:
        raise MemoryError(f"{n} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}")
    if init is None:
        init = DenseState.zero(n)
    if init.n != n:
        raise ValueError(f"circuit width {n} does not match state of {init.n} qubits")
    psi = np.array(init.amplitudes, dtype=complex)
    t = psi.reshape((2,) * n)
    for g in c.gates:
        apply_gate(t, g, n)
    final = DenseState(n, psi)
    leaked = project(final, weight)[1] if weight is not None else 0.0
    return SimulationResult(final, leaked, len(c.gates))


def block_unitary(gates, touched):
    """Composite matrix of ``gates`` on the ordered qubits ``touched``.

    ``touched[0]`` is the most significant bit of the local index.
    """
    touched = tuple(touched)
    k = len(touched)
    if k > 3:
        raise ValueError(f"block touches {k} qubits; at most 3 supported")
    local = {q: k - i for i, q in enumerate(touched)}   # physical -> local qubit
    u = np.eye(2 ** k, dtype=complex)
    for g in gates:
        try:
            qs = [local[q] for q in g.qubits]
        except KeyError:
            raise ValueError(f"{g} acts outside {touched}") from None
        u = apply_matrix(u, gate_matrix(g), qs, k)
    return u


@lru_cache(maxsize=4096)
def _orbits(M, N, touched):
    """Group sector indices by the bits outside ``touched``.

    Returns ``(patterns, index)`` per local weight: ``index[g, j]`` is the
    sector position of the string whose untouched bits are those of group
    ``g`` and whose touched bits read ``patterns[j]``.
    """
    masks = basis.sector_masks(M, N)
    k = len(touched)
    pat = np.zeros(len(masks), dtype=np.int64)
    for i, q in enumerate(touched):
        pat |= ((masks >> (q - 1)) & 1) << (k - 1 - i)
    rest = masks & ~np.int64(sum(1 << (q - 1) for q in touched))
    w = basis.popcount(pat)
    out = []
    for lw in range(k + 1):
        sel = np.nonzero(w == lw)[0]
        if len(sel) == 0:
            continue
        sel = sel[np.argsort((rest[sel] << k) | pat[sel], kind="stable")]
        patterns = np.array([x for x in range(2 ** k) if bin(x).count("1") == lw])
        index = sel.reshape(-1, len(patterns))
        index.setflags(write=False)
        out.append((patterns, index))
    return tuple(out)


def _initial_mask(block_gates, M):
    mask = 0
    for g in block_gates:
        if g.kind != "X":
            raise UnsupportedCircuitError("init block may only contain X gates")
        mask ^= 1 << (g.qubits[0] - 1)
    return mask


def run_subspace(c, M, N, tol=1e-13):
    """Run a weight-conserving circuit on the ``C(M, N)`` sector.

    A leading ``init`` block of X gates defines the starting determinant,
    which must have weight ``N``; otherwise the circuit starts from
    ``|0^(M-N) 1^N>``.
    """
    if c.width != M:
        raise ValueError(f"circuit width {c.width} != M={M}")
    masks = basis.sector_masks(M, N)
    blocks = c.blocks()
    start = (1 << N) - 1
    if blocks and blocks[0][0] == "init":
        start = _initial_mask(blocks[0][1], M)
        if bin(start).count("1") != N:
            raise UnsupportedCircuitError(f"init block prepares weight {bin(start).count('1')}, not {N}")
        blocks = blocks[1:]
    psi = np.zeros(len(masks), dtype=complex)
    psi[np.searchsorted(masks, start)] = 1.0
    weights = None
    applied = 0
    for label, gates in blocks:
        touched = tuple(sorted({q for g in gates for q in g.qubits}))
        if len(touched) > 3:
            raise UnsupportedCircuitError(f"block {label!r} touches {len(touched)} qubits")
        u = block_unitary(gates, touched)
        k = len(touched)
        if weights is None or len(weights) != 2 ** k:
            weights = basis.popcount(np.arange(2 ** k))
        nz = np.abs(u) > tol
        if np.any(nz & (weights[:, None] != weights[None, :])):
            raise UnsupportedCircuitError(f"block {label!r} does not conserve Hamming weight")
        out = np.empty_like(psi)
        for patterns, index in _orbits(M, N, touched):
            sub = u[np.ix_(patterns, patterns)]
            if len(patterns) == 1:
                out[index[:, 0]] = sub[0, 0] * psi[index[:, 0]]
            else:
                out[index] = psi[index] @ sub.T
        psi = out
        applied += 1
    return SimulationResult(SubspaceState(M, N, psi), 0.0, applied)

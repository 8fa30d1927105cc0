"""Gate-level IR and deterministic synthesis of the preparation circuits.

Qubits are 1-based and qubit ``p`` carries geminal coefficient ``eta_p``.
Multi-qubit gates list their controls first and the target last.  Every
gate carries a ``block`` label; maximal runs of equal labels form the
composite blocks (``C2``/``C3`` splits, single Jastrow rotations, ...) that
the fixed-weight simulator applies as one unitary.

Block convention, with ``a = M - p + 1`` and ``b`` the qubit receiving the
shifted excitation:

    C2[p]    on (a, b = a + 1):        CNOT(b, a) CRy(a -> b) CNOT(b, a)
    C3[p,r]  on (a, m = a + r - 1, b = a + r):
                                        CNOT(b, a) CCRy(a, m -> b) CNOT(b, a)

On its splitting pair both blocks act as the real Givens rotation
``|a> -> theta |a> + theta_bar |b>``, ``|b> -> -theta_bar |a> + theta |b>``
where ``|a>`` means the excitation sits on qubit ``a``.
"""
import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .esp import agp_angles, bts_angles
from .states import BLOCK, INTERLACED, pair_positions

KINDS = ("X", "Ry", "Rz", "CNOT", "CRy", "CCRy", "SWAP")
_ARITY = {"X": 1, "Ry": 1, "Rz": 1, "CNOT": 2, "CRy": 2, "CCRy": 3, "SWAP": 2}
_PARAMETRIC = {"Ry", "Rz", "CRy", "CCRy"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: float | None = None
    block: str = ""

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} qubits, got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {self.kind}{qubits}")
        if self.kind in _PARAMETRIC:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")
        object.__setattr__(self, "qubits", qubits)


@dataclass(frozen=True)
class Circuit:
    """``gates`` are applied left to right."""

    width: int
    gates: tuple = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            if min(g.qubits) < 1 or max(g.qubits) > self.width:
                raise ValueError(f"{g} outside width {self.width}")
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def __add__(self, other):
        if other.width != self.width:
            raise ValueError("width mismatch")
        return Circuit(self.width, self.gates + other.gates)

    def blocks(self):
        """Maximal runs of consecutive gates sharing a block label."""
        out = []
        for g in self.gates:
            if out and out[-1][0] == g.block:
                out[-1][1].append(g)
            else:
                out.append((g.block, [g]))
        return [(label, tuple(gs)) for label, gs in out]

    def to_dict(self):
        return {"width": self.width,
                "gates": [{"kind": g.kind, "qubits": list(g.qubits),
                           "angle": None if g.angle is None else float(f"{g.angle:.17g}"),
                           "block": g.block} for g in self.gates]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["width"]), tuple(
            Gate(g["kind"], tuple(g["qubits"]), g.get("angle"), g.get("block", ""))
            for g in d["gates"]))


def build_c2(p, tau, M):
    a, b = M - p + 1, M - p + 2
    label = f"C2[{p}]"
    return [Gate("CNOT", (b, a), block=label),
            Gate("CRy", (a, b), tau, label),
            Gate("CNOT", (b, a), block=label)]


def build_c3(p, r, tau, M):
    if r < 2:
        raise ValueError("C3 needs r >= 2; use build_c2 for r = 1")
    a, m, b = M - p + 1, M - p + r, M - p + r + 1
    if b > M:
        raise ValueError(f"C3[{p},{r}] does not fit on {M} qubits")
    label = f"C3[{p},{r}]"
    return [Gate("CNOT", (b, a), block=label),
            Gate("CCRy", (a, m, b), tau, label),
            Gate("CNOT", (b, a), block=label)]


def build_scs(p, q, angles):
    """Split-and-cyclic-shift block ``SCS[p,q]``.

    Sub-blocks for excitation counts ``r`` that can never reach this
    block from the initial determinant are left out; they would act on
    states that never occur.
    """
    M, N = angles.M, angles.N
    gates = []
    for r in range(1, q + 1):
        if not angles.reachable(p, r):
            continue
        tau = angles.angle(p, r)
        gates += build_c2(p, tau, M) if r == 1 else build_c3(p, r, tau, M)
    return gates


def scs_order(M, N):
    """``(p, q)`` of every SCS block in application order."""
    return [(p, N) for p in range(M, N, -1)] + [(p, p - 1) for p in range(N, 1, -1)]


def build_u_mn(angles):
    gates = []
    for p, q in scs_order(angles.M, angles.N):
        gates += build_scs(p, q, angles)
    return Circuit(angles.M, gates)


def build_initial(M, N):
    """X gates turning the vacuum into ``|0...0 1...1>`` (qubits 1..N set)."""
    return Circuit(M, [Gate("X", (p,), block="init") for p in range(1, N + 1)])


def build_jastrow(phases):
    phases = np.asarray(phases, dtype=float)
    return Circuit(len(phases), [Gate("Rz", (p,), float(a), f"J[{p}]")
                                 for p, a in enumerate(phases, start=1)])


def _prepare(angles, phases):
    M, N = angles.M, angles.N
    return build_initial(M, N) + build_u_mn(angles) + build_jastrow(phases)


def build_agp_circuit(g):
    return _prepare(agp_angles(g.magnitudes, g.N), g.phases)


def build_dicke_circuit(M, N):
    return _prepare(agp_angles(np.ones(M), N), np.zeros(M))


def build_bts_circuit(b):
    return _prepare(bts_angles(b.magnitudes), b.phases)


def _widen(c, width):
    return Circuit(width, c.gates)


def _swap_network(targets):
    """SWAPs moving the content of qubit ``i`` to ``targets[i]``."""
    n = len(targets)
    where = {q: q for q in range(1, n + 1)}     # logical -> physical
    holder = {q: q for q in range(1, n + 1)}    # physical -> logical
    gates = []
    for logical in range(1, n + 1):
        dest = targets[logical]
        src = where[logical]
        if src == dest:
            continue
        other = holder[dest]
        gates.append(Gate("SWAP", (src, dest), block=f"swap[{src},{dest}]"))
        where[logical], where[other] = dest, src
        holder[dest], holder[src] = logical, other
    return gates


def build_fermionic_circuit(g, ordering=BLOCK):
    """AGP on ``2M`` qubits: orbital ``p`` on qubit ``p``, its partner on ``M + p``,
    optionally rearranged into the interlaced layout by SWAPs."""
    M = g.M
    c = _widen(build_agp_circuit(g), 2 * M)
    gates = [Gate("CNOT", (p, M + p), block=f"pair[{p}]") for p in range(1, M + 1)]
    if ordering == INTERLACED:
        targets = {}
        for p, (a, b) in enumerate(pair_positions(M, INTERLACED), start=1):
            targets[p], targets[M + p] = a, b
        gates += _swap_network(targets)
    elif ordering != BLOCK:
        raise ValueError(f"unknown ordering {ordering!r}")
    return c + Circuit(2 * M, gates)


def build_qagp_circuit(eta, n_fermions):
    """Qubit-AGP: the ESP circuit over all ``2M`` coefficients with weight ``2N``."""
    eta = np.asarray(eta, dtype=complex)
    if len(eta) % 2 or n_fermions % 2:
        raise ValueError("qubit-AGP needs an even number of qubits and of fermions")
    if not 1 <= n_fermions <= len(eta):
        raise ValueError("need 1 <= 2N <= 2M")
    return _prepare(agp_angles(np.abs(eta), n_fermions), np.angle(eta))


def gate_stats(c, decompose=False):
    """Gate counts and a greedy depth estimate.

    With ``decompose=True`` each CCRy is counted as its five-gate
    CRy/CNOT expansion used by the QASM emitter.
    """
    if decompose:
        from .qasm import decompose_circuit
        c = decompose_circuit(c)
    counts = Counter(g.kind for g in c.gates)
    level = {}
    depth = 0
    for g in c.gates:
        d = 1 + max((level.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            level[q] = d
        depth = max(depth, d)
    return {"counts": {k: counts.get(k, 0) for k in KINDS},
            "total": len(c.gates),
            "two_qubit": sum(counts.get(k, 0) for k in ("CNOT", "CRy", "SWAP")),
            "three_qubit": counts.get("CCRy", 0),
            "depth": depth}

"""OpenQASM 2.0 output for :class:`~agpprep.circuit.Circuit`.

CCRy is expanded with the two-control identity
``CCRy(t) = CRy_{c2}(t/2) CNOT(c1,c2) CRy_{c2}(-t/2) CNOT(c1,c2) CRy_{c1}(t/2)``.
Qubit ``p`` is written as ``q[p-1]``.  ``cry`` and ``swap`` are taken from
the standard ``qelib1.inc`` shipped with common toolchains.
"""
import re

from .circuit import Circuit, Gate
from .errors import QasmError

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_NAMES = {"X": "x", "Ry": "ry", "Rz": "rz", "CNOT": "cx", "CRy": "cry", "SWAP": "swap"}
_KINDS = {v: k for k, v in _NAMES.items()}


def _ccry(g):
    c1, c2, t = g.qubits
    h = g.angle / 2
    return [Gate("CRy", (c2, t), h, g.block),
            Gate("CNOT", (c1, c2), block=g.block),
            Gate("CRy", (c2, t), -h, g.block),
            Gate("CNOT", (c1, c2), block=g.block),
            Gate("CRy", (c1, t), h, g.block)]


def decompose_circuit(c):
    """Same circuit with every CCRy replaced by CRy and CNOT gates."""
    gates = []
    for g in c.gates:
        gates += _ccry(g) if g.kind == "CCRy" else [g]
    return Circuit(c.width, gates)


def _fmt(x):
    return f"{x:.17g}"


def emit_qasm(c):
    lines = [HEADER + f"qreg q[{c.width}];"]
    for g in decompose_circuit(c).gates:
        try:
            name = _NAMES[g.kind]
        except KeyError:
            raise QasmError(f"cannot emit gate kind {g.kind!r}") from None
        args = ",".join(f"q[{q - 1}]" for q in g.qubits)
        if g.angle is None:
            lines.append(f"{name} {args};")
        else:
            lines.append(f"{name}({_fmt(g.angle)}) {args};")
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.+);$")
_QUBIT = re.compile(r"^q\[(\d+)\]$")


def parse_qasm(text):
    """Read back the subset of OpenQASM 2.0 written by :func:`emit_qasm`."""
    width = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            width = int(m.group(1))
            continue
        m = _LINE.match(line)
        if not m or m.group(1) not in _KINDS:
            raise QasmError(f"unsupported line: {raw!r}")
        qubits = []
        for tok in m.group(3).split(","):
            qm = _QUBIT.match(tok.strip())
            if not qm:
                raise QasmError(f"bad operand {tok!r}")
            qubits.append(int(qm.group(1)) + 1)
        angle = float(m.group(2)) if m.group(2) is not None else None
        gates.append(Gate(_KINDS[m.group(1)], tuple(qubits), angle))
    if width is None:
        raise QasmError("missing qreg declaration")
    return Circuit(width, gates)

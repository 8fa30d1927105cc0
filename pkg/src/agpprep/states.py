"""Direct, circuit-free construction of the target states.

These are the oracles the circuits are checked against.  Basis conventions
are those of :mod:`agpprep.basis`: qubit ``p`` carries orbital ``p`` and is
bit ``p - 1`` of a dense index.
"""
import csv
import io
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from . import basis
from .errors import DegenerateStateError
from .esp import band_mask, build_btp_table, build_esp_table

BLOCK = "block"
INTERLACED = "interlaced"


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GeminalVector:
    """Geminal coefficients ``eta_p = magnitudes[p-1] * exp(1j * phases[p-1])``."""

    magnitudes: np.ndarray
    phases: np.ndarray
    N: int

    def __post_init__(self):
        mags = _frozen(self.magnitudes, float)
        phases = _frozen(self.phases, float)
        if mags.ndim != 1 or mags.shape != phases.shape:
            raise ValueError("magnitudes and phases must be 1-D of equal length")
        if not (np.all(np.isfinite(mags)) and np.all(np.isfinite(phases))):
            raise ValueError("coefficients must be finite")
        if np.any(mags < 0):
            raise ValueError("magnitudes must be non-negative")
        if not 1 <= self.N <= len(mags):
            raise ValueError(f"need 1 <= N <= M, got M={len(mags)}, N={self.N}")
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_complex(cls, eta, N):
        eta = np.asarray(eta, dtype=complex)
        return cls(np.abs(eta), np.angle(eta), N)

    @classmethod
    def uniform(cls, M, N):
        return cls(np.ones(M), np.zeros(M), N)

    @classmethod
    def random(cls, M, N, rng, complex_phases=True):
        mags = rng.uniform(0.2, 2.0, size=M)
        phases = rng.uniform(-np.pi, np.pi, size=M) if complex_phases else np.zeros(M)
        return cls(mags, phases, N)

    @property
    def M(self):
        return len(self.magnitudes)

    @property
    def coefficients(self):
        return self.magnitudes * np.exp(1j * self.phases)

    def to_dict(self):
        return {"M": self.M, "N": self.N, "magnitudes": self.magnitudes.tolist(),
                "phases": self.phases.tolist()}

    @classmethod
    def from_dict(cls, d):
        g = cls(d["magnitudes"], d.get("phases", [0.0] * len(d["magnitudes"])), int(d["N"]))
        if "M" in d and int(d["M"]) != g.M:
            raise ValueError(f"M={d['M']} does not match {g.M} magnitudes")
        return g


@dataclass(frozen=True)
class BtsCoefficients:
    """Band matrix ``eta_p^j = magnitudes[p-1, j-1] * exp(1j * phases[p-1])``."""

    magnitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        mags = _frozen(self.magnitudes, float)
        phases = _frozen(self.phases, float)
        if mags.ndim != 2 or phases.shape != (mags.shape[0],):
            raise ValueError("magnitudes must be M x N and phases length M")
        M, N = mags.shape
        if not 1 <= N <= M:
            raise ValueError(f"need 1 <= N <= M, got shape {mags.shape}")
        if not (np.all(np.isfinite(mags)) and np.all(np.isfinite(phases))):
            raise ValueError("coefficients must be finite")
        if np.any(mags < 0):
            raise ValueError("magnitudes must be non-negative")
        if np.any(mags[~band_mask(M, N)] != 0):
            raise ValueError("entries outside the band max(1,p+N-M) <= j <= min(p,N) must be zero")
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_band(cls, magnitudes, phases=None):
        """Build from any ``M x N`` array, zeroing the cells outside the band."""
        mags = np.asarray(magnitudes, dtype=float)
        mags = np.where(band_mask(*mags.shape), mags, 0.0)
        if phases is None:
            phases = np.zeros(mags.shape[0])
        return cls(mags, phases)

    @classmethod
    def constant_columns(cls, g):
        """The BTS that coincides with the AGP of ``g``."""
        mags = np.repeat(g.magnitudes[:, None], g.N, axis=1)
        return cls.from_band(mags, g.phases)

    @classmethod
    def random(cls, M, N, rng, complex_phases=True):
        mags = rng.uniform(0.2, 2.0, size=(M, N))
        phases = rng.uniform(-np.pi, np.pi, size=M) if complex_phases else None
        return cls.from_band(mags, phases)

    @property
    def M(self):
        return self.magnitudes.shape[0]

    @property
    def N(self):
        return self.magnitudes.shape[1]

    def to_dict(self):
        return {"M": self.M, "N": self.N, "magnitudes": self.magnitudes.tolist(),
                "phases": self.phases.tolist()}

    @classmethod
    def from_dict(cls, d):
        mags = np.asarray(d["magnitudes"], dtype=float)
        if mags.ndim != 2:
            raise ValueError("BTS magnitudes must be a nested M x N list")
        b = cls(mags, d.get("phases", [0.0] * mags.shape[0]))
        if ("M" in d and int(d["M"]) != b.M) or ("N" in d and int(d["N"]) != b.N):
            raise ValueError("M/N do not match the magnitude matrix")
        return b


def load_coefficients(path):
    """Read a GeminalVector or BtsCoefficients JSON file."""
    with open(path) as f:
        d = json.load(f)
    if not isinstance(d, dict) or "magnitudes" not in d:
        raise ValueError("expected a JSON object with a 'magnitudes' field")
    if np.ndim(d["magnitudes"]) == 2:
        return BtsCoefficients.from_dict(d)
    return GeminalVector.from_dict(d)


def save_coefficients(obj, path):
    with open(path, "w") as f:
        json.dump(obj.to_dict(), f, indent=2)


@dataclass(frozen=True)
class SubspaceState:
    """Amplitudes over the weight-``N`` sector in colex order."""

    M: int
    N: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes, complex)
        if amps.shape != (comb(self.M, self.N),):
            raise ValueError(f"expected {comb(self.M, self.N)} amplitudes, got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def masks(self):
        return basis.sector_masks(self.M, self.N)

    def amplitude(self, ket):
        """Amplitude of a ket given as a bitstring such as ``'00111'``."""
        if len(ket) != self.M:
            raise ValueError(f"ket must have {self.M} symbols")
        m = int(ket, 2)
        i = np.searchsorted(self.masks, m)
        if i == len(self.masks) or self.masks[i] != m:
            return 0j
        return complex(self.amplitudes[i])

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def to_csv(self):
        return _state_csv(self.masks, self.amplitudes, self.M)


@dataclass(frozen=True)
class DenseState:
    """Amplitudes over all ``2**n`` basis states."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes, complex)
        if amps.shape != (2 ** self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n):
        a = np.zeros(2 ** n, dtype=complex)
        a[0] = 1.0
        return cls(n, a)

    @classmethod
    def basis_state(cls, ket):
        a = np.zeros(2 ** len(ket), dtype=complex)
        a[int(ket, 2)] = 1.0
        return cls(len(ket), a)

    def amplitude(self, ket):
        return complex(self.amplitudes[int(ket, 2)])

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def to_csv(self, threshold=0.0):
        idx = np.nonzero(np.abs(self.amplitudes) > threshold)[0]
        return _state_csv(idx, self.amplitudes[idx], self.n)


def _state_csv(indices, amps, n):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "bitstring", "re", "im"])
    for i, a in zip(indices, amps):
        w.writerow([int(i), basis.bitstring(int(i), n), repr(float(a.real)), repr(float(a.imag))])
    return buf.getvalue()


def build_esp_state(g):
    """ESP state: amplitude of ``{p_1..p_N}`` is ``eta_{p_1}...eta_{p_N} / sqrt(S)``."""
    norm2 = build_esp_table(g.magnitudes, g.N)[g.M, g.N]
    if not norm2 > 0:
        raise DegenerateStateError("ESP state has vanishing norm")
    occ = basis.occupations(g.M, g.N)
    amps = np.prod(g.coefficients[occ], axis=1) / np.sqrt(norm2)
    return SubspaceState(g.M, g.N, amps)


def build_dicke(M, N):
    if not 1 <= N <= M:
        raise ValueError(f"need 1 <= N <= M, got M={M}, N={N}")
    d = comb(M, N)
    return SubspaceState(M, N, np.full(d, 1 / np.sqrt(d)))


def build_bts_state(b):
    """Binary tree state: the ``j``-th lowest occupied orbital takes column ``j``."""
    norm2 = build_btp_table(b.magnitudes ** 2)[b.M, b.N]
    if not norm2 > 0:
        raise DegenerateStateError("binary tree state has vanishing norm")
    occ = basis.occupations(b.M, b.N)
    cols = np.arange(b.N)
    amps = np.prod(b.magnitudes[occ, cols], axis=1)
    amps = amps * np.exp(1j * b.phases[occ].sum(axis=1)) / np.sqrt(norm2)
    return SubspaceState(b.M, b.N, amps)


def pair_positions(M, ordering=BLOCK):
    """(orbital qubit, partner qubit) for each orbital, 1-based, on 2M qubits."""
    if ordering == BLOCK:
        return [(p, M + p) for p in range(1, M + 1)]
    if ordering == INTERLACED:
        return [(2 * p - 1, 2 * p) for p in range(1, M + 1)]
    raise ValueError(f"unknown ordering {ordering!r}")


def _spread(masks, M, ordering):
    out = np.zeros_like(masks)
    for p, (a, b) in enumerate(pair_positions(M, ordering)):
        bit = (masks >> p) & 1
        out |= (bit << (a - 1)) | (bit << (b - 1))
    return out


def pair_expand(s, ordering=BLOCK):
    """Lift a seniority-zero state to 2M qubits with both partners occupied."""
    out = np.zeros(2 ** (2 * s.M), dtype=complex)
    out[_spread(basis.sector_masks(s.M, s.N), s.M, ordering)] = s.amplitudes
    return DenseState(2 * s.M, out)


def build_qbcs(eta):
    """Product state ``cos(b_p)|0> + exp(i a_p) sin(b_p)|1>``, ``b_p = arctan|eta_p|``."""
    eta = np.asarray(eta, dtype=complex)
    beta = np.arctan(np.abs(eta))
    state = np.ones(1, dtype=complex)
    # qubit p is bit p-1, so later qubits become more significant
    for b, a in zip(beta, np.angle(eta)):
        state = np.kron(np.array([np.cos(b), np.exp(1j * a) * np.sin(b)]), state)
    return DenseState(len(eta), state)


def embed(s):
    out = np.zeros(2 ** s.M, dtype=complex)
    out[s.masks] = s.amplitudes
    return DenseState(s.M, out)


def project(d, N):
    """Weight-``N`` sector of a dense state and the squared norm left outside it."""
    masks = basis.sector_masks(d.n, N)
    amps = d.amplitudes[masks]
    leaked = max(0.0, float(np.vdot(d.amplitudes, d.amplitudes).real - np.vdot(amps, amps).real))
    return SubspaceState(d.n, N, amps), leaked


def fidelity(a, b):
    """``|<a|b>|**2`` for two states of the same kind and size."""
    if type(a) is not type(b):
        raise ValueError("fidelity needs two states of the same kind")
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError("dimension mismatch")
    if isinstance(a, SubspaceState) and (a.M, a.N) != (b.M, b.N):
        raise ValueError(f"sector mismatch: ({a.M},{a.N}) vs ({b.M},{b.N})")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def align_phase(amplitudes, reference):
    """Remove the global phase of ``amplitudes`` relative to ``reference``.

    The gauge is fixed at the largest-magnitude entry of ``reference``.
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    k = int(np.argmax(np.abs(reference)))
    if abs(amplitudes[k]) == 0:
        return amplitudes
    ph = (reference[k] / abs(reference[k])) / (amplitudes[k] / abs(amplitudes[k]))
    return amplitudes * ph

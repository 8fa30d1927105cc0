"""Reduced BCS (pairing) Hamiltonian in the seniority-zero sector, exact
ground states, and variational AGP / binary-tree-state optimisation.

``H = sum_p eps_p N_p - G sum_{pq} P+_p P_q`` with the paired encoding
``P+ -> |1><0|`` and ``N -> I - Z = 2|1><1|``.
"""
import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.optimize import minimize
from scipy.sparse.linalg import eigsh

from . import basis
from .esp import band_mask
from .states import BtsCoefficients, GeminalVector, SubspaceState, build_bts_state, build_esp_state

DENSE_EIG_LIMIT = 2000
MAX_SECTOR_DIM = 10 ** 6


@dataclass(frozen=True)
class PairingHamiltonian:
    levels: np.ndarray
    G: float
    N: int

    def __post_init__(self):
        levels = np.array(self.levels, dtype=float)
        levels.setflags(write=False)
        if levels.ndim != 1 or not np.all(np.isfinite(levels)):
            raise ValueError("levels must be a finite 1-D array")
        if not 1 <= self.N <= len(levels):
            raise ValueError(f"need 1 <= N <= M, got M={len(levels)}, N={self.N}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "G", float(self.G))

    @classmethod
    def picket_fence(cls, M, N, G):
        """Equally spaced levels ``eps_p = p``."""
        return cls(np.arange(1, M + 1, dtype=float), G, N)

    @property
    def M(self):
        return len(self.levels)


def hamiltonian_matrix(h):
    """Sparse real symmetric matrix of ``h`` on the colex-ordered sector."""
    M, N = h.M, h.N
    masks = basis.sector_masks(M, N)
    occ = basis.occupations(M, N)
    diag = 2.0 * h.levels[occ].sum(axis=1) - h.G * N
    rows, cols = [np.arange(len(masks))], [np.arange(len(masks))]
    vals = [diag]
    for p in range(M):
        for q in range(M):
            if p == q:
                continue
            # P+_p P_q: q occupied, p empty
            sel = np.nonzero(((masks >> q) & 1 == 1) & ((masks >> p) & 1 == 0))[0]
            if not len(sel):
                continue
            tgt = np.searchsorted(masks, masks[sel] ^ (1 << q) ^ (1 << p))
            rows.append(tgt)
            cols.append(sel)
            vals.append(np.full(len(sel), -h.G))
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(len(masks), len(masks)))


def pair_operators(M):
    """Full ``2**M`` matrices ``(P+_p, P_p, N_p)`` for ``p = 1..M``."""
    raise_ = sp.csr_matrix(np.array([[0, 0], [1, 0]], dtype=np.int64))
    num = sp.csr_matrix(np.array([[0, 0], [0, 2]], dtype=np.int64))
    eye = sp.identity(2, dtype=np.int64, format="csr")

    def on(op, p):
        # qubit p is bit p-1, the kron factor counted from the right
        out = sp.identity(1, dtype=np.int64, format="csr")
        for q in range(M, 0, -1):
            out = sp.kron(out, op if q == p else eye, format="csr")
        return out

    return [(on(raise_, p), on(raise_.T.tocsr(), p), on(num, p)) for p in range(1, M + 1)]


@dataclass(frozen=True)
class GroundState:
    energy: float
    state: SubspaceState
    residual: float


def exact_ground(h):
    dim = comb(h.M, h.N)
    if dim > MAX_SECTOR_DIM:
        raise ValueError(f"sector dimension {dim} exceeds {MAX_SECTOR_DIM}")
    H = hamiltonian_matrix(h)
    if dim <= DENSE_EIG_LIMIT:
        w, v = eigh(H.toarray(), subset_by_index=[0, 0])
        e, vec = float(w[0]), v[:, 0]
    else:
        w, v = eigsh(H, k=1, which="SA", tol=0)
        e, vec = float(w[0]), v[:, 0]
    # fix the sign so the largest component is positive
    vec = vec * np.sign(vec[np.argmax(np.abs(vec))])
    residual = float(np.linalg.norm(H @ vec - e * vec))
    return GroundState(e, SubspaceState(h.M, h.N, vec), residual)


def energy(state, h, H=None):
    """Expectation value of ``h`` in ``state``."""
    if (state.M, state.N) != (h.M, h.N):
        raise ValueError("state and Hamiltonian sectors differ")
    if H is None:
        H = hamiltonian_matrix(h)
    psi = state.amplitudes
    e = np.vdot(psi, H @ psi) / np.vdot(psi, psi)
    return float(e.real)


@dataclass(frozen=True)
class OptimizerOptions:
    """Multi-start Nelder-Mead settings."""

    restarts: int = 5
    max_evals: int = 20_000
    xatol: float = 1e-10
    fatol: float = 1e-12
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class OptimizationReport:
    best_parameters: GeminalVector | BtsCoefficients
    best_energy: float
    exact_energy: float
    iterations: int
    restarts: int
    converged: bool
    start_energies: tuple = field(default=())

    @property
    def error(self):
        return self.best_energy - self.exact_energy


class _Objective:
    """Energy as a function of square-root magnitudes, ``eta = t**2``.

    Squares keep the magnitudes non-negative while letting an orbital be
    switched off exactly, which the weak-coupling limit needs.
    """

    PENALTY = 1e10

    def __init__(self, h, kind):
        self.M, self.N = h.M, h.N
        self.kind = kind
        self.H = hamiltonian_matrix(h)
        self.occ = basis.occupations(h.M, h.N)
        self.band = band_mask(h.M, h.N)

    def magnitudes(self, t):
        t = np.asarray(t, dtype=float) ** 2
        if self.kind == "agp":
            return t
        m = np.zeros((self.M, self.N))
        m[self.band] = t
        return m

    def parameters(self, t):
        m = self.magnitudes(t)
        if self.kind == "agp":
            return GeminalVector(m / m.max(), np.zeros(self.M), self.N)
        return BtsCoefficients(m / m.max(), np.zeros(self.M))

    def amplitudes(self, t):
        m = self.magnitudes(t)
        if self.kind == "agp":
            return np.prod(m[self.occ], axis=1)
        return np.prod(m[self.occ, np.arange(self.N)], axis=1)

    def __call__(self, t):
        a = self.amplitudes(t)
        n2 = a @ a
        if not np.isfinite(n2) or n2 <= 1e-280:
            return self.PENALTY
        return float(a @ (self.H @ a) / n2)


def _nelder_mead(f, x0, opts):
    """Nelder-Mead, restarted from its own result until it stops improving."""
    x = np.asarray(x0, dtype=float)
    fx = f(x)
    used = 0
    converged = False
    while used < opts.max_evals:
        res = minimize(f, x, method="Nelder-Mead",
                       options={"xatol": opts.xatol, "fatol": opts.fatol,
                                "maxfev": opts.max_evals - used, "adaptive": len(x) > 12})
        used += res.nfev
        improved = fx - res.fun
        if res.fun <= fx:
            x, fx = res.x, float(res.fun)
        if res.success and improved <= opts.fatol:
            converged = True
            break
    return x, fx, used, converged


def _run_start(args):
    f, x0, opts = args
    return _nelder_mead(f, x0, opts)


def _multistart(f, starts, opts):
    jobs = [(f, s, opts) for s in starts]
    if opts.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as ex:
            results = list(ex.map(_run_start, jobs))
    else:
        results = [_run_start(j) for j in jobs]
    # ties resolve to the lowest start index
    best = min(range(len(results)), key=lambda i: (results[i][1], i))
    return results, best


def _report(obj, h, results, best, exact):
    x, _, _, converged = results[best]
    params = obj.parameters(x)
    state = build_esp_state(params) if obj.kind == "agp" else build_bts_state(params)
    e = energy(state, h, obj.H)
    return OptimizationReport(params, e, exact, sum(r[2] for r in results), len(results) - 1,
                              converged, tuple(float(r[1]) for r in results))


def _exact_energy(h, exact):
    return exact_ground(h).energy if exact is None else exact


def optimize_agp(h, options=None, start=None, exact=None):
    """Variationally best AGP with real non-negative coefficients.

    ``start`` (a GeminalVector) is used as the first start; the remaining
    ``options.restarts`` starts draw magnitudes uniformly from [0.1, 1].
    """
    opts = options or OptimizerOptions()
    rng = np.random.default_rng(opts.seed)
    obj = _Objective(h, "agp")
    first = np.sqrt(start.magnitudes) if start is not None else np.ones(h.M)
    starts = [first] + [np.sqrt(rng.uniform(0.1, 1.0, h.M)) for _ in range(opts.restarts)]
    results, best = _multistart(obj, starts, opts)
    return _report(obj, h, results, best, _exact_energy(h, exact))


def optimize_bts(h, options=None, agp=None, previous=None, exact=None):
    """Variationally best binary tree state.

    The first start is the AGP ``agp`` (a GeminalVector, optimised here if
    not given) laid out as constant columns, so the result is never above
    the AGP energy.  ``previous`` (a BtsCoefficients) adds a second warm
    start; the random starts jitter the AGP start multiplicatively.
    """
    opts = options or OptimizerOptions()
    if agp is None:
        agp = optimize_agp(h, opts, exact=exact).best_parameters
    rng = np.random.default_rng(opts.seed + 1)
    obj = _Objective(h, "bts")
    band = obj.band
    first = np.sqrt(BtsCoefficients.constant_columns(agp).magnitudes[band])
    starts = [first]
    if previous is not None:
        starts.append(np.sqrt(previous.magnitudes[band]))
    starts += [first * np.exp(rng.normal(0.0, 0.3, first.shape)) for _ in range(opts.restarts)]
    results, best = _multistart(obj, starts, opts)
    return _report(obj, h, results, best, _exact_energy(h, exact))


@dataclass(frozen=True)
class SweepPoint:
    G: float
    exact_energy: float
    residual: float
    agp: OptimizationReport | None
    bts: OptimizationReport | None
    failure: str = ""


def sweep(template, g_values, options=None):
    """AGP and BTS optimisation at each coupling, warm-started along the grid.

    A point that raises is recorded with its message and the sweep moves on.
    """
    opts = options or OptimizerOptions()
    out = []
    prev_agp = prev_bts = None
    for G in g_values:
        h = replace(template, G=float(G))
        try:
            gs = exact_ground(h)
            agp = optimize_agp(h, opts, start=prev_agp, exact=gs.energy)
            bts = optimize_bts(h, opts, agp=agp.best_parameters, previous=prev_bts,
                               exact=gs.energy)
        except Exception as exc:   # per-point failure is reported, not fatal
            out.append(SweepPoint(float(G), float("nan"), float("nan"), None, None,
                                  f"{type(exc).__name__}: {exc}"))
            continue
        prev_agp, prev_bts = agp.best_parameters, bts.best_parameters
        out.append(SweepPoint(float(G), gs.energy, gs.residual, agp, bts))
    return out


CSV_COLUMNS = ["G", "E_exact", "E_AGP", "err_AGP", "E_BTS", "err_BTS",
               "iters_AGP", "iters_BTS", "converged_AGP", "converged_BTS", "failure"]


def sweep_csv(points):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for pt in points:
        if pt.agp is None:
            w.writerow([repr(pt.G)] + ["nan"] * 5 + ["", "", "false", "false", pt.failure])
            continue
        w.writerow([repr(pt.G), repr(pt.exact_energy),
                    repr(pt.agp.best_energy), repr(pt.agp.error),
                    repr(pt.bts.best_energy), repr(pt.bts.error),
                    pt.agp.iterations, pt.bts.iterations,
                    str(pt.agp.converged).lower(), str(pt.bts.converged).lower(), ""])
    return buf.getvalue()


def sweep_parameters_json(points):
    return json.dumps([{"G": pt.G,
                        "agp": pt.agp.best_parameters.to_dict() if pt.agp else None,
                        "bts": pt.bts.best_parameters.to_dict() if pt.bts else None}
                       for pt in points], indent=1)


def default_workers():
    return max(1, int(os.environ.get("AGPPREP_WORKERS", "1")))

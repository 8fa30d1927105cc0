"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
Outputs go to ``--output`` (written atomically) or stdout.
"""
import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import oracles
from .circuit import (Circuit, Gate, build_agp_circuit, build_bts_circuit, build_dicke_circuit,
                      build_fermionic_circuit, build_qagp_circuit, gate_stats)
from .esp import agp_angles, bts_angles
from .pairing import (OptimizerOptions, PairingHamiltonian, default_workers, optimize_agp,
                      optimize_bts, sweep, sweep_csv, sweep_parameters_json)
from .qasm import emit_qasm
from .simulator import run_dense, run_subspace
from .states import (BLOCK, INTERLACED, BtsCoefficients, GeminalVector, build_bts_state,
                     build_esp_state, embed, fidelity, load_coefficients)

VERIFY_TOL = 1e-10


class InputError(Exception):
    pass


def write_output(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".agpprep-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _load(args, kinds=(GeminalVector, BtsCoefficients)):
    if args.input is None:
        raise InputError("--input is required")
    try:
        obj = load_coefficients(args.input)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    if not isinstance(obj, kinds):
        raise InputError(f"{args.input} holds a {type(obj).__name__}, expected "
                         + " or ".join(k.__name__ for k in kinds))
    return obj


def _coefficients(args):
    if getattr(args, "random", None):
        M, N = args.random
        if not 1 <= N <= M:
            raise InputError(f"need 1 <= N <= M, got {M} {N}")
        return GeminalVector.random(M, N, np.random.default_rng(args.seed))
    return _load(args)


def _circuit_for(obj):
    if isinstance(obj, BtsCoefficients):
        return build_bts_circuit(obj), build_bts_state(obj)
    return build_agp_circuit(obj), build_esp_state(obj)


def _circuit_text(c, fmt, stats):
    text = emit_qasm(c) if fmt == "qasm" else c.to_json() + "\n"
    if stats:
        sys.stderr.write(json.dumps(gate_stats(c)) + "\n")
    return text


def cmd_angles(args):
    obj = _load(args)
    table = bts_angles(obj.magnitudes) if isinstance(obj, BtsCoefficients) \
        else agp_angles(obj.magnitudes, obj.N)
    write_output(table.to_json() + "\n", args.output)
    return 0


def cmd_prepare(args):
    c, _ = _circuit_for(_coefficients(args))
    M = c.width
    N = sum(g.kind == "X" for g in c.gates)
    write_output(run_subspace(c, M, N).final_state.to_csv(), args.output)
    return 0


def _perturbed(c, delta):
    gates = list(c.gates)
    for i, g in enumerate(gates):
        if g.angle is not None and g.kind != "Rz":
            gates[i] = Gate(g.kind, g.qubits, g.angle + delta, g.block)
            break
    return Circuit(c.width, gates)


def _worked_example(rng, draws=1):
    worst = 0.0
    for _ in range(draws):
        mags = rng.uniform(0.2, 2.0, oracles.M)
        c = build_agp_circuit(GeminalVector(mags, np.zeros(oracles.M), oracles.N))
        state = run_dense(c).final_state
        expected = oracles.final_amplitudes(list(mags))
        worst = max(worst, max(abs(state.amplitude(k) - v) for k, v in expected.items()))
    return worst


def cmd_verify(args):
    obj = _coefficients(args)
    c, oracle = _circuit_for(obj)
    if args.perturb_angle:
        c = _perturbed(c, args.perturb_angle)
    M, N = oracle.M, oracle.N
    dense = run_dense(c, weight=N)
    sub = run_subspace(c, M, N)
    report = {"M": M, "N": N,
              "fidelity_dense": fidelity(dense.final_state, embed(oracle)),
              "fidelity_subspace": fidelity(sub.final_state, oracle),
              "leaked_norm": dense.leaked_norm,
              "gate_stats": gate_stats(c)}
    ok = min(report["fidelity_dense"], report["fidelity_subspace"]) >= 1 - VERIFY_TOL
    if args.worked_example:
        err = _worked_example(np.random.default_rng(args.seed), draws=10)
        report["worked_example_max_abs_error"] = err
        ok = ok and err <= VERIFY_TOL
    report["passed"] = ok
    write_output(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if ok else 1


def cmd_emit_qasm(args):
    c, _ = _circuit_for(_load(args))
    write_output(_circuit_text(c, "qasm", args.stats), args.output)
    return 0


def cmd_dicke(args):
    if not 1 <= args.N <= args.M:
        raise InputError(f"need 1 <= N <= M, got M={args.M}, N={args.N}")
    write_output(_circuit_text(build_dicke_circuit(args.M, args.N), args.format, args.stats),
                 args.output)
    return 0


def cmd_fermionic(args):
    g = _load(args, (GeminalVector,))
    write_output(_circuit_text(build_fermionic_circuit(g, args.ordering), args.format, args.stats),
                 args.output)
    return 0


def cmd_qagp(args):
    g = _load(args, (GeminalVector,))
    try:
        c = build_qagp_circuit(g.coefficients, g.N)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    write_output(_circuit_text(c, args.format, args.stats), args.output)
    return 0


def cmd_bts(args):
    b = _load(args, (BtsCoefficients,))
    write_output(_circuit_text(build_bts_circuit(b), args.format, args.stats), args.output)
    return 0


def _hamiltonian(args, G):
    if not 1 <= args.N <= args.M:
        raise InputError(f"need 1 <= N <= M, got M={args.M}, N={args.N}")
    levels = args.levels if args.levels else list(range(1, args.M + 1))
    if len(levels) != args.M:
        raise InputError(f"{len(levels)} levels given for M={args.M}")
    return PairingHamiltonian(levels, G, args.N)


def _options(args):
    return OptimizerOptions(restarts=args.restarts, max_evals=args.max_evals, seed=args.seed,
                            workers=default_workers())


def cmd_optimize(args):
    h = _hamiltonian(args, args.G)
    opts = _options(args)
    agp = optimize_agp(h, opts)
    out = {"G": h.G, "exact_energy": agp.exact_energy,
           "agp": {"energy": agp.best_energy, "error": agp.error, "converged": agp.converged,
                   "parameters": agp.best_parameters.to_dict()}}
    if args.method == "bts":
        bts = optimize_bts(h, opts, agp=agp.best_parameters, exact=agp.exact_energy)
        out["bts"] = {"energy": bts.best_energy, "error": bts.error, "converged": bts.converged,
                      "parameters": bts.best_parameters.to_dict()}
    write_output(json.dumps(out, indent=2) + "\n", args.output)
    return 0


def cmd_sweep(args):
    h = _hamiltonian(args, 0.0)
    grid = args.g_grid if args.g_grid is not None else np.linspace(0.0, 1.0, 16).tolist()
    points = sweep(h, grid, _options(args))
    if points and all(pt.failure for pt in points):
        sys.stderr.write("every sweep point failed\n")
        return 1
    for pt in points:
        if pt.failure:
            sys.stderr.write(f"G={pt.G:8.4f}  FAILED {pt.failure}\n")
        else:
            sys.stderr.write(f"G={pt.G:8.4f}  E_exact={pt.exact_energy:14.8f}  "
                             f"err_AGP={pt.agp.error:.3e}  err_BTS={pt.bts.error:.3e}\n")
    write_output(sweep_csv(points), args.output)
    if args.params_json:
        write_output(sweep_parameters_json(points) + "\n", args.params_json)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="agpprep", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, input_=True, fmt=False):
        p = sub.add_parser(name, help=help_)
        if input_:
            p.add_argument("--input", "-i", help="coefficient JSON file")
        p.add_argument("--output", "-o", help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        if fmt:
            p.add_argument("--format", choices=("qasm", "json"), default="qasm")
            p.add_argument("--stats", action="store_true", help="print gate statistics to stderr")
        p.set_defaults(func=fn)
        return p

    add("angles", cmd_angles, "rotation-angle table")
    p = add("prepare", cmd_prepare, "simulate the preparation circuit, write the state as CSV")
    p.add_argument("--random", nargs=2, type=int, metavar=("M", "N"))
    p = add("verify", cmd_verify, "check circuit output against the direct state")
    p.add_argument("--random", nargs=2, type=int, metavar=("M", "N"))
    p.add_argument("--worked-example", "--paper-oracle", dest="worked_example", action="store_true",
                   help="also run the hand-worked M=5, N=3 amplitude check")
    p.add_argument("--perturb-angle", type=float, default=0.0, help=argparse.SUPPRESS)
    p = add("emit-qasm", cmd_emit_qasm, "OpenQASM 2.0 for an AGP or BTS input")
    p.add_argument("--stats", action="store_true")
    p = add("dicke", cmd_dicke, "Dicke-state circuit", input_=False, fmt=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p = add("fermionic", cmd_fermionic, "AGP on 2M qubits", fmt=True)
    p.add_argument("--ordering", choices=(BLOCK, INTERLACED), default=BLOCK)
    add("qagp", cmd_qagp, "qubit-AGP circuit (input M, N are 2M, 2N)", fmt=True)
    add("bts", cmd_bts, "binary-tree-state circuit", fmt=True)

    for name, fn, help_ in (("optimize", cmd_optimize, "variational AGP/BTS at one coupling"),
                            ("sweep", cmd_sweep, "AGP vs BTS energy errors over a G grid")):
        p = add(name, fn, help_, input_=False)
        p.add_argument("--M", type=int, default=10)
        p.add_argument("--N", type=int, default=5)
        p.add_argument("--levels", type=float, nargs="+")
        p.add_argument("--restarts", type=int, default=5)
        p.add_argument("--max-evals", type=int, default=20_000)
        if name == "optimize":
            p.add_argument("--G", type=float, required=True)
            p.add_argument("--method", choices=("agp", "bts"), default="bts")
        else:
            p.add_argument("--g-grid", type=float, nargs="+")
            p.add_argument("--params-json", help="also dump best parameters per point")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

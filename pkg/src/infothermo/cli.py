"""
Command-line interface: ``infothermo <subcommand> ...``.

Data goes to stdout (JSON unless stated), diagnostics to stderr. Exit codes:
0 success, 1 computation failure (e.g. a solver that did not converge),
2 invalid input (unreadable or malformed files, violated state invariants,
inconsistent flags).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, diagram, engine, equilibrium, lawbook, passive, resource, serialize
from ._numerics import ConvergenceError
from .qstate import DensityMatrix, HermitianOperator, ValidationError, join_hamiltonians, random_unitary, tensor

DEFAULT_SEED = 20240917

EXIT_OK, EXIT_COMPUTE, EXIT_INPUT = 0, 1, 2


class UsageError(ValueError):
    """Inconsistent or missing command-line options."""


# ---------------------------------------------------------------------------
# subcommands; each returns the text written to stdout
# ---------------------------------------------------------------------------

def info_payload(rho: DensityMatrix, H: HermitianOperator) -> dict:
    rep = passive.equivalence_class(rho, H)
    return {
        "E": rep.energy,
        "S": rep.entropy,
        "beta": rep.beta.beta,
        "T": rep.beta.temperature,
        "B": rep.bound_energy,
        "F": rep.free_energy,
    }


def cmd_info(args) -> str:
    H = serialize.load_hamiltonian(args.hamiltonian)
    rho = serialize.load_state(args.state)
    _match(rho, H)
    return serialize.dumps(info_payload(rho, H))


def cmd_gibbs(args) -> str:
    H = serialize.load_hamiltonian(args.hamiltonian)
    if not args.beta >= 0:
        raise UsageError("--beta must be non-negative")
    rho = passive.gibbs_state(H, args.beta)
    # state files keep full precision so that they reload as valid density matrices
    return json.dumps(serialize.state_to_json(rho), indent=2) + "\n"


def equilibrate_payload(result: equilibrium.EquilibrationResult, hams) -> dict:
    parts = []
    for label, rho, H in zip(result.labels, result.per_part_states, hams):
        rep = passive.equivalence_class(rho, H)
        parts.append({"label": label, "E": rep.energy, "S": rep.entropy, "beta": rep.beta.beta})
    return {
        "common_beta": result.common_beta.beta,
        "energy_released": result.energy_released,
        "initial_energy": result.initial_energy,
        "final_energy": result.final_energy,
        "total_entropy": result.total_entropy,
        "parts": parts,
    }


def cmd_equilibrate(args) -> str:
    hams = [serialize.load_hamiltonian(p) for p in args.hamiltonian]
    labels = args.label or [chr(ord("A") + k) for k in range(len(hams))]
    if len(labels) != len(hams):
        raise UsageError("give one --label per --hamiltonian")
    if args.beta and args.state:
        raise UsageError("use either --beta (one per part) or --state, not both")
    if args.beta:
        if len(args.beta) != len(hams):
            raise UsageError("give one --beta per --hamiltonian")
        comp = equilibrium.CompositeSystem.from_gibbs(list(zip(labels, hams, args.beta)))
    elif args.state:
        rho = serialize.load_state(args.state)
        comp = equilibrium.CompositeSystem(list(zip(labels, hams)), rho)
    else:
        raise UsageError("need --beta values or a joint --state")
    return serialize.dumps(equilibrate_payload(equilibrium.equilibrate(comp), hams))


def process_payload(record: lawbook.ProcessRecord) -> dict:
    ok, residual = lawbook.validate_ep(record)
    out = {"entropy_preserving": ok, "entropy_residual": residual}
    if not ok:
        return out
    L = lawbook.ledger(record)
    hb = lawbook.heat_bounds(record)
    cl = lawbook.clausius_report(record)
    kp = lawbook.kelvin_planck_report(record)
    out.update(
        ledger=dict(L.as_dict(), dQ_A=L.dQ_A, dQ_B=L.dQ_B),
        first_law_residual=lawbook.first_law_residual(record),
        heat_bounds={
            "applicable": hb.applicable, "T_dS_B": hb.lower, "dQ": hb.heat, "dE_B": hb.upper, "ordered": hb.ordered,
        },
        clausius={
            "T_A": cl.T_A, "T_B": cl.T_B, "margin": cl.margin, "margin_scaled": cl.margin_scaled,
            "holds": cl.holds, "std_margin": cl.std_margin, "std_applicable": cl.std_applicable,
        },
        kelvin_planck={
            "heat_total": kp.heat_total, "identity_residual": kp.identity_residual,
            "inequality_holds": kp.inequality_holds, "sign_rule_holds": kp.sign_rule_holds,
        },
        rank_preserved=lawbook.rank_preservation_check(record),
    )
    return out


def cmd_process(args) -> str:
    H_A = serialize.load_hamiltonian(args.hamiltonian_a)
    H_B = serialize.load_hamiltonian(args.hamiltonian_b)
    initial = serialize.load_state(args.initial)
    choices = sum(x is not None and x is not False for x in (args.final, args.unitary, args.random_unitary or None))
    if choices != 1:
        raise UsageError("give exactly one of --final, --unitary, --random-unitary")
    dims = (H_A.dim, H_B.dim)
    if args.final:
        final = serialize.load_state(args.final)
        record = lawbook.ProcessRecord(H_A, H_B, DensityMatrix(initial.matrix, dims), final, entropy_tolerance=args.ep_tol)
    else:
        U = serialize.load_matrix(args.unitary) if args.unitary else random_unitary(initial.dim, seed=args.seed)
        record = lawbook.ProcessRecord.from_unitary(DensityMatrix(initial.matrix, dims), U, H_A, H_B, entropy_tolerance=args.ep_tol)
    payload = process_payload(record)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for k, v in payload.get("ledger", {}).items():
            w.writerow([k, serialize.clean(v)])
        w.writerow(["first_law_residual", serialize.clean(payload.get("first_law_residual", math.nan))])
        return buf.getvalue()
    return serialize.dumps(payload)


def _engine_config(args) -> engine.EngineConfig:
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read {args.config}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{args.config}: malformed JSON ({exc.msg})") from exc
        if not isinstance(cfg, dict):
            raise ValidationError(f"{args.config}: engine config must be a JSON object")
    for key in ("gap", "beta_cold", "beta_hot", "bath_size", "cycles", "policy", "step"):
        v = getattr(args, key)
        if v is not None:
            cfg[key] = v
    gap = float(cfg.get("gap", 1.0))
    if not gap > 0:
        raise UsageError("--gap must be positive")
    n = int(cfg.get("bath_size", 1))
    if n < 1 or n > 10:
        raise UsageError("--bath-size must be between 1 and 10")
    H = HermitianOperator.diagonal([0.0, gap])
    H_n = join_hamiltonians(*[H] * n) if n > 1 else H
    return engine.EngineConfig(
        H_n, float(cfg.get("beta_cold", 2.0)), H_n, float(cfg.get("beta_hot", 0.5)),
        policy=str(cfg.get("policy", "full")), step=float(cfg.get("step", 1.0)), n_cycles=int(cfg.get("cycles", 1)),
    )


CYCLE_FIELDS = ("cycle", "W", "eta", "eta_bound_general", "eta_carnot", "dE_A", "dE_B", "dS_A", "beta_A_in", "beta_B_in", "beta_A_out", "beta_B_out")


def _cycle_row(k: int, r: engine.CycleReport) -> dict:
    return {
        "cycle": k, "W": r.W, "eta": r.eta, "eta_bound_general": r.eta_bound_general, "eta_carnot": r.eta_carnot,
        "dE_A": r.dE_A, "dE_B": r.dE_B, "dS_A": r.dS_A, "beta_A_in": r.beta_A_in, "beta_B_in": r.beta_B_in,
        "beta_A_out": r.post_betas[0], "beta_B_out": r.post_betas[1],
    }


def cmd_engine(args) -> str:
    cfg = _engine_config(args)
    reports = engine.run_engine(cfg)
    rows = [_cycle_row(k + 1, r) for k, r in enumerate(reports)]
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CYCLE_FIELDS)
        for row in rows:
            w.writerow([serialize.clean(row[f]) for f in CYCLE_FIELDS])
        _write(args.csv, buf.getvalue())
    summary = {
        "policy": cfg.policy,
        "cycles": len(reports),
        "bath_dim": cfg.H_A.dim,
        "total_work": sum(r.W for r in reports),
        "free_energy_available": _available_free_energy(cfg),
        "final_betas": list(reports[-1].post_betas),
        "per_cycle": rows,
    }
    return serialize.dumps(summary)


def _available_free_energy(cfg: engine.EngineConfig) -> float:
    rho = tensor(passive.gibbs_state(cfg.H_A, cfg.beta_A), passive.gibbs_state(cfg.H_B, cfg.beta_B))
    return passive.free_energy(rho, join_hamiltonians(cfg.H_A, cfg.H_B))


def cmd_diagram(args) -> str:
    H = serialize.load_hamiltonian(args.hamiltonian)
    boundary = diagram.thermal_boundary(H, n_samples=args.samples)
    points, notes = [], []
    for k, path in enumerate(args.state or []):
        rho = serialize.load_state(path)
        _match(rho, H)
        p = diagram.locate(rho, H, Path(path).stem)
        points.append(p)
        if args.annotate:
            notes.extend(diagram.class_segments(p, boundary))
    text = diagram.render(boundary, points, notes, args.format)
    if args.out:
        _write(args.out, text)
        return ""
    return text


def conversion_payload(res: resource.ConversionResult, problem: resource.ConversionProblem) -> dict:
    out = {
        "source": {"E": problem.source.E, "S": problem.source.S},
        "target": {"E": problem.target.E, "S": problem.target.S},
        "rate": res.rate,
        "residue": None if res.residue is None else {"E": res.residue.E, "S": res.residue.S},
        "residue_kind": res.residue_kind,
        "flags": list(res.flags),
    }
    if res.rate is not None:
        out["collinearity_residual"] = list(res.residual)
    if res.explanation:
        out["explanation"] = res.explanation
    return out


def cmd_convert_rate(args) -> str:
    H = serialize.load_hamiltonian(args.hamiltonian)
    rho, sigma = serialize.load_state(args.source), serialize.load_state(args.target)
    _match(rho, H)
    _match(sigma, H)
    problem = resource.ConversionProblem.from_states(rho, sigma, H)
    boundary = diagram.thermal_boundary(H)
    res = resource.max_conversion_rate(problem, boundary)
    if args.svg:
        pts = [problem.source, problem.target] + ([res.residue] if res.residue is not None else [])
        segs = []
        if res.residue is not None:
            t, p = problem.target, res.residue
            segs.append(diagram.Segment("ray", (t.E, t.S), (p.E, p.S), p.E - t.E))
        diagram.export(boundary, pts, segs, "svg", args.svg)
    return serialize.dumps(conversion_payload(res, problem))


def cmd_oracle(args) -> str:
    H = serialize.load_hamiltonian(args.hamiltonian)
    value = passive.min_energy_oracle(H.eigenvalues, args.entropy, args.resolution)
    return serialize.dumps({"entropy": args.entropy, "min_energy": value})


def _match(rho: DensityMatrix, H: HermitianOperator) -> None:
    if rho.dim != H.dim:
        raise ValidationError(f"state dimension {rho.dim} does not match Hamiltonian dimension {H.dim}")


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infothermo", description="Entropy-preserving thermodynamics toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for randomised options (default {DEFAULT_SEED})")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("info", help="energy, entropy, intrinsic temperature, bound and free energy of a state")
    s.add_argument("--state", required=True, help="state JSON file")
    s.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("gibbs", help="write the Gibbs state of a Hamiltonian as a state file")
    s.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    s.add_argument("--beta", type=float, required=True, help="inverse temperature (>= 0)")
    s.set_defaults(func=cmd_gibbs)

    s = sub.add_parser("equilibrate", help="common temperature and released energy of non-interacting parts")
    s.add_argument("--hamiltonian", action="append", required=True, help="part Hamiltonian file (repeat per part)")
    s.add_argument("--label", action="append", help="part label (repeat per part; default A, B, ...)")
    s.add_argument("--beta", type=float, action="append", help="initial Gibbs beta of each part (repeat per part)")
    s.add_argument("--state", help="joint state file, instead of --beta")
    s.set_defaults(func=cmd_equilibrate)

    s = sub.add_parser("process", help="energy/heat/work ledger of an entropy-preserving process on A (x) B")
    s.add_argument("--hamiltonian-a", required=True, help="system Hamiltonian file")
    s.add_argument("--hamiltonian-b", required=True, help="environment Hamiltonian file")
    s.add_argument("--initial", required=True, help="joint initial state file")
    s.add_argument("--final", help="joint final state file")
    s.add_argument("--unitary", help="unitary matrix file applied to the initial state")
    s.add_argument("--random-unitary", action="store_true", help="apply a Haar-random unitary drawn with --seed")
    s.add_argument("--ep-tol", type=float, default=lawbook.EP_TOLERANCE, help="entropy-preservation tolerance in nats")
    s.add_argument("--csv", action="store_true", help="print the ledger as CSV instead of JSON")
    s.set_defaults(func=cmd_process)

    s = sub.add_parser("engine", help="run a heat engine between two finite qubit baths")
    s.add_argument("--config", help="JSON file with any of the flag names below as keys (flags override)")
    s.add_argument("--gap", type=float, help="qubit energy gap (default 1)")
    s.add_argument("--beta-cold", type=float, help="initial beta of the cold bath (default 2)")
    s.add_argument("--beta-hot", type=float, help="initial beta of the hot bath (default 0.5)")
    s.add_argument("--bath-size", type=int, help="qubits per bath, 1 to 10 (default 1)")
    s.add_argument("--cycles", type=int, help="number of cycles (default 1)")
    s.add_argument("--policy", choices=engine.POLICIES, help="cycle policy (default full)")
    s.add_argument("--step", type=float, help="fraction (partial) or entropy in nats (quantum) moved per cycle")
    s.add_argument("--csv", help="also write the per-cycle table to this CSV file")
    s.set_defaults(func=cmd_engine)

    s = sub.add_parser("diagram", help="energy-entropy diagram as CSV, JSON or SVG")
    s.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    s.add_argument("--state", action="append", help="state file to place on the diagram (repeatable)")
    s.add_argument("--format", choices=("csv", "json", "svg"), default="svg", help="output format (default svg)")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--samples", type=int, default=512, help="boundary samples (default 512, minimum 64)")
    s.add_argument("--annotate", action="store_true", help="draw free/bound energy segments and tangents for each state")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("convert-rate", help="maximal asymptotic conversion rate between two states")
    s.add_argument("--source", required=True, help="source state file (rho)")
    s.add_argument("--target", required=True, help="target state file (sigma)")
    s.add_argument("--hamiltonian", required=True, help="unit-cell Hamiltonian file")
    s.add_argument("--svg", help="also write a diagram of the conversion to this SVG file")
    s.set_defaults(func=cmd_convert_rate)

    s = sub.add_parser("oracle")  # brute-force cross-check, deliberately undocumented in --help
    s.add_argument("--hamiltonian", required=True)
    s.add_argument("--entropy", type=float, required=True)
    s.add_argument("--resolution", type=int)
    s.set_defaults(func=cmd_oracle)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (ConvergenceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

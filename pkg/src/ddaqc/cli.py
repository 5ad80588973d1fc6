"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 usage / parameter /
I/O error, 3 a resource budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import codes, graphs, hamiltonians, simulator
from .errors import DDAQCError, ParameterError
from .pauli import format_pauli

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
SLOPE_TARGET, SLOPE_TOL = 2.0, 0.3
BOUND_CONSTANT_MAX = 10.0


# ---------------------------------------------------------------------------
# I/O helpers


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParameterError(f"expected comma-separated integers, got {text!r}") from exc


def _build_code(family: str, k: int) -> codes.StabilizerCode:
    if family == "6k2k2":
        return codes.build_6k2k2(k)
    if family == "gottesman":
        return codes.build_gottesman(k)
    raise ParameterError(f"unknown code family {family!r}")


def _code_for_logical(n_logical: int, family: str = "6k2k2") -> codes.StabilizerCode:
    if n_logical < 2 or n_logical % 2:
        raise ParameterError(f"the code families encode an even number (>= 2) of logical qubits, got {n_logical}")
    return _build_code(family, n_logical // 2)


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    c = _build_code(args.family, args.k)
    _emit(_dumps(c.to_dict()), args.out)
    return EXIT_OK


def verify_report(c: codes.StabilizerCode, max_weight: int, budget: int | None) -> dict[str, Any]:
    rep = codes.verify_code(c)
    dist = codes.distance(c, max_weight, budget)
    weight_one = codes.detects_all_weight_one(c)
    ok = rep.ok and weight_one
    if c.family in ("6k2k2", "gottesman"):
        ok = ok and dist.distance == 2
    return {
        "n": c.n,
        "k": c.k,
        "family": c.family,
        "css": c.css,
        "checks": rep.checks,
        "failures": {k: v for k, v in rep.failures.items() if v},
        "detects_all_weight_one": weight_one,
        "distance": dist.to_dict(),
        "ok": ok,
    }


def cmd_verify(args) -> int:
    c = codes.StabilizerCode.from_dict(_load_json(args.code))
    report = verify_report(c, args.max_weight, args.budget)
    _emit(_dumps(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_CHECK


def cmd_problem(args) -> int:
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    h = hamiltonians.grid_problem(args.rows, args.cols, args.coupling, args.field, rng)
    _emit(_dumps(h.to_dict()), args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    h = hamiltonians.PauliHamiltonian.from_dict(_load_json(args.hamiltonian))
    if args.code:
        c = codes.StabilizerCode.from_dict(_load_json(args.code))
    else:
        c = _code_for_logical(h.n, args.family)
    enc = hamiltonians.encode_hamiltonian(h, c)
    if args.penalty is not None:
        enc = enc + hamiltonians.penalty_hamiltonian(c, args.penalty)
    audit = hamiltonians.commutation_audit(enc, c)
    doc = enc.to_dict()
    doc["code"] = {"family": c.family, "k": c.k}
    _emit(_dumps(doc), args.out)
    report = {
        "terms": len(enc),
        "max_weight": enc.max_weight(),
        "commutes_with_all_generators": not audit,
        "anticommuting": [{"term": t, "generator": i} for t, i in audit],
    }
    if args.report:
        Path(args.report).write_text(_dumps(report))
    elif args.out:
        sys.stdout.write(_dumps(report))
    return EXIT_OK if not audit else EXIT_CHECK


def _graph_from_input(args) -> graphs.InteractionGraph:
    doc = _load_json(args.input)
    if "generators" in doc:
        c = codes.StabilizerCode.from_dict(doc)
        return graphs.logical_graph(c, include_pairs=args.pairs, include_generators=args.penalties)
    h = hamiltonians.PauliHamiltonian.from_dict(doc)
    tag = doc.get("code")
    if args.encode:
        c = _code_for_logical(h.n, args.family)
        return graphs.encoded_interaction_graph(h, c, not args.no_single_body, args.penalties)
    if tag:
        c = _code_for_logical(int(tag["k"]), tag.get("family", "6k2k2"))
        ops = h.operators
        if not args.no_single_body:
            ops += [*c.logical_x, *c.logical_z]
        if args.penalties:
            ops += hamiltonians.penalty_hamiltonian(c).operators
        return graphs.interaction_graph(ops, names=graphs._names_for(c))
    return graphs.interaction_graph(h)


def cmd_graph(args) -> int:
    g = _graph_from_input(args)
    if args.format == "dot":
        _emit(graphs.to_dot(g), args.out)
    else:
        _emit(_dumps(graphs.graph_report(g, with_witness=not args.no_witness)), args.out)
    return EXIT_OK


def cmd_sim_init(args) -> int:
    report = init_report(args.k, args.method, args.T)
    _emit(_dumps(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_CHECK


def init_report(k: int, method: str = "exact", T: float | None = None) -> dict[str, Any]:
    c = codes.build_6k2k2(k)
    psi = simulator.build_initial_state(k, method=method, T=T)
    gens = {format_pauli(g): simulator.expectation(psi, g) for g in c.generators}
    pairs = {}
    for i in range(1, k + 1):
        for kind in "XZ":
            op = codes.reduce_logical(c, codes.logical_product(c, kind, [2 * i - 1, 2 * i]))
            pairs[format_pauli(op)] = simulator.expectation(psi, op)
    h0 = hamiltonians.initial_hamiltonian(k)
    evals = np.linalg.eigvalsh(simulator.restrict_to_codespace(h0, c))
    ground = float(evals[0])
    degeneracy = int(np.sum(evals <= ground + 1e-9))
    gap = float(evals[degeneracy]) - ground if degeneracy < len(evals) else 0.0
    energy = simulator.expectation(psi, h0)
    tol = 1e-10 if method == "exact" else 1e-2
    ok = (all(abs(v - 1) < tol for v in gens.values())
          and all(abs(v - 1) < tol for v in pairs.values())
          and degeneracy == 1 and abs(energy - ground) < tol * max(1.0, abs(ground)))
    return {
        "k": k,
        "method": method,
        "generator_expectations": gens,
        "logical_pair_expectations": pairs,
        "codespace_spectrum": [float(e) for e in evals],
        "ground_energy": ground,
        "ground_degeneracy": degeneracy,
        "gap": gap,
        "state_energy": energy,
        "ok": ok,
    }


def cmd_sim_cat(args) -> int:
    if args.T is None:
        res = simulator.converge_cat(args.m, args.basis, target=args.target)
    else:
        steps = args.steps or max(1, math.ceil(args.T / 0.05))
        res = simulator.prepare_cat(args.m, args.basis, args.T, steps)
    report = {
        "m": args.m,
        "basis": args.basis,
        "T": res.total_time,
        "steps": res.steps,
        "cat_overlap": res.target_overlap,
        "final_ground_overlap": res.final_ground_overlap,
        "parity_drift": res.drift("parity", reference=1.0),
        "min_ground_overlap": min(res.ground_overlaps),
        "ok": res.target_overlap > args.target,
    }
    _emit(_dumps(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_CHECK


def default_dd_problem(k: int, seed: int | None = None) -> hamiltonians.PauliHamiltonian:
    """Logical 2-local Hamiltonian on 2k qubits used by ``simulate dd``."""
    m = 2 * k
    rng = np.random.default_rng(seed) if seed is not None else None
    base = [0.5, 0.3]
    terms = []
    for i in range(m):
        for j, kind in enumerate("XZ"):
            c = float(rng.uniform(-1, 1)) if rng is not None else base[j]
            terms.append((c, "I" * i + kind + "I" * (m - i - 1)))
    for i in range(m - 1):
        for j, kind in enumerate("XZ"):
            c = float(rng.uniform(-1, 1)) if rng is not None else (0.4, 0.25)[j]
            terms.append((c, "I" * i + kind * 2 + "I" * (m - i - 2)))
    return hamiltonians.PauliHamiltonian.from_strings(m, terms)


def dd_summary(records: list[simulator.FidelityRecord], norm: float) -> dict[str, Any]:
    """Bound constant plus log-log fits vs tau (at the smallest pulse count) and
    vs pulse count (at the smallest tau), i.e. in the small-error corner."""
    summary: dict[str, Any] = {"h_norm": norm, "bound_constant": simulator.bound_constant(records)}
    nds = sorted({r.n_pulses for r in records if r.n_pulses > 0})
    taus = sorted({r.tau for r in records})
    checks = {"bound_constant_le_10": summary["bound_constant"] <= BOUND_CONSTANT_MAX}
    if len(taus) >= 2 and nds:
        nd = nds[0]
        sel = [r for r in records if r.n_pulses == nd and r.infidelity > 0]
        fit = simulator.fit_loglog([r.tau for r in sel], [r.infidelity for r in sel])
        summary["fit_vs_tau"] = {**fit.to_dict(), "n_d": nd}
        checks["slope_vs_tau"] = abs(fit.slope - SLOPE_TARGET) <= SLOPE_TOL
    if len(nds) >= 2:
        tau = taus[0]
        sel = [r for r in records if r.tau == tau and r.n_pulses > 0 and r.infidelity > 0]
        fit = simulator.fit_loglog([r.n_pulses for r in sel], [r.infidelity for r in sel])
        summary["fit_vs_nd"] = {**fit.to_dict(), "tau": tau}
        checks["slope_vs_nd"] = abs(fit.slope - SLOPE_TARGET) <= SLOPE_TOL
    summary["checks"] = checks
    summary["ok"] = all(checks.values())
    return summary


def _records_text(records, fmt: str) -> str:
    rows = [r.to_dict() for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["tau", "n_d", "infidelity", "bound"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def cmd_sim_dd(args) -> int:
    if args.hamiltonian:
        logical = hamiltonians.PauliHamiltonian.from_dict(_load_json(args.hamiltonian))
        if logical.n != 2 * args.k:
            raise ParameterError(f"Hamiltonian acts on {logical.n} logical qubits, --k {args.k} needs {2 * args.k}")
    else:
        logical = default_dd_problem(args.k, args.seed)
    c = codes.build_6k2k2(args.k)
    h_aqc = hamiltonians.encode_hamiltonian(logical, c)
    if args.penalty is not None:
        h_aqc = h_aqc + hamiltonians.penalty_hamiltonian(c, args.penalty)
    records = simulator.dd_scaling_experiment(h_aqc, _float_list(args.taus), _int_list(args.nd))
    summary = dd_summary(records, simulator.spectral_norm(h_aqc))
    text = _records_text(records, args.format)
    if args.out:
        Path(args.out).write_text(text)
        _emit(_dumps(summary), args.summary)
    else:
        sys.stdout.write(text)
        _emit(_dumps(summary), args.summary)
    return EXIT_OK if summary["ok"] else EXIT_CHECK


def cmd_demo(args) -> int:
    """Full k=1 pipeline; artifacts go to ``--out-dir``."""
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    c = codes.build_6k2k2(1)
    (out / "code.json").write_text(_dumps(c.to_dict()))
    ver = verify_report(c, 3, None)
    (out / "verify.json").write_text(_dumps(ver))

    problem = hamiltonians.grid_problem(1, 2, 1.0, 0.5)
    enc = hamiltonians.encode_hamiltonian(problem, c)
    (out / "problem.json").write_text(_dumps(problem.to_dict()))
    (out / "encoded.json").write_text(_dumps({**enc.to_dict(), "code": {"family": c.family, "k": c.k}}))
    g = graphs.encoded_interaction_graph(problem, c)
    (out / "graph.json").write_text(_dumps(graphs.graph_report(g)))
    (out / "graph.dot").write_text(graphs.to_dot(g))

    bp = graphs.full_bipartition(graphs.logical_graph(c, True, True), c.n)
    tc = graphs.hadamard_transform(c, bp)
    (out / "code_unmatched.json").write_text(_dumps(tc.to_dict()))
    tver = verify_report(tc, 3, None)

    init = init_report(1)
    (out / "init.json").write_text(_dumps(init))
    cat = simulator.converge_cat(4, "Z")
    records = simulator.dd_scaling_experiment(enc, [0.005, 0.01, 0.02, 0.04], [4, 8, 16, 32])
    (out / "dd.jsonl").write_text(_records_text(records, "json"))
    dd = dd_summary(records, simulator.spectral_norm(enc))
    (out / "dd_summary.json").write_text(_dumps(dd))

    summary = {
        "verify_ok": ver["ok"],
        "distance": ver["distance"]["distance"],
        "graph_max_degree": graphs.max_degree(g),
        "graph_planar": graphs.is_planar(g).planar,
        "unmatched_code_ok": tver["ok"],
        "init_ok": init["ok"],
        "cat_T": cat.total_time,
        "cat_overlap": cat.target_overlap,
        "dd_ok": dd["ok"],
    }
    summary["ok"] = all(v for k, v in summary.items() if k.endswith("ok"))
    sys.stdout.write(_dumps(summary))
    return EXIT_OK if summary["ok"] else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddaqc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a code description as JSON")
    b.add_argument("family", choices=["6k2k2", "gottesman"])
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check code invariants and brute-force the distance")
    v.add_argument("code")
    v.add_argument("--max-weight", type=_positive_int, default=3)
    v.add_argument("--budget", type=_positive_int, default=None,
                   help=f"enumeration budget (default ${codes.BUDGET_ENV_VAR} or {codes.DEFAULT_DISTANCE_BUDGET})")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("problem", help="write a grid problem Hamiltonian over logical qubits")
    pr.add_argument("--rows", type=_positive_int, required=True)
    pr.add_argument("--cols", type=_positive_int, required=True)
    pr.add_argument("--coupling", type=float, default=1.0)
    pr.add_argument("--field", type=float, default=0.0)
    pr.add_argument("--seed", type=int, default=None)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_problem)

    e = sub.add_parser("encode", help="encode a logical Hamiltonian through a code")
    e.add_argument("hamiltonian")
    e.add_argument("--code", help="code JSON (default: 6k2k2 sized to the Hamiltonian)")
    e.add_argument("--family", choices=["6k2k2", "gottesman"], default="6k2k2")
    e.add_argument("--penalty", type=float, default=None, help="add weight-two penalty terms at this strength")
    e.add_argument("--report", help="write the commutation audit here")
    e.add_argument("--out")
    e.set_defaults(func=cmd_encode)

    g = sub.add_parser("graph", help="degree / planarity / bipartiteness report")
    g.add_argument("input", help="Hamiltonian JSON or code JSON")
    g.add_argument("--encode", action="store_true", help="treat the Hamiltonian as logical and encode it first")
    g.add_argument("--family", choices=["6k2k2", "gottesman"], default="6k2k2")
    g.add_argument("--penalties", action="store_true", help="include weight-two stabilizer generators as edges")
    g.add_argument("--no-single-body", action="store_true", help="omit single-qubit logical edges")
    g.add_argument("--pairs", action="store_true", help="code input: add reduced pair logicals")
    g.add_argument("--no-witness", action="store_true")
    g.add_argument("--format", choices=["json", "dot"], default="json")
    g.add_argument("--out")
    g.set_defaults(func=cmd_graph)

    s = sub.add_parser("simulate", help="statevector simulations")
    ssub = s.add_subparsers(dest="sim", required=True)

    si = ssub.add_parser("init", help="build and check the encoded initial state")
    si.add_argument("--k", type=_positive_int, default=1)
    si.add_argument("--method", choices=["exact", "adiabatic"], default="exact")
    si.add_argument("--T", type=float, default=None, help="anneal time for --method adiabatic")
    si.add_argument("--out")
    si.set_defaults(func=cmd_sim_init)

    sc = ssub.add_parser("cat", help="adiabatic cat-state preparation")
    sc.add_argument("--m", type=int, default=4)
    sc.add_argument("--basis", choices=["X", "Z"], default="Z")
    sc.add_argument("--T", type=float, default=None, help="anneal time (default: double from 1 until converged)")
    sc.add_argument("--steps", type=_positive_int, default=None)
    sc.add_argument("--target", type=float, default=0.99)
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_sim_cat)

    sd = ssub.add_parser("dd", help="local vs exact decoupling pulse sweep")
    sd.add_argument("--k", type=_positive_int, default=1)
    sd.add_argument("--taus", default="0.005,0.01,0.02,0.04")
    sd.add_argument("--nd", default="4,8,16,32")
    sd.add_argument("--hamiltonian", help="logical Hamiltonian JSON on 2k qubits")
    sd.add_argument("--penalty", type=float, default=None)
    sd.add_argument("--seed", type=int, default=None, help="draw random problem coefficients")
    sd.add_argument("--format", choices=["json", "csv"], default="json")
    sd.add_argument("--out", help="records file (JSON lines or CSV)")
    sd.add_argument("--summary", help="fit summary JSON (default stdout)")
    sd.set_defaults(func=cmd_sim_dd)

    d = sub.add_parser("demo", help="run the full k=1 pipeline")
    d.add_argument("--out-dir", default="ddaqc-demo")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DDAQCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

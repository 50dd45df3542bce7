"""Command-line front end.

Thin adapters over the library: every value printed is the library result
formatted at 17 significant digits, CSV with '.' decimals and LF endings.
Exit codes: 0 success, 1 computation error (JSON diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import continuum, ensemble, ontology, pbr
from .errors import MicrocanonError


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_table(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _gas_spec(args) -> ensemble.GasSpec:
    return ensemble.GasSpec(n=args.n, m=args.m, e_units=args.e,
                            delta=args.delta, eps0_units=args.eps0_units)


def _binning_rows(spec, states):
    rows = []
    json_rows = []
    for s in states:
        mv = ensemble.multiplicity(s)
        omega = mv.exact if mv.exact is not None else None
        rows.append([json.dumps(list(s.n)),
                     str(omega) if omega is not None else _fmt(mv.log_omega),
                     _fmt(ensemble.entropy(s)), None, mv])
        json_rows.append({"binning": list(s.n), "omega": omega,
                          "log_omega": mv.log_omega,
                          "entropy": ensemble.entropy(s)})
    total = sum(ensemble.multiplicity(s).exact or 0 for s in states)
    for row, jrow, s in zip(rows, json_rows, states):
        mv = row.pop()
        mu = (mv.exact / total) if (mv.exact is not None and total) else None
        row[3] = _fmt(mu) if mu is not None else ""
        jrow["mu"] = mu
    return rows, json_rows


def cmd_gas_enumerate(args) -> int:
    spec = _gas_spec(args)
    states = ensemble.enumerate_binnings(spec, max_states=args.max_states)
    rows, json_rows = _binning_rows(spec, states)
    if args.format == "json":
        _emit(args, _json_text(json_rows))
    else:
        _emit(args, _csv_table(["binning", "omega", "entropy", "mu"], rows))
    return 0


def cmd_gas_argmax(args) -> int:
    spec = _gas_spec(args)
    states = ensemble.most_probable_binnings(spec, max_states=args.max_states)
    rows, json_rows = _binning_rows(spec, states)
    if args.format == "json":
        _emit(args, _json_text(json_rows))
    else:
        _emit(args, _csv_table(["binning", "omega", "entropy", "mu"], rows))
    return 0


def cmd_gas_fit(args) -> int:
    spec = _gas_spec(args)
    fit = ensemble.boltzmann_fit(spec)
    if args.format == "json":
        _emit(args, _json_text({"alpha": fit.alpha, "beta": fit.beta,
                                "predicted": list(fit.predicted)}))
    else:
        rows = [[str(i), _fmt(spec.energy(i)), _fmt(p), _fmt(fit.alpha), _fmt(fit.beta)]
                for i, p in enumerate(fit.predicted)]
        _emit(args, _csv_table(["bin", "eps", "predicted", "alpha", "beta"], rows))
    return 0


def cmd_gas_solve(args) -> int:
    gas = continuum.ContinuumGas(n=args.n, t=args.k * args.t, eps0=args.eps0)
    e1 = continuum.solve_total_energy(gas)
    if args.format == "json":
        _emit(args, _json_text({"e1": e1}))
    else:
        _emit(args, _csv_table(["e1"], [[_fmt(e1)]]))
    return 0


def cmd_gas_sample(args) -> int:
    spec = _gas_spec(args)
    counts = ensemble.sample_microstates(spec, steps=args.steps, seed=args.seed)
    doc = {json.dumps(list(k)): v for k, v in sorted(counts.items())}
    if args.format == "csv":
        rows = [[k, str(v)] for k, v in doc.items()]
        _emit(args, _csv_table(["binning", "count"], rows))
    else:
        _emit(args, _json_text(doc))
    return 0


def cmd_gas_measure(args) -> int:
    spec = _gas_spec(args)
    gm = ontology.gas_model(spec, max_states=args.max_states)
    probs = gm.outcome_probabilities_exact()
    if args.format == "json":
        _emit(args, _json_text([
            {"outcome": o, "eps": e, "p": float(p)}
            for o, e, p in zip(gm.model.measurements[0].outcomes,
                               gm.outcome_energies, probs)
        ]))
    else:
        rows = [[o, _fmt(e), _fmt(float(p))]
                for o, e, p in zip(gm.model.measurements[0].outcomes,
                                   gm.outcome_energies, probs)]
        _emit(args, _csv_table(["outcome", "eps", "p"], rows))
    return 0


def cmd_ontology_validate(args) -> int:
    model = ontology.load_model(args.model)
    report = ontology.validate(model)
    doc = [{"where": v.where, "message": v.message, "magnitude": v.magnitude}
           for v in report]
    if args.format == "csv":
        rows = [[v.where, v.message, _fmt(v.magnitude)] for v in report]
        _emit(args, _csv_table(["where", "message", "magnitude"], rows))
    else:
        _emit(args, _json_text({"valid": not report, "violations": doc}))
    return 0


def cmd_ontology_check(args) -> int:
    model = ontology.load_model(args.model)
    max_dev, table = ontology.born_deviation(model)
    if args.format == "csv":
        rows = [[e.preparation, e.measurement, e.outcome,
                 _fmt(e.target), _fmt(e.actual), _fmt(e.deviation)] for e in table]
        _emit(args, _csv_table(
            ["preparation", "measurement", "outcome", "target", "actual", "deviation"], rows))
    else:
        _emit(args, _json_text({
            "max_deviation": max_dev,
            "table": [e.__dict__ for e in table],
        }))
    return 0


def cmd_ontology_overlap(args) -> int:
    model = ontology.load_model(args.model)
    p1 = model.preparation(args.pair[0])
    p2 = model.preparation(args.pair[1])
    report = ontology.overlap_classify(p1, p2, model.lam)
    if args.format == "json":
        _emit(args, _json_text({
            "class": report.classification,
            "omega": report.overlap_mass,
            "common_support": list(report.common_support_labels),
        }))
    else:
        _emit(args, _csv_table(
            ["class", "omega", "common_support"],
            [[report.classification, _fmt(report.overlap_mass),
              " ".join(report.common_support_labels)]]))
    return 0


def cmd_ontology_classify(args) -> int:
    model = ontology.load_model(args.model)
    info = ontology.information_class(model)
    if args.format == "json":
        _emit(args, _json_text({
            "verdict": info.verdict,
            "per_lambda": {k: list(v) for k, v in info.per_lambda.items()},
        }))
    else:
        rows = [[label, " ".join(owners), info.verdict]
                for label, owners in info.per_lambda.items()]
        _emit(args, _csv_table(["lambda", "preparations", "verdict"], rows))
    return 0


def _parse_grid(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def cmd_pbr_demo(args) -> int:
    qs = _parse_grid(args.q_grid)
    rows = []
    for q in qs:
        v = pbr.min_forbidden_probability(q, resolution=args.resolution,
                                          method=args.method)
        rows.append((q, v))
    if args.format == "json":
        _emit(args, _json_text([{"q": q, "min_forbidden_prob": v} for q, v in rows]))
    else:
        _emit(args, _csv_table(["q", "min_forbidden_prob"],
                               [[_fmt(q), _fmt(v)] for q, v in rows]))
    return 0


def cmd_pbr_scan(args) -> int:
    eps_grid = _parse_grid(args.eps_grid)
    curve = pbr.epsilon_overlap_tradeoff(eps_grid, resolution=args.resolution,
                                         method=args.method)
    if args.format == "json":
        _emit(args, _json_text([{"eps": e, "q_max": q} for e, q in curve]))
    else:
        _emit(args, _csv_table(["eps", "q_max"],
                               [[_fmt(e), _fmt(q)] for e, q in curve]))
    return 0


def cmd_pbr_cat(args) -> int:
    fixture = pbr.cat_fixture(complex(args.a), complex(args.b))
    _emit(args, _json_text(ontology.model_to_dict(fixture.model)))
    return 0


def _add_common(p: argparse.ArgumentParser, default_format: str = "csv"):
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)


def _add_spec_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, required=True, help="particle count")
    p.add_argument("--m", type=int, required=True, help="number of energy bins")
    p.add_argument("--e", type=int, required=True, help="total energy in lattice units")
    p.add_argument("--delta", type=float, default=1.0, help="energy per lattice unit")
    p.add_argument("--eps0-units", type=int, default=0, dest="eps0_units",
                   help="ground-state offset in lattice units")
    p.add_argument("--max-states", type=int, default=ensemble.DEFAULT_STATE_CAP,
                   dest="max_states")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="microcanon")
    sub = top.add_subparsers(dest="group", required=True)

    gas = sub.add_parser("gas", help="lattice-gas statistics")
    gas_sub = gas.add_subparsers(dest="command", required=True)

    p = gas_sub.add_parser("enumerate", help="all binning states with omega/entropy/mu")
    _add_spec_flags(p); _add_common(p); p.set_defaults(func=cmd_gas_enumerate)

    p = gas_sub.add_parser("argmax", help="most probable binning states")
    _add_spec_flags(p); _add_common(p); p.set_defaults(func=cmd_gas_argmax)

    p = gas_sub.add_parser("fit", help="Lagrange-multiplier occupancy fit")
    _add_spec_flags(p); _add_common(p); p.set_defaults(func=cmd_gas_fit)

    p = gas_sub.add_parser("solve", help="total energy from temperature")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--t", type=float, required=True, help="temperature (k = 1 units)")
    p.add_argument("--eps0", type=float, default=0.0)
    p.add_argument("--k", type=float, default=1.0,
                   help="Boltzmann-constant scale applied to --t at the boundary")
    _add_common(p); p.set_defaults(func=cmd_gas_solve)

    p = gas_sub.add_parser("sample", help="microstate random walk visit counts")
    _add_spec_flags(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_common(p, default_format="json"); p.set_defaults(func=cmd_gas_sample)

    p = gas_sub.add_parser("measure", help="tagged-particle energy distribution")
    _add_spec_flags(p); _add_common(p); p.set_defaults(func=cmd_gas_measure)

    ont = sub.add_parser("ontology", help="finite ontological models")
    ont_sub = ont.add_subparsers(dest="command", required=True)

    p = ont_sub.add_parser("validate", help="report violated model invariants")
    p.add_argument("model"); _add_common(p, default_format="json")
    p.set_defaults(func=cmd_ontology_validate)

    p = ont_sub.add_parser("check", help="deviation from Born targets")
    p.add_argument("model"); _add_common(p, default_format="json")
    p.set_defaults(func=cmd_ontology_check)

    p = ont_sub.add_parser("overlap", help="overlap class and mass of two preparations")
    p.add_argument("model")
    p.add_argument("--pair", nargs=2, required=True, metavar=("PREP1", "PREP2"))
    _add_common(p); p.set_defaults(func=cmd_ontology_overlap)

    p = ont_sub.add_parser("classify", help="minimal/non-minimal information verdict")
    p.add_argument("model"); _add_common(p, default_format="json")
    p.set_defaults(func=cmd_ontology_classify)

    pbr_p = sub.add_parser("pbr", help="overlap no-go checks")
    pbr_sub = pbr_p.add_subparsers(dest="command", required=True)

    p = pbr_sub.add_parser("demo", help="min forbidden probability over an overlap grid")
    p.add_argument("--q-grid", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
                   dest="q_grid")
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--method", choices=["lp", "grid"], default="lp")
    _add_common(p); p.set_defaults(func=cmd_pbr_demo)

    p = pbr_sub.add_parser("scan", help="precision-versus-overlap tradeoff curve")
    p.add_argument("--eps-grid", required=True, dest="eps_grid",
                   help="comma-separated ascending tolerances in [0, 1]")
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--method", choices=["lp", "grid"], default="lp")
    _add_common(p); p.set_defaults(func=cmd_pbr_scan)

    p = pbr_sub.add_parser("cat", help="disjoint-support cat/atom model as JSON")
    p.add_argument("--a", required=True, help="alive amplitude, e.g. 0.6 or 0.6+0j")
    p.add_argument("--b", required=True, help="dead amplitude")
    _add_common(p, default_format="json"); p.set_defaults(func=cmd_pbr_cat)

    return top


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MicrocanonError as exc:
        sys.stderr.write(_json_text({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    except (KeyError, ValueError, OSError) as exc:
        sys.stderr.write(_json_text({"error": type(exc).__name__, "message": str(exc)}))
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line interface: ``qnet <subcommand> ...``.

Exit codes: 0 success, 1 domain error (or a negative verdict where noted),
2 parse error.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__, corpus, lhv, netfile, oracle
from .canonical import canonicalize
from .distribution import OutcomeDistribution, format_fraction
from .errors import NotCanonical, ParseError, QnetError
from .network import final_state, run_quantum, validate
from .reduction import teleport_reduce, verify_reduction

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE = 0, 1, 2


def _bool(v):
    return "true" if v else "false"


def _emit(report: dict, fmt="text", out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump(_jsonable(report), out, indent=2)
        out.write("\n")
        return
    for key, value in report.items():
        if isinstance(value, bool):
            value = _bool(value)
        elif isinstance(value, Fraction):
            value = format_fraction(value)
        out.write(f"{key}: {value}\n")


def _jsonable(report: dict):
    return {
        k: format_fraction(v) if isinstance(v, Fraction) else v
        for k, v in report.items()
    }


def schema(name) -> dict:
    """Shipped JSON schema for a ``--format json`` document (``distribution``, ``lhv_report``, ...)."""
    text = resources.files("qnet").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def distribution_json(d: OutcomeDistribution, approx=None):
    doc = {
        "groups": [[name, w] for name, w in d.groups],
        "probabilities": {k: format_fraction(v) for k, v in sorted(d.items())},
    }
    if approx is not None:
        doc["oracle"] = {k: approx.get(k, 0.0) for k in sorted(set(d.probs) | set(approx))}
        doc["max_deviation"] = oracle.max_deviation(d, approx)
    return doc


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args):
    spec = netfile.load(args.network)
    k = validate(spec)
    print(f"k={k}")
    print(f"vertices={spec.n} edges={len(spec.edges)} parties={len(spec.parties)} "
          f"ancillas={spec.total_qubits - spec.n} mixed={_bool(spec.has_mixed)}")
    if args.dump_stab:
        # n generators, then n destabilizers
        print(final_state(spec).dump())
    return EXIT_OK


def cmd_run(args):
    spec = netfile.load(args.network)
    d = run_quantum(spec)
    approx = oracle.statevector_run(spec) if args.oracle else None
    if args.format == "json":
        json.dump(distribution_json(d, approx), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK
    for key, p in sorted(d.items()):
        line = f"{key}\t{format_fraction(p)}"
        if approx is not None:
            line += f"\t{approx.get(key, 0.0):.12g}"
        print(line)
    if approx is not None:
        extra = sorted(set(approx) - set(d.probs))
        for key in extra:
            print(f"{key}\t0/1\t{approx[key]:.12g}")
        print(f"# max_deviation {oracle.max_deviation(d, approx):.3e}")
    return EXIT_OK


def cmd_lhv(args):
    spec = netfile.load(args.network)
    variant = lhv.Variant.TRIO if args.trio else lhv.Variant.TWOBIT
    canonicalized = False
    target = spec
    try:
        model = lhv.synthesize(spec)
    except NotCanonical:
        if spec.has_mixed:
            raise
        # General pure 2-network: bring it to Bell-pair form first.
        target, _ = canonicalize(spec)
        model = lhv.synthesize(target)
        canonicalized = True
    model_dist = lhv.evaluate(model, variant, max_assignments=args.max_assignments)
    quantum = run_quantum(target)
    # Parity spectra need bit strings; post-processed symbols fall back to direct comparison.
    method = "parity" if quantum.is_binary() and model_dist.is_binary() else "direct"
    equal = lhv.equal_distributions(model_dist, quantum, method=method)
    report = {
        "equal": equal,
        "variant": variant.value,
        "canonicalized": canonicalized,
        "assignments": lhv.assignment_count(model, variant),
        "outcomes": len(quantum),
    }
    if args.format == "json":
        doc = dict(report)
        if args.emit_model:
            doc["model"] = model.dumps()
        _emit(doc, "json")
    else:
        _emit(report)
        if args.emit_model == "-":
            print()
            sys.stdout.write(model.dumps())
    if args.emit_model and args.emit_model != "-":
        Path(args.emit_model).write_text(model.dumps(), encoding="utf-8")
    return EXIT_OK if equal else EXIT_DOMAIN


def cmd_reduce(args):
    spec = netfile.load(args.network)
    reduced, mapping = teleport_reduce(spec)
    report = {
        "k_before": validate(spec),
        "k_after": validate(reduced),
        "teleported": mapping.teleported,
        "relay_parties": ",".join(mapping.relay_parties.values()),
    }
    if args.output:
        netfile.save(reduced, args.output)
        report["written"] = str(args.output)
    else:
        names = {p.name: p.post_file or f"{p.name}.post" for p in reduced.parties if p.post is not None}
        sys.stdout.write(netfile.dumps(reduced, names))
        return EXIT_OK
    _emit(report, args.format)
    return EXIT_OK


def cmd_verify_reduction(args):
    spec = netfile.load(args.network)
    r = verify_reduction(spec)
    _emit(r.as_dict(), args.format)
    return EXIT_OK if r.equal and r.postselect_prob == r.expected_prob else EXIT_DOMAIN


def cmd_witness(args):
    from . import witness

    if args.bound:
        _emit({"classical_bound": witness.classical_bound(args.scoring), "scoring": args.scoring}, args.format)
        return EXIT_OK
    report, d = witness.report(args.scoring)
    _emit(report, args.format)
    if args.table:
        print("x\ty\twin_prob")
        for (x, y), p in sorted(witness.score_table(d).items()):
            print(f"{x}\t{y}\t{format_fraction(p)}")
    return EXIT_OK if report["nonlocal"] else EXIT_DOMAIN


def cmd_check_channel(args):
    try:
        ch = oracle.load_channel(args.channel)
    except OSError as exc:
        raise QnetError(f"cannot read {args.channel}: {exc}") from None
    ok = oracle.check_classically_simulatable(ch)
    _emit({"dim": oracle.channel_dim(ch), "classically_simulatable": ok}, args.format)
    return EXIT_OK


def cmd_gen(args):
    spec = corpus.generate(args.kind, args.seed)
    text = netfile.dumps(spec)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="qnet", description="Exact Clifford network correlations and local models.")
    parser.add_argument("--version", action="version", version=f"qnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "json")):
        p.add_argument("--format", choices=choices, default=choices[0])

    p = sub.add_parser("validate", help="check a network file and report k")
    p.add_argument("network")
    p.add_argument("--dump-stab", action="store_true", help="print the final stabilizer tableau (first mixture component)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="exact outcome distribution")
    p.add_argument("network")
    p.add_argument("--oracle", action="store_true", help="add dense-simulation probabilities and the max deviation")
    fmt(p, ("tsv", "json"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lhv", help="synthesize the local model and compare with the quantum distribution")
    p.add_argument("network")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--trio", action="store_true", help="three independent bits per edge")
    group.add_argument("--pusey", action="store_true", help="two bits per edge with Y = X xor Z (default)")
    p.add_argument("--emit-model", nargs="?", const="-", default=None, metavar="FILE",
                   help="write the model (stdout when no file is given)")
    p.add_argument("--max-assignments", type=int, default=lhv.DEFAULT_MAX_ASSIGNMENTS)
    fmt(p)
    p.set_defaults(func=cmd_lhv)

    p = sub.add_parser("reduce", help="teleportation reduction to a 2-network")
    p.add_argument("network")
    p.add_argument("-o", "--output")
    fmt(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-reduction", help="check the post-selected reduction identity")
    p.add_argument("network")
    fmt(p)
    p.set_defaults(func=cmd_verify_reduction)

    p = sub.add_parser("witness", help="magic-square nonlocality witness")
    p.add_argument("game", nargs="?", choices=["magic-square"], default="magic-square")
    p.add_argument("--bound", action="store_true", help="only enumerate the classical bound")
    p.add_argument("--scoring", choices=["containing", "auto"], default="containing")
    p.add_argument("--table", action="store_true", help="append the per-(x, y) score table as TSV")
    fmt(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("check-channel", help="test a superoperator for classical simulatability")
    p.add_argument("channel")
    fmt(p)
    p.set_defaults(func=cmd_check_channel)

    p = sub.add_parser("gen-random-network", help="write a seeded random network")
    p.add_argument("--kind", choices=corpus.KINDS, default="canonical")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QnetError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

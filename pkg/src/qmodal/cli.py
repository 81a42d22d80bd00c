"""Command-line front end.

Exit codes: 0 for success or a passing check, 1 for a failing check or an
exhausted search, 2 for usage errors, malformed input and exceeded size
guards.  ``--json`` switches output to the JSON-lines report format; both
modes carry identical verdicts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import baoframe, checker, embedding, formula, oml
from .guards import GuardExceeded


def _read_formula(args) -> str:
    if args.formula is not None and args.infile is not None:
        raise ValueError("give the formula inline or via --in, not both")
    if args.formula is not None:
        return args.formula
    if args.infile is None:
        raise ValueError("no formula given (inline or --in FILE)")
    if args.infile == "-":
        return sys.stdin.read()
    with open(args.infile, encoding="utf-8") as fh:
        return fh.read()


def _add_formula_args(sub) -> None:
    sub.add_argument("formula", nargs="?", default=None,
                     help="formula text (alternative to --in)")
    sub.add_argument("--in", dest="infile", metavar="FILE", default=None,
                     help="read the formula from FILE ('-' = stdin)")


def _emit_report(report, as_json: bool, show_info: bool = False) -> None:
    if as_json:
        for line in report.to_lines():
            print(line)
        return
    print(report.summary())
    for entry in report.entries:
        if entry.passed is False:
            print(f"  FAIL {entry.name}: {json.dumps(entry.witness, sort_keys=True)}")
        elif show_info and entry.passed is None:
            print(f"  info {entry.name}: {json.dumps(entry.witness, sort_keys=True)}")


# --------------------------------------------------------------------------
# Formula commands


def _cmd_translate(args) -> int:
    f = formula.parse_ql(_read_formula(args))
    out = (formula.translate_diamond_form(f) if args.diamond
           else formula.translate(f))
    text = formula.print_bq(out)
    if args.json:
        print(json.dumps({"input": formula.print_ql(f), "output": text},
                         sort_keys=True))
    else:
        print(text)
    return 0


def _cmd_expand(args) -> int:
    f = formula.parse_ql(_read_formula(args))
    text = formula.print_ql(formula.expand_ql(f))
    if args.json:
        print(json.dumps({"input": formula.print_ql(f), "output": text},
                         sort_keys=True))
    else:
        print(text)
    return 0


# --------------------------------------------------------------------------
# Lattice commands


def _cmd_check_oml(args) -> int:
    data = oml.lattice_from_json(baoframe.load_json(args.file))
    report = oml.check_oml(data)
    _emit_report(report, args.json)
    return 0 if report.passed else 1


def _cmd_gen_oml(args) -> int:
    kind, _, num = args.spec.partition(":")
    if not num.isdigit():
        raise ValueError(f"bad lattice spec {args.spec!r}"
                         " (expected boolean:k or mo:k)")
    k = int(num)
    if kind == "boolean":
        L = oml.gen_boolean(k)
    elif kind == "mo":
        L = oml.gen_mo(k)
    else:
        raise ValueError(f"unknown lattice family {kind!r}")
    text = json.dumps(oml.lattice_to_json(L), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# --------------------------------------------------------------------------
# Frame commands

_FRAME_PROPS = ("symmetry", "seriality", "q-fol", "b-semantic", "q-semantic",
                "fact1", "fact2")


def _cmd_check_frame(args) -> int:
    F = baoframe.frame_from_json(baoframe.load_json(args.file))
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = [p for p in props if p not in _FRAME_PROPS]
    if unknown:
        raise ValueError(f"unknown frame properties: {unknown}"
                         f" (choose from {', '.join(_FRAME_PROPS)})")
    failed_check = False
    for prop in props:
        if prop == "symmetry":
            value = baoframe.check_symmetry(F)
        elif prop == "seriality":
            value = baoframe.check_seriality(F)
        elif prop == "q-fol":
            value = baoframe.check_q_fol(F)
        elif prop == "b-semantic":
            value = baoframe.check_b_semantic(F)
        elif prop == "q-semantic":
            value = baoframe.check_q_semantic(F)
        else:
            report = (baoframe.check_fact1(F) if prop == "fact1"
                      else baoframe.check_fact2(F, args.seed or 0))
            value = report.passed
            failed_check |= not value
        if args.json:
            print(json.dumps({"prop": prop, "value": value}, sort_keys=True))
        else:
            word = ("yes" if value else "no") if not prop.startswith("fact") \
                else ("pass" if value else "fail")
            print(f"{prop}: {word}")
    return 1 if failed_check else 0


# --------------------------------------------------------------------------
# Evaluation commands


def _cmd_eval(args) -> int:
    text = _read_formula(args)
    if args.logic == "ql":
        if not args.lattice:
            raise ValueError("eval --logic ql needs --lattice FILE")
        L = oml.build_lattice(oml.lattice_from_json(
            baoframe.load_json(args.lattice)))
        raw = baoframe.load_json(args.valuation) if args.valuation else {}
        val = {name: L.index(elem) for name, elem in raw.items()}
        result = oml.eval_ql(L, val, formula.parse_ql(text))
        if args.json:
            print(json.dumps({"value": L.elements[result]}, sort_keys=True))
        else:
            print(L.elements[result])
        return 0
    if not args.frame:
        raise ValueError("eval --logic bq needs --frame FILE")
    F = baoframe.frame_from_json(baoframe.load_json(args.frame))
    raw = baoframe.load_json(args.valuation) if args.valuation else {}
    val = baoframe.valuation_from_json(raw, F)
    M = baoframe.KripkeModel(F, val)
    f = formula.parse_bq(text)
    ext = baoframe.extension(M, f)
    states = [s for s in range(F.n) if (ext >> s) & 1]
    if args.state is not None:
        truth = baoframe.eval_bq(M, args.state, f)
        if args.json:
            print(json.dumps({"state": args.state, "true": truth},
                             sort_keys=True))
        else:
            print("true" if truth else "false")
    elif args.json:
        print(json.dumps({"extension": states}, sort_keys=True))
    else:
        print(f"extension: {states}")
    return 0


def _cmd_valid(args) -> int:
    text = _read_formula(args)
    if args.logic == "ql":
        if not args.lattice:
            raise ValueError("valid --logic ql needs --lattice FILE")
        L = oml.build_lattice(oml.lattice_from_json(
            baoframe.load_json(args.lattice)))
        ok, witness = oml.ql_valid(L, formula.parse_ql(text))
        pretty = (None if witness is None
                  else {a: L.elements[x] for a, x in witness.items()})
    else:
        if not args.frame:
            raise ValueError("valid --logic bq needs --frame FILE")
        F = baoframe.frame_from_json(baoframe.load_json(args.frame))
        ok, found = baoframe.bq_valid_on_frame(F, formula.parse_bq(text))
        pretty = None
        if found is not None:
            val, state = found
            pretty = {"valuation": baoframe.valuation_to_json(val),
                      "state": state}
    if args.json:
        print(json.dumps({"valid": ok, "witness": pretty}, sort_keys=True))
    elif ok:
        print("valid")
    else:
        print(f"invalid: {json.dumps(pretty, sort_keys=True)}")
    return 0 if ok else 1


# --------------------------------------------------------------------------
# Embedding commands


def _cmd_embed(args) -> int:
    data = baoframe.load_json(args.file)
    E = embedding.embedding_from_json(data, os.path.dirname(args.file) or ".")
    report = embedding.certify_embedding(E)
    _emit_report(report, args.json)
    return 0 if report.passed else 1


def _load_lattice_arg(args) -> oml.FiniteOML:
    if args.gen:
        kind, _, num = args.gen.partition(":")
        if kind == "boolean":
            return oml.gen_boolean(int(num))
        if kind == "mo":
            return oml.gen_mo(int(num))
        raise ValueError(f"unknown lattice family {kind!r}")
    if not args.lattice:
        raise ValueError("need --lattice FILE or --gen SPEC")
    return oml.build_lattice(oml.lattice_from_json(
        baoframe.load_json(args.lattice)))


def _cmd_embed_search(args) -> int:
    L = _load_lattice_arg(args)
    if args.frame:
        F = baoframe.frame_from_json(baoframe.load_json(args.frame))
        found = embedding.search_embedding(L, F)
        result = None if found is None else (F, found)
    else:
        result = embedding.search_frames_for(
            L, args.max_states, bq_only=not args.all_frames,
            prune_degrees=args.prune_degrees)
    if result is None:
        print("NotFound" if not args.json
              else json.dumps({"found": False}, sort_keys=True))
        return 1
    frame, E = result
    if args.json:
        print(json.dumps({"found": True,
                          "embedding": embedding.embedding_to_json(E)},
                         sort_keys=True))
    else:
        print(f"frame: {json.dumps(baoframe.frame_to_json(frame))}")
        for name, states in embedding.embedding_to_json(E)["map"].items():
            print(f"  {name} -> {states}")
    return 0


def _cmd_closure(args) -> int:
    F = baoframe.frame_from_json(baoframe.load_json(args.frame))
    raw = json.loads(args.seeds)
    if not isinstance(raw, list):
        raise ValueError("--seeds expects a JSON list of state lists")
    seeds = []
    for states in raw:
        mask = 0
        for s in states:
            mask |= 1 << int(s)
        seeds.append(mask)
    family, report = embedding.closure_family(F, seeds)
    if not args.json:
        sets = [[s for s in range(F.n) if (S >> s) & 1] for S in family]
        print(f"family ({len(family)} sets): {sets}")
    _emit_report(report, args.json)
    return 0 if report.passed else 1


# --------------------------------------------------------------------------
# Suites


def _suite_config(args, frame_filter: str = "none") -> checker.SuiteConfig:
    return checker.SuiteConfig(
        max_states=args.max_states,
        atom_budget=3,
        sample_seed=args.seed,
        frame_filter=frame_filter,
    )


def _cmd_correspond(args) -> int:
    report = checker.correspondence_suite(_suite_config(args), args.threads)
    _emit_report(report, args.json)
    return 0 if report.passed else 1


def _cmd_distribution(args) -> int:
    report = checker.distribution_suite(_suite_config(args), args.threads)
    _emit_report(report, args.json)
    return 0 if report.passed else 1


def _cmd_paradox(args) -> int:
    cfg = _suite_config(args, frame_filter=args.filter)
    witness, report = checker.paradox_search(cfg, args.threads)
    if args.json:
        _emit_report(report, True)
    else:
        if witness is None:
            print("NotFound (search exhausted)")
        else:
            model, state = witness
            print(f"witness frame: {json.dumps(baoframe.frame_to_json(model.frame))}")
            print(f"valuation: {json.dumps(baoframe.valuation_to_json(model.valuation))}")
            print(f"state: {state}")
            for entry in report.entries:
                if entry.name == "paradox-witness" and entry.witness:
                    for name, value in entry.witness["formulas"].items():
                        print(f"  {name}: {'true' if value else 'false'}")
        _emit_report(report, False)
    if not report.passed:
        return 1
    return 0 if witness is not None else 1


def _cmd_translation_report(args) -> int:
    report = checker.translation_report(_suite_config(args, "b+q"))
    _emit_report(report, args.json, show_info=True)
    return 0 if report.passed else 1


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmodal",
        description="Lattice logic, its modal companion, and the embedding"
                    " between them, checked over finite structures.")
    subs = parser.add_subparsers(dest="command", required=True)

    def new(name, func, help_text):
        sub = subs.add_parser(name, help=help_text)
        sub.set_defaults(func=func)
        sub.add_argument("--json", action="store_true",
                         help="emit JSON lines instead of text")
        return sub

    sub = new("translate", _cmd_translate,
              "translate a lattice formula into the modal language")
    _add_formula_args(sub)
    sub.add_argument("--diamond", action="store_true",
                     help="render negation as <>! instead of ![]")

    sub = new("expand", _cmd_expand, "expand derived connectives")
    _add_formula_args(sub)

    sub = new("check-oml", _cmd_check_oml, "check the lattice laws of a file")
    sub.add_argument("--file", required=True)

    sub = new("gen-oml", _cmd_gen_oml,
              "generate a fixture lattice (boolean:k or mo:k)")
    sub.add_argument("spec")
    sub.add_argument("--out", default=None, help="write to a file")

    sub = new("check-frame", _cmd_check_frame, "query frame properties")
    sub.add_argument("--file", required=True)
    sub.add_argument("--props", default="symmetry,seriality,q-fol",
                     help=f"comma list from: {', '.join(_FRAME_PROPS)}")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for the sampled fact2 check")

    sub = new("eval", _cmd_eval, "evaluate a formula in a model")
    _add_formula_args(sub)
    sub.add_argument("--logic", choices=("ql", "bq"), required=True)
    sub.add_argument("--lattice", default=None)
    sub.add_argument("--frame", default=None)
    sub.add_argument("--valuation", default=None)
    sub.add_argument("--state", type=int, default=None)

    sub = new("valid", _cmd_valid, "check validity in a lattice or frame")
    _add_formula_args(sub)
    sub.add_argument("--logic", choices=("ql", "bq"), required=True)
    sub.add_argument("--lattice", default=None)
    sub.add_argument("--frame", default=None)

    sub = new("embed", _cmd_embed, "certify an embedding file")
    sub.add_argument("--file", required=True)

    sub = new("embed-search", _cmd_embed_search,
              "search for an embedding into one frame or over all frames")
    sub.add_argument("--lattice", default=None)
    sub.add_argument("--gen", default=None,
                     help="fixture lattice instead of --lattice (boolean:k, mo:k)")
    sub.add_argument("--frame", default=None)
    sub.add_argument("--max-states", type=int, default=4)
    sub.add_argument("--all-frames", action="store_true",
                     help="drop the restriction to the B+Q frame class")
    sub.add_argument("--prune-degrees", action="store_true",
                     help="heuristic: skip repeated degree profiles")

    sub = new("closure", _cmd_closure,
              "close seed sets under intersection and sim, then check laws")
    sub.add_argument("--frame", required=True)
    sub.add_argument("--seeds", required=True,
                     help='JSON list of state lists, e.g. "[[0,2],[1]]"')

    for name, func, help_text, default_n in [
        ("correspond", _cmd_correspond,
         "axiom validity against frame conditions", 3),
        ("distribution", _cmd_distribution,
         "box distribution over conjunction and disjunction", 3),
        ("paradox", _cmd_paradox,
         "search for the distribution failure witness", 5),
    ]:
        sub = new(name, func, help_text)
        sub.add_argument("--max-states", type=int, default=default_n)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--threads", type=int, default=1)
        if name == "paradox":
            sub.add_argument("--filter", choices=("b+q", "none", "serial"),
                             default="b+q")

    sub = new("translation-report", _cmd_translation_report,
              "lattice vs frame validity of the translated axiom schemes")
    sub.add_argument("--max-states", type=int, default=3)
    sub.add_argument("--seed", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except formula.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

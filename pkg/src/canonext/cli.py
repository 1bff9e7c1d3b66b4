"""Command-line driver.  Exit status: 0 pass, 1 property violation,
2 usage or input error."""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import acceptance, corpus, io
from .canonical import (
    NonOperatorSymbol, canonical_extension, check_canonicity, closed_elements,
    verify_density_compactness,
)
from .completions import check_cocompletion_axioms, filter_completion, ideal_completion
from .dot import emit_dot
from .lattice import (
    FiniteLattice, OrderedAlgebra, TermSyntaxError, describe_operator_violation,
    distributivity_witness, lattice_law_violation, operator_violation, parse_inequation,
)
from .order import DEFAULT_MAX_SIZE, OrderError, Poset, SizeLimitError
from .presentations import (
    Presentation, all_c_ideals, c_ideal_closure, free_carrier, free_dcpo,
    universal_property_oracle,
)
from .report import Report


class UsageError(Exception):
    pass


def _load(spec: str | None):
    """``--in`` names a file, or failing that a shipped corpus entry."""
    if not spec:
        raise UsageError("--in is required")
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        if spec.lower() in corpus.entry_names():
            return corpus.load_entry(spec)
        raise UsageError(f"no such file or corpus entry: {spec}") from None
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return io.parse(text)


def _expect(obj, kinds, what: str):
    if not isinstance(obj, kinds):
        raise UsageError(f"{what} needs {' or '.join(k.__name__ for k in kinds)} input, "
                         f"got {type(obj).__name__}")
    return obj


def _lattice_of(obj) -> FiniteLattice:
    if isinstance(obj, OrderedAlgebra) and isinstance(obj.carrier, FiniteLattice):
        return obj.carrier
    return _expect(obj, (FiniteLattice,), "this command")


def _elements(P, labels: str) -> int:
    mask = 0
    for s in filter(None, (x.strip() for x in labels.split(","))):
        try:
            mask |= 1 << P.index(s)
        except (KeyError, ValueError):
            raise UsageError(f"unknown element {s!r}") from None
    return mask


def _set(P, mask: int) -> list[str]:
    return [P.labels[i] for i in range(P.n) if mask >> i & 1]


# -- commands ---------------------------------------------------------------

def cmd_check(args) -> tuple[Report, list[str]]:
    obj = _load(args.input)
    rep = Report("check")
    lines = []
    if isinstance(obj, FiniteLattice):
        rep.record("lattice laws", lattice_law_violation(obj) is None, lattice_law_violation(obj))
        w = distributivity_witness(obj)
        rep.info["distributive"] = w is None
        lines.append(f"lattice with {obj.n} elements, "
                     + ("distributive" if w is None else f"not distributive, witness {_labels(obj, w)}"))
    elif isinstance(obj, OrderedAlgebra):
        A = obj.carrier
        ops = {}
        for name, t in sorted(obj.ops.items()):
            w = operator_violation([A] * t.ndim, A, t) if t.ndim else None
            ops[name] = ("operator" if w is None else "not an operator, "
                         + describe_operator_violation([A] * t.ndim, A, t, w))
            lines.append(f"{name}/{t.ndim}: {ops[name]}")
        rep.info["operations"] = ops
        rep.record("tables monotone", True)
    elif isinstance(obj, Presentation):
        rep.record("well-formed", True)
        lines.append(f"{obj.kind} presentation on {obj.base.n} elements, {len(obj.covers)} covers")
        lines.extend(corpus.covers_as_text(obj))
    elif isinstance(obj, Poset):
        lines.append(f"poset with {obj.n} elements")
        rep.record("well-formed", True)
    elif isinstance(obj, dict):
        lines.append(f"corpus with {len(obj)} entries: {', '.join(obj)}")
        rep.record("well-formed", True)
    else:
        lines.append(f"inequation {io.inequation_text(obj)} in {obj.nvars} variables")
        rep.record("well-formed", True)
    return rep, lines


def _labels(L, idx) -> tuple:
    return tuple(L.labels[i] for i in idx)


def cmd_complete(args):
    A = _lattice_of(_load(args.input))
    lines = []
    if args.ideals:
        ic = ideal_completion(A, max_size=args.max_size)
        rep = Report("ideal completion")
        rep.record("embed is an order-embedding", ic.embed.is_order_embedding())
        C = ic.carrier
    else:
        fc = filter_completion(A, max_size=args.max_size)
        rep = check_cocompletion_axioms(A, fc.carrier, fc.embed.image)
        C = fc.carrier
    rep.info["elements"] = list(C.labels)
    lines.append(f"{C.n} elements: {', '.join(C.labels)}")
    for k, ok in rep.checks.items():
        lines.append(f"  {k}: {'ok' if ok else 'FAILED ' + repr(rep.witnesses.get(k))}")
    return rep, lines


def cmd_present(args):
    pres = _expect(_load(args.input), (Presentation,), "present")
    P = pres.base
    rep = Report(f"present {args.action}")
    lines = []
    if args.action == "close":
        X = _elements(P, args.set or "")
        C = c_ideal_closure(pres, X)
        rep.info["closure"] = _set(P, C)
        lines.append("{" + ", ".join(_set(P, C)) + "}")
    elif args.action == "enumerate":
        fam = all_c_ideals(pres, max_size=args.max_size)
        rep.info["c_ideals"] = [_set(P, m) for m in fam.members]
        lines.append(f"{len(fam)} C-ideals")
        lines.extend("  {" + ", ".join(_set(P, m)) + "}" for m in fam.members)
    elif args.action == "free":
        fam = free_dcpo(pres) if pres.kind == "dcpo" else free_carrier(pres)
        rep.info["carrier"] = [_set(P, m) for m in fam.members]
        lines.append(f"free {pres.kind} on {len(fam)} elements")
        for x in range(P.n):
            lines.append(f"  ⟨{P.labels[x]}⟩ = {{{', '.join(_set(P, fam.members[fam.eta[x]]))}}}")
    else:
        if not args.target:
            raise UsageError("verify-universal needs --target")
        D = _lattice_of(_load(args.target))
        rep = universal_property_oracle(pres, D)
        lines.append(f"{rep.info['cover_preserving']} cover-preserving maps of "
                     f"{rep.info['maps']} monotone, {rep.info['unique']} with a unique extension")
    return rep, lines


def cmd_canon(args):
    obj = _load(args.input)
    lines = []
    if args.action == "check-eq":
        alg = _expect(obj, (OrderedAlgebra,), "canon check-eq")
        if not args.ineq:
            raise UsageError("check-eq needs --ineq")
        ineq = parse_inequation(args.ineq, alg.signature)
        rep = check_canonicity(alg, ineq)
        lines.append(rep.info["status"])
        return rep, lines
    A = _lattice_of(obj)
    ce = canonical_extension(A, max_size=args.max_size, check=False)
    if args.action == "ext":
        rep = ce.lemmas
        rep.info["elements"] = list(ce.carrier.labels)
        rep.info["e"] = {A.labels[a]: ce.carrier.labels[ce.e(a)] for a in range(A.n)}
        lines.append(f"A^σ has {ce.carrier.n} elements ({len(ce.all_ideals)} C_A-ideals in all)")
        for a in range(A.n):
            lines.append(f"  e({A.labels[a]}) = {ce.carrier.labels[ce.e(a)]}")
        lines.append("e is an isomorphism" if ce.e.is_isomorphism() else "e is not onto")
    else:
        rep = verify_density_compactness(A, ce.carrier, ce.e.image)
        for k, ok in ce.lemmas.checks.items():
            rep.record(k, ok, ce.lemmas.witnesses.get(k))
        rep.info["closed elements"] = len(closed_elements(ce))
        for k, ok in rep.checks.items():
            lines.append(f"{k}: {'ok' if ok else 'FAILED ' + repr(rep.witnesses.get(k))}")
    return rep, lines


def cmd_corpus(args):
    only = {int(k) for k in args.only.split(",")} if args.only else None
    rep = Report("corpus run")
    lines = []
    details = {}
    for k, r in acceptance.run_all(args.seed, only):
        lines.append(acceptance.summary_line(k, r))
        rep.record(f"criterion {k}", r.passed, r.failures())
        details[str(k)] = r.to_dict()
    rep.info["criteria"] = details
    return rep, lines


def cmd_emit(args):
    obj = _load(args.input)
    if isinstance(obj, OrderedAlgebra):
        obj = obj.carrier
    elif isinstance(obj, Presentation):
        obj = obj.base
    if not hasattr(obj, "poset") and not isinstance(obj, Poset):
        raise UsageError("emit dot needs a poset-like input")
    name = args.name or (args.input.rsplit("/", 1)[-1].removesuffix(".json"))
    text = emit_dot(obj, name)
    rep = Report("emit dot")
    rep.info["dot"] = text
    return rep, [text.rstrip("\n")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", help="input document or corpus entry name")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    ap = argparse.ArgumentParser(prog="canonext", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="validate a structure")
    p = sub.add_parser("complete", parents=[common], help="filter or ideal completion")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--filters", action="store_true", default=True)
    g.add_argument("--ideals", action="store_true")
    p = sub.add_parser("present", parents=[common], help="C-ideals of a presentation")
    p.add_argument("action", choices=["close", "enumerate", "free", "verify-universal"])
    p.add_argument("--set", help="comma-separated elements for close")
    p.add_argument("--target", help="target lattice for verify-universal")
    p = sub.add_parser("canon", parents=[common], help="canonical extension")
    p.add_argument("action", choices=["ext", "verify", "check-eq"])
    p.add_argument("--ineq", help="inequation such as \"(leq x (join x y))\"")
    p = sub.add_parser("corpus", parents=[common], help="acceptance criteria")
    p.add_argument("action", choices=["run"])
    p.add_argument("--only", help="comma-separated criterion numbers")
    p = sub.add_parser("emit", parents=[common], help="Hasse diagram output")
    p.add_argument("action", choices=["dot"])
    p.add_argument("--name", help="graph name")
    return ap


COMMANDS = {"check": cmd_check, "complete": cmd_complete, "present": cmd_present,
            "canon": cmd_canon, "corpus": cmd_corpus, "emit": cmd_emit}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    t0 = time.perf_counter()
    try:
        rep, lines = COMMANDS[args.command](args)
    except (UsageError, io.DocumentError, TermSyntaxError, SizeLimitError,
            NonOperatorSymbol, OrderError) as exc:
        print(f"canonext: error: {exc}", file=sys.stderr)
        return 2
    rep.info.setdefault("seconds", round(time.perf_counter() - t0, 3))
    if args.json:
        out = json.dumps(rep.to_dict(), indent=2, ensure_ascii=False)
    else:
        out = "\n".join(lines)
        if not rep.passed and args.command != "corpus":
            out += "\nFAILED: " + "; ".join(f"{k}: {rep.witnesses.get(k)!r}" for k in rep.failures())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())

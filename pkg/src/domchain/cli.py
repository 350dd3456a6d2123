"""domchain command line.

Exit codes: 0 ok, 2 usage or infeasible input, 3 timeout or partial result,
4 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import certificates as cert
from . import constructions as con
from . import generators as gen
from .errors import DomchainError
from .graphcore import is_dominating, to_mask
from .numtheory import max_noncoprime_run
from .solvers import (
    ALL_PARAMETERS,
    CHAIN,
    ChainReport,
    Parameter,
    classify_xn,
    solve,
)

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT, EXIT_FAILED = 0, 2, 3, 4
CSV_COLUMNS = ("graph", "param", "value", "status", "elapsed_ms", "witness")


@dataclass
class RunConfig:
    command: str
    graph_spec: str = ""
    params: list = field(default_factory=list)
    budget_ms: int = 60000
    threads: int = 1
    size_cap: int = gen.DEFAULT_SIZE_CAP
    output: str = "text"

    def __post_init__(self):
        if self.budget_ms < 1:
            raise ValueError("budget_ms must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.output not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output!r}")

    @property
    def budget(self) -> float:
        return self.budget_ms / 1000


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _params(text: str) -> list:
    if text == "all":
        return list(ALL_PARAMETERS)
    if text == "chain":
        return list(CHAIN)
    try:
        return [Parameter.parse(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _intlist(text: str) -> list:
    try:
        return [int(t) for t in text.replace("x", ",").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-ms", type=_positive, default=60000)
    p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--size-cap", type=_positive, default=gen.DEFAULT_SIZE_CAP)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="domchain", description="Domination-chain parameters of unitary Cayley graphs and products.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="solve parameters of one graph")
    p.add_argument("--graph", "--spec", dest="graph", required=True)
    p.add_argument("--p", type=_params, default=list(ALL_PARAMETERS), help="comma list, 'chain' or 'all'")
    _common(p)

    p = sub.add_parser("jacobsthal", help="Jacobsthal function with a witness run")
    p.add_argument("n", type=_positive, nargs="+")
    _common(p)

    p = sub.add_parser("family", help="the dominating-cycle family instance for prime q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--primes", type=_intlist)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--exact-g", action="store_true", help="also compute g(n) exactly")
    p.add_argument("--out", help="write the certificate here as well")
    _common(p)

    p = sub.add_parser("verify", help="check a closed form or bound on concrete instances")
    p.add_argument("theorem", choices=("gamma4", "ir-upper", "closed-forms", "chain", "dom-code", "indep-product", "consecutive"))
    p.add_argument("--n", type=_intlist)
    p.add_argument("--graph", "--spec", dest="graph")
    p.add_argument("--t", type=int)
    _common(p)

    p = sub.add_parser("xn", help="M_{t,j} / M_{c,j} membership of small n")
    p.add_argument("n", type=_positive, nargs="+")
    _common(p)

    p = sub.add_parser("recheck", help="re-validate a JSON certificate without the solvers")
    p.add_argument("path")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    return ap


# -- rendering -------------------------------------------------------------------


def _render_chain(graph: str, rep: ChainReport, fmt: str, violations) -> str:
    if fmt == "json":
        return cert.dumps(cert.chain_certificate(graph, rep, violations))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p, r in rep.results.items():
            wit = " ".join(map(str, r.witness)) if r.witness else ""
            w.writerow([graph, p.value, "" if r.value is None else r.value, r.status, round(r.elapsed * 1000), wit])
        return buf.getvalue()
    lines = [f"graph {graph}"]
    for p, r in rep.results.items():
        if r.status == "computed":
            val = str(r.value)
        elif r.status == "timeout":
            val = f"in [{r.lower}, {r.upper}]"
        else:
            val = r.status
        lines.append(f"  {p.value:8s} {val:>10s}  ({r.elapsed * 1000:.0f} ms)  {r.note}".rstrip())
    for v in violations:
        lines.append(f"  VIOLATION {v}")
    return "\n".join(lines) + "\n"


def _emit(doc: dict, fmt: str, text: str) -> None:
    sys.stdout.write(cert.dumps(doc) if fmt == "json" else text)


# -- commands --------------------------------------------------------------------


def cmd_params(args) -> int:
    cfg = RunConfig("params", args.graph, args.p, args.budget_ms, args.threads, args.size_cap, args.format)
    G = gen.parse_graph_spec(cfg.graph_spec, size_cap=cfg.size_cap)
    rep = ChainReport(cfg.graph_spec)
    alpha_w = None
    for p in sorted(cfg.params, key=list(Parameter).index):
        hint = alpha_w if p in (Parameter.GAMMA_UPPER, Parameter.IR_UPPER) else None
        r = solve(G, p, budget=cfg.budget, alpha_hint=hint)
        if p is Parameter.ALPHA and r.status == "computed":
            alpha_w = r.witness
        rep.results[p] = r
    violations = rep.violations(G)
    sys.stdout.write(_render_chain(cfg.graph_spec, rep, cfg.output, violations))
    if violations:
        return EXIT_FAILED
    return EXIT_TIMEOUT if rep.any_timeout() else EXIT_OK


def cmd_jacobsthal(args) -> int:
    rows = []
    for n in args.n:
        run = max_noncoprime_run(n)
        rows.append({"n": str(n), "g": run.length + 1, "run_start": str(run.start), "run_length": run.length})
    if args.format == "json":
        sys.stdout.write(cert.dumps({"jacobsthal": rows}))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        for r in rows:
            span = f"[{r['run_start']}, +{r['run_length']})" if r["run_length"] else "-"
            print(f"g({r['n']}) = {r['g']}  run {span}")
    return EXIT_OK


def cmd_family(args) -> int:
    inst = con.mc2_family(args.q, args.primes)
    if not args.verify:
        doc = cert.family_instance_doc(inst)
        text = (
            f"q={inst.q} k={inst.k} primes={list(inst.primes)}\n"
            f"n = {inst.n}\n|D| = {len(inst.D)}, run length {inst.run_witness.length} (unverified)\n"
        )
        _emit(doc, args.format, text)
        code = EXIT_OK
    else:
        report = con.verify_family(inst, threads=args.threads, exact_g=args.exact_g)
        doc = cert.family_certificate(report)
        lines = [f"n = {inst.n}  (q={inst.q}, primes={list(inst.primes)})"]
        for c in report.checks:
            extra = f"  counterexample {c.counterexample}" if c.counterexample is not None else ""
            lines.append(f"  {c.name:18s} {'pass' if c.passed else 'FAIL'}{extra}  {c.detail}".rstrip())
        lines.append(report.conclusion)
        _emit(doc, args.format, "\n".join(lines) + "\n")
        code = EXIT_OK if report.all_passed else EXIT_FAILED
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.dumps(doc))
    return code


def _verify_gamma4(args) -> tuple[list, int]:
    ns = tuple(sorted(args.n))
    if len(ns) != 4:
        raise DomchainError("gamma4 needs exactly four factor sizes")
    table = con.gamma4_closed_form(*ns)
    G = gen.product(gen.ProductSpec.complete(ns), size_cap=args.size_cap)
    r = solve(G, Parameter.GAMMA, budget=args.budget_ms / 1000)
    if r.status == "timeout":
        return [("gamma solver", None, f"timeout, gamma in [{r.lower}, {r.upper}] vs table {table}")], EXIT_TIMEOUT
    rows = [("closed form == solver", r.value == table, f"table {table}, solver {r.value}")]
    w = con.gamma4_witness(*ns, budget=args.budget_ms / 1000, raise_on_fail=False)
    rows.append(("table-size witness", w.verified, f"{w.source}; " + "; ".join(w.notes)))
    return rows, EXIT_OK


def _judge_rows(reports) -> list:
    rows = []
    for b in reports:
        if b.verdict == "not_applicable":
            continue
        ok = {"satisfied": True, "violated": False}.get(b.verdict)
        rows.append((b.name, ok, f"{b.parameter.value} = {b.compared_value} vs {b.bound_value} ({b.kind})"))
    return rows


def cmd_verify(args) -> int:
    budget = args.budget_ms / 1000
    code = EXIT_OK
    if args.theorem == "gamma4":
        rows, code = _verify_gamma4(args)
    elif args.theorem in ("ir-upper", "closed-forms"):
        spec = gen.parse_product_spec(args.graph).canonical()
        reports, _ = con.evaluate_bounds(spec, budget=budget)
        if args.theorem == "ir-upper":
            reports = [b for b in reports if b.parameter in (Parameter.IR_UPPER, Parameter.ALPHA, Parameter.GAMMA_UPPER)]
        rows = _judge_rows(reports)
    elif args.theorem == "chain":
        G = gen.parse_graph_spec(args.graph, size_cap=args.size_cap)
        rep = ChainReport(args.graph)
        alpha_w = None
        for p in CHAIN:
            r = solve(G, p, budget=budget, alpha_hint=alpha_w if p.maximizes else None)
            if p is Parameter.ALPHA and r.status == "computed":
                alpha_w = r.witness
            rep.results[p] = r
        bad = rep.violations(G)
        vals = ", ".join(f"{p.value}={rep.results[p].value if rep.results[p].status == 'computed' else rep.results[p].status}" for p in CHAIN)
        rows = [("chain order ir <= gamma <= i <= alpha <= Gamma <= IR", not bad, vals + ("; " + "; ".join(bad) if bad else ""))]
        if rep.any_timeout():
            code = EXIT_TIMEOUT
    elif args.theorem == "dom-code":
        t = args.t or len(args.n)
        _, D = con.dom_code(t)
        ns = args.n or [2] * t
        spec = gen.ProductSpec.complete(ns)
        G = gen.product(spec, size_cap=args.size_cap)
        ok = is_dominating(G, to_mask(spec.index(w) for w in D))
        rows = [("D dominates", ok, f"|D| = {len(D)} on {spec}"), ("|D| <= 3*2^(t-2)", 4 * len(D) <= 3 * 2**t, "")]
    elif args.theorem == "indep-product":
        c = con.verify_independent_dominating(args.n, size_cap=args.size_cap)
        rows = [("maximal independent", c.maximal_independent, f"X_{c.n}, |D| = {c.size}, route {c.route}")]
    else:
        rows = []
        for n in args.n:
            s = con.consecutive_dominating_set(n)
            G = gen.unitary_cayley(n, size_cap=args.size_cap)
            rows.append((f"{{0..g-1}} dominates X_{n}", is_dominating(G, to_mask(s.members)), f"g = {s.g}"))
    if args.format == "json":
        sys.stdout.write(cert.dumps({"theorem": args.theorem, "checks": [{"name": a, "pass": b, "detail": c} for a, b, c in rows]}))
    else:
        for name, ok, detail in rows:
            tag = {True: "pass", False: "FAIL", None: "----"}[ok]
            print(f"{tag}  {name}: {detail}")
    if any(ok is False for _, ok, _ in rows):
        return EXIT_FAILED
    return code


def cmd_xn(args) -> int:
    out = []
    for n in args.n:
        c = classify_xn(n, budget=args.budget_ms / 1000)
        out.append(c)
    if args.format == "json":
        rows = [
            {"n": c.n, "g": c.g, "gamma_t": c.gamma_t, "gamma_c": c.gamma_c,
             "in_Mt": {str(j): v for j, v in c.in_Mt.items()}, "in_Mc": {str(j): v for j, v in c.in_Mc.items()}}
            for c in out
        ]
        sys.stdout.write(cert.dumps({"xn": rows}))
    else:
        for c in out:
            mt = "".join("1" if c.in_Mt[j] else "0" for j in (1, 2, 3))
            mc = "".join("1" if c.in_Mc[j] else "0" for j in (1, 2, 3))
            print(f"n={c.n:4d} g={c.g:3d} gamma_t={c.gamma_t} gamma_c={c.gamma_c} Mt[1..3]={mt} Mc[1..3]={mc}")
    return EXIT_OK


def cmd_recheck(args) -> int:
    with open(args.path) as fh:
        doc = json.load(fh)
    results = cert.recheck(doc)
    if args.format == "json":
        sys.stdout.write(cert.dumps({"recheck": [{"name": n, "pass": ok} for n, ok in results]}))
    else:
        for name, ok in results:
            print(f"{'pass' if ok else 'FAIL'}  {name}")
    return EXIT_OK if results and all(ok for _, ok in results) else EXIT_FAILED


COMMANDS = {
    "params": cmd_params,
    "jacobsthal": cmd_jacobsthal,
    "family": cmd_family,
    "verify": cmd_verify,
    "xn": cmd_xn,
    "recheck": cmd_recheck,
}


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DomchainError, ValueError, OSError) as e:
        print(f"domchain: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

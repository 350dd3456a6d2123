"""JSON certificates and their solver-free recheck.

Large integers are written as decimal strings. Fields listed in VOLATILE are
dropped before byte comparison, so identical runs compare equal.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import generators as gen
from .constructions import FamilyInstance, FamilyReport, undominated_residues
from .graphcore import (
    classify_set,
    is_dominating,
    is_dominating_cycle,
    is_independent,
    is_irredundant,
    is_maximal_irredundant,
    is_total_dominating,
    to_mask,
)
from .numtheory import CoprimeRun, factorize
from .solvers import ChainReport

VOLATILE = ("generated_at", "elapsed_ms")


def _s(x: int) -> str:
    return str(int(x))


def _stamp(doc: dict) -> dict:
    doc["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: strip_volatile(v) for k, v in obj.items() if k not in VOLATILE}
    if isinstance(obj, list):
        return [strip_volatile(v) for v in obj]
    return obj


def canonical_bytes(doc: dict) -> bytes:
    return dumps(strip_volatile(doc)).encode()


def family_certificate(report: FamilyReport) -> dict:
    inst = report.instance
    checks = []
    for c in report.checks:
        entry = {"name": c.name, "pass": c.passed}
        if c.counterexample is not None:
            ce = c.counterexample
            entry["counterexample"] = [_s(x) for x in ce] if isinstance(ce, tuple) else _s(ce)
        if c.detail:
            entry["detail"] = c.detail
        checks.append(entry)
    return _stamp(
        {
            "construction": "mc2_family",
            "parameters": {"q": inst.q, "k": inst.k, "primes": list(inst.primes)},
            "n": _s(inst.n),
            "set": [_s(d) for d in inst.D],
            "cycle": [_s(d) for d in inst.cycle_order],
            "y": _s(inst.y),
            "z": _s(inst.z),
            "run": {"start": _s(inst.run_witness.start), "length": inst.run_witness.length},
            "checks": checks,
            "cycle_ok": report.cycle_ok,
            "dominating_ok": report.dominating_ok,
            "run_ok": report.run_ok,
            "conclusion": report.conclusion,
        }
    )


def family_instance_doc(inst: FamilyInstance) -> dict:
    """Instance arithmetic only (no verification ran)."""
    return _stamp(
        {
            "construction": "mc2_family",
            "parameters": {"q": inst.q, "k": inst.k, "primes": list(inst.primes)},
            "n": _s(inst.n),
            "set": [_s(d) for d in inst.D],
            "cycle": [_s(d) for d in inst.cycle_order],
            "y": _s(inst.y),
            "z": _s(inst.z),
            "run": {"start": _s(inst.run_witness.start), "length": inst.run_witness.length},
            "checks": [],
            "verified": False,
        }
    )


def chain_certificate(graph_spec: str, report: ChainReport, violations: Sequence[str] = ()) -> dict:
    results = []
    for p, r in report.results.items():
        results.append(
            {
                "param": p.value,
                "status": r.status,
                "value": r.value,
                "lower": r.lower,
                "upper": r.upper,
                "witness": list(r.witness) if r.witness is not None else None,
                "elapsed_ms": round(r.elapsed * 1000),
                "note": r.note or None,
            }
        )
    checks = [{"name": "chain_invariants", "pass": not violations}]
    if violations:
        checks[0]["counterexample"] = list(violations)
    return _stamp({"construction": "parameters", "graph": graph_spec, "results": results, "checks": checks})


def set_certificate(construction: str, graph_spec: str, members: Sequence[int], claims: Sequence[str], parameters: Optional[dict] = None) -> dict:
    """A vertex set in a materializable graph plus the properties claimed for it."""
    G = gen.parse_graph_spec(graph_spec)
    S = to_mask(members)
    checks = [{"name": c, "pass": _PREDICATES[c](G, S)} for c in claims]
    return _stamp(
        {
            "construction": construction,
            "parameters": parameters or {},
            "graph": graph_spec,
            "set": [int(v) for v in members],
            "checks": checks,
        }
    )


_PREDICATES = {
    "dominating": is_dominating,
    "total_dominating": is_total_dominating,
    "independent": is_independent,
    "irredundant": is_irredundant,
    "maximal_irredundant": is_maximal_irredundant,
    "maximal_independent": lambda G, S: classify_set(G, S).maximal_independent,
    "minimal_dominating": lambda G, S: classify_set(G, S).minimal_dominating,
}

_WITNESS_CLAIM = {
    "ir": "maximal_irredundant",
    "gamma": "dominating",
    "gamma_t": "total_dominating",
    "i": "maximal_independent",
    "alpha": "independent",
    "Gamma": "minimal_dominating",
    "IR": "irredundant",
}


# -- recheck ----------------------------------------------------------------


def recheck(doc: dict) -> list[tuple[str, bool]]:
    """Re-validate a certificate with graphcore predicates (and the residue sieve for families)."""
    kind = doc.get("construction")
    if kind == "mc2_family":
        return _recheck_family(doc)
    G = gen.parse_graph_spec(doc["graph"])
    out = []
    if kind == "parameters":
        for r in doc["results"]:
            w = r.get("witness")
            if r["status"] != "computed" or w is None:
                continue
            name = r["param"]
            if name == "gamma_c":
                ok = len(w) >= 3 and is_dominating_cycle(G, w)
            else:
                ok = _PREDICATES[_WITNESS_CLAIM[name]](G, to_mask(w)) and len(w) == r["value"]
            out.append((f"{name}_witness", ok))
        return out
    S = to_mask(doc["set"])
    for c in doc["checks"]:
        ok = _PREDICATES[c["name"]](G, S)
        out.append((c["name"], ok == c["pass"]))
    return out


def _recheck_family(doc: dict) -> list[tuple[str, bool]]:
    n = int(doc["n"])
    D = [int(x) for x in doc["set"]]
    cycle = [int(x) for x in doc["cycle"]]
    primes = factorize(n).primes
    out = [
        ("radical", math.prod(primes) == n),
        ("cycle_covers_set", sorted(cycle) == sorted(D) and len(set(cycle)) == len(cycle)),
        ("cycle", all(math.gcd(a - b, n) == 1 for a, b in zip(cycle, cycle[1:] + cycle[:1]))),
    ]
    if doc.get("verified", True):
        out.append(("dominating", not undominated_residues(primes, D)))
        run = CoprimeRun(int(doc["run"]["start"]), int(doc["run"]["length"]))
        out.append(("run", run.verify(n) is None))
    return out

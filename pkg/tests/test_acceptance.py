"""Acceptance criteria, one test each. A PASS/FAIL line per criterion is printed
in the terminal summary (see conftest.py)."""

import json
import math
import random
import time

from domchain import certificates as cert
from domchain import constructions as con
from domchain import generators as gen
from domchain.cli import main
from domchain.graphcore import is_dominating, to_mask
from domchain.numtheory import jacobsthal
from domchain.oracle import oracle_all
from domchain.solvers import ALL_PARAMETERS, Parameter as P, classify_xn, solve

from conftest import random_graph

RESULTS: dict = {}


def record(num, title, ok, detail=""):
    RESULTS[num] = (title, ok, detail)
    assert ok, f"criterion {num} ({title}): {detail}"


def test_c1_family_certificate(capsys, tmp_path):
    t0 = time.monotonic()
    out = tmp_path / "family7.json"
    code = main(["family", "--q", "7", "--verify", "--format", "json", "--out", str(out)])
    capsys.readouterr()
    doc = json.loads(out.read_text())
    elapsed = time.monotonic() - t0
    inst = con.mc2_family(7)
    checks = {c["name"]: c["pass"] for c in doc["checks"]}
    ok = (
        code == 0
        and doc["n"] == "57278886"
        and doc["cycle"] == [str(x) for x in (0, 1, inst.y, inst.z) + tuple(range(2, 18))]
        and doc["run"]["length"] == 21
        and all(checks[k] for k in ("cycle", "dominating", "total_dominating", "run", "size"))
        and doc["cycle_ok"] and doc["dominating_ok"] and doc["run_ok"]
        and all(ok for _, ok in cert.recheck(doc))
        and elapsed <= 300
    )
    record(1, "family q=7 certified (cycle, domination mod 57278886, 21-run)", ok, f"{elapsed:.0f}s, checks {checks}")


def test_c2_closed_form_equalities():
    t0 = time.monotonic()
    K = lambda *ns: gen.product(gen.ProductSpec.complete(ns))
    cases = [
        ("ir(K2xK3)", solve(K(2, 3), P.IR_LOWER).value, 2),
        ("ir(K3xK3)", solve(K(3, 3), P.IR_LOWER).value, 3),
        ("ir(K3xK3xK3)", solve(K(3, 3, 3), P.IR_LOWER).value, 4),
        ("i(K2xK3)", solve(K(2, 3), P.I_LOWER).value, 2),
        ("i(K3xK3)", solve(K(3, 3), P.I_LOWER).value, 3),
        ("i(K3xK5)", solve(K(3, 5), P.I_LOWER).value, 3),
        ("i(K3xK3xK3)", solve(K(3, 3, 3), P.I_LOWER).value, 4),
        ("gamma(X_105)", solve(gen.unitary_cayley(105), P.GAMMA).value, 4),
    ]
    elapsed = time.monotonic() - t0
    bad = [f"{n}={got} (want {want})" for n, got, want in cases if got != want]
    record(2, "closed-form equalities match solver", not bad and elapsed <= 120, f"{elapsed:.1f}s {bad or 'all 8 equal'}")


def test_c3_gamma4_table():
    G3333 = gen.product(gen.ProductSpec.complete((3, 3, 3, 3)))
    G2333 = gen.product(gen.ProductSpec.complete((2, 3, 3, 3)))
    r1 = solve(G3333, P.GAMMA, budget=900)
    r2 = solve(G2333, P.GAMMA, budget=900)
    parts = [f"gamma(3,3,3,3) = {r1.value} [{r1.status}, {r1.elapsed:.1f}s] vs 7",
             f"gamma(2,3,3,3) = {r2.value} [{r2.status}] vs 8"]
    tuples = [(a, b, c, d) for a in range(2, 7) for b in range(max(a, 3), 7) for c in range(b, 7) for d in range(c, 7)]
    off_table = []
    for ns in tuples:
        if math.prod(ns) <= 150:
            r = solve(gen.product(gen.ProductSpec.complete(ns)), P.GAMMA, budget=900)
            if r.value != con.gamma4_closed_form(*ns):
                off_table.append(f"{ns}: {r.value}")
    parts.append("exact gamma off the table (prod <= 150): " + (", ".join(off_table) or "none"))
    missing = []
    for ns in tuples:
        w = con.gamma4_witness(*ns, budget=150, raise_on_fail=False)
        if not (w.verified and len(w.points) == w.table_value):
            missing.append(f"{ns}: {w.notes[-1] if w.notes else 'no witness'}")
    parts.append(f"table-size witnesses {len(tuples) - len(missing)}/{len(tuples)}")
    if missing:
        parts.append("missing " + "; ".join(missing))
    ok = r1.value == 7 and r2.value == 8 and not missing and not off_table
    record(3, "4-fold gamma table (solver + witnesses for n4 <= 6)", ok, " | ".join(parts))


def test_c4_gamma_c_anomaly():
    c = classify_xn(6)
    record(4, "gamma_c(X_6) = 6 > g(6) = 4", c.gamma_c == 6 and c.g == 4 and not c.in_Mc[1], f"g={c.g}, gamma_c={c.gamma_c}")


def _mixed_graph(rng, i):
    kind = i % 3
    if kind == 0:
        return random_graph(rng.randint(6, 18), rng.uniform(0.1, 0.9), rng)
    if kind == 1:
        return gen.unitary_cayley(rng.randint(2, 18))
    while True:
        spec = gen.ProductSpec(tuple((rng.randint(1, 3), rng.randint(2, 5)) for _ in range(rng.randint(1, 3))))
        if spec.vertex_count <= 18:
            return gen.product(spec)


def test_c5_oracle_equivalence():
    rng = random.Random(5)
    t0 = time.monotonic()
    bad = []
    count = 300
    for i in range(count):
        G = _mixed_graph(rng, i)
        want = oracle_all(G)
        for p in ALL_PARAMETERS:
            got = solve(G, p).value
            if got != want[p]:
                bad.append((G.name, G.adj, p.value, got, want[p]))
    elapsed = time.monotonic() - t0
    record(5, f"solve == oracle on {count} graphs (<= 18 vertices, 8 parameters)", not bad and elapsed <= 600, f"{elapsed:.0f}s, {len(bad)} discrepancies {bad[:3]}")


def _spec_matrix(limit=30):
    factors = [(a, b) for b in range(2, limit + 1) for a in range(1, limit // b + 1)]
    out = []

    def grow(prefix, size):
        if prefix:
            out.append(gen.ProductSpec(tuple(prefix)))
        for f in factors:
            if prefix and f < prefix[-1]:
                continue
            if size * f[0] * f[1] <= limit:
                grow(prefix + [f], size * f[0] * f[1])

    grow([], 1)
    return out


def test_c6_bound_suite(tmp_path):
    violations, conjecture_fail = [], []
    specs = _spec_matrix(30)
    for spec in specs:
        reports, values = con.evaluate_bounds(spec, upper_cap=30)
        for r in reports:
            if r.verdict != "violated":
                continue
            if r.name.startswith("Gamma = alpha"):
                conjecture_fail.append(r.certificate)
            else:
                violations.append((r.name, r.certificate))
        must = [P.IR_LOWER, P.GAMMA, P.ALPHA, P.IR_UPPER]
        if any(values.get(p) is None for p in must):
            violations.append(("unsolved", str(spec)))
        elif (spec.t <= 3 or spec.canonical().b[0] == 2) and values[P.ALPHA] != values[P.IR_UPPER]:
            violations.append(("alpha = IR", str(spec)))
        elif 2 * values[P.IR_LOWER] < values[P.GAMMA] + 1:
            violations.append(("ir >= (gamma+1)/2", str(spec)))
    xn_bad = []
    for n in range(2, 201):
        r = solve(gen.unitary_cayley(n), P.GAMMA_T, budget=120)
        if r.status != "computed" or r.value > jacobsthal(n):
            xn_bad.append((n, r.status, r.value))
    if violations or conjecture_fail:
        (tmp_path / "violations.json").write_text(json.dumps({"bounds": violations, "conjecture": conjecture_fail}, indent=2))
    detail = f"{len(specs)} specs, {len(violations)} bound violations, gamma_t(X_n) > g(n): {xn_bad}; Gamma = alpha counterexamples: {len(conjecture_fail)}"
    record(6, "bound suite on products <= 30 vertices and gamma_t(X_n) <= g(n)", not violations and not xn_bad, detail)


def test_c7_isomorphism():
    t0 = time.monotonic()
    bad = []
    for n in range(2, 2001):
        H, bij = gen.unitary_cayley_as_product(n)
        if not gen.relabeled_equal(H, gen.unitary_cayley(n), bij):
            bad.append(n)
    elapsed = time.monotonic() - t0
    record(7, "X_n equals relabeled product for 2 <= n <= 2000", not bad and elapsed <= 60, f"{elapsed:.0f}s, mismatches {bad[:5]}")


def test_c8_dom_code():
    rng = random.Random(8)
    bad = []
    for t in range(2, 7):
        _, D = con.dom_code(t)
        if 4 * len(D) > 3 * 2**t:
            bad.append((t, "size", len(D)))
        for _ in range(20):
            ns = [rng.randint(2, 5) for _ in range(t)]
            spec = gen.ProductSpec.complete(ns)
            G = gen.product(spec)
            if not is_dominating(G, to_mask(spec.index(w) for w in D)):
                bad.append((t, tuple(ns)))
    record(8, "dom_code dominates 20 random tuples for t = 2..6", not bad, f"failures {bad}")

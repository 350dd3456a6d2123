import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from domchain import constructions as con
from domchain import generators as gen
from domchain.errors import BadPrimes, BadQ, HypothesisViolated
from domchain.errors import FeasibilityExceeded
from domchain.graphcore import classify_set, is_dominating, is_total_dominating, neighborhood, open_neighborhood, to_mask
from domchain.numtheory import CoprimeRun
from domchain.solvers import Parameter as P, solve


# -- residue sieve ------------------------------------------------------------


@given(st.lists(st.sampled_from([2, 3, 5, 7, 11]), min_size=1, max_size=4, unique=True), st.data())
@settings(max_examples=80, deadline=None)
def test_sieve_matches_graph(primes, data):
    n = math.prod(primes)
    D = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=6, unique=True))
    G = gen.unitary_cayley(n)
    closed = con.undominated_residues(primes, D, limit=n, chunk=64)
    opened = con.undominated_residues(primes, D, total=True, limit=n, chunk=64)
    S = to_mask(D)
    assert closed == [x for x in range(n) if not neighborhood(G, S) >> x & 1]
    assert opened == [x for x in range(n) if not open_neighborhood(G, S) >> x & 1]


def test_sieve_multiword_and_threads():
    primes = [2, 3, 5, 7, 11, 13]
    n = math.prod(primes)
    D = list(range(0, n, 397))[:70]  # more than 64 members
    want = con.undominated_residues(primes, D, limit=n)
    assert con.undominated_residues(primes, D, limit=n, chunk=1000, threads=3) == want


# -- the family ---------------------------------------------------------------


def test_family_q7_arithmetic():
    inst = con.mc2_family(7)
    assert inst.k == 4 and inst.primes == (29, 31, 37, 41)
    assert inst.n == 57278886 == 6 * 7 * 29 * 31 * 37 * 41
    assert len(inst.D) == 20 and len(set(inst.D)) == 20
    assert inst.run_witness.length == 21
    assert inst.run_witness.verify(inst.n) is None
    assert inst.cycle_order[:4] == (0, 1, inst.y, inst.z) and inst.cycle_order[4:] == tuple(range(2, 18))
    for m, r in [(2, 0), (3, 2), (7, 6)] + [(p, p - 1) for p in inst.primes]:
        assert inst.y % m == r
    for m, r in [(2, 1), (3, 0), (7, 5)] + [(p, p - 2) for p in inst.primes]:
        assert inst.z % m == r


def test_family_run_moduli():
    inst = con.mc2_family(7)
    a = inst.run_moduli
    assert all(a[i] == 2 for i in range(0, 21, 2))
    assert all(a[i] == 3 for i in range(1, 21, 6))
    assert a[3] == a[17] == 7
    assert sorted(x for x in a if x > 7) == [29, 31, 37, 41]


def test_family_q13_primes():
    inst = con.mc2_family(13)
    assert inst.k == 8 and inst.primes == (37, 41, 43, 47, 53, 59, 61, 67)
    assert inst.run_witness.verify(inst.n) is None


def test_family_rejects_bad_input():
    for q in (4, 5, 9):
        with pytest.raises(BadQ):
            con.mc2_family(q)
    with pytest.raises(BadPrimes):
        con.mc2_family(7, [29, 31, 37])
    with pytest.raises(BadPrimes):
        con.mc2_family(7, [23, 29, 31, 37])
    with pytest.raises(BadPrimes):
        con.mc2_family(7, [29, 31, 39, 41])
    inst = con.mc2_family(7, [31, 37, 41, 43])
    assert inst.n == 6 * 7 * 31 * 37 * 41 * 43


def test_family_mutations_fail():
    inst = con.mc2_family(7)
    y1 = replace(inst, y=inst.y + 1, D=inst.D[:-2] + (inst.y + 1, inst.z), cycle_order=(0, 1, inst.y + 1, inst.z) + inst.cycle_order[4:])
    rep = con.verify_family(y1)
    assert not (rep.cycle_ok and rep.dominating_ok)
    bad = next(c for c in rep.checks if not c.passed)
    assert bad.counterexample is not None

    shifted = replace(inst, run_witness=CoprimeRun(inst.run_witness.start + 1, 21))
    assert shifted.run_witness.verify(inst.n) is not None

    z1 = replace(inst, z=inst.z + 1, D=inst.D[:-1] + (inst.z + 1,), cycle_order=(0, 1, inst.y, inst.z + 1) + inst.cycle_order[4:])
    rep = con.verify_family(z1)
    assert not rep.all_passed


def test_family_sieve_cap():
    with pytest.raises(FeasibilityExceeded):
        con.verify_family(con.mc2_family(13))


# -- consecutive sets -----------------------------------------------------------


def test_consecutive_examples():
    s = con.consecutive_dominating_set(6)
    assert s.members == (0, 1, 2, 3)
    assert con.consecutive_dominating_set(5).members == (0, 1)
    assert con.consecutive_dominating_set(30).members == tuple(range(6))


def test_consecutive_sets_dominate():
    for n in range(2, 501):
        s = con.consecutive_dominating_set(n)
        G = gen.unitary_cayley(n)
        assert is_dominating(G, to_mask(s.members)), n
        if s.closes_as_cycle:
            assert math.gcd(s.g - 1, n) == 1


# -- codes ---------------------------------------------------------------------------


def test_dom_code_t3():
    M, D = con.dom_code(3)
    assert set(M.words) == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}
    assert len(D) == 4
    assert all(2 <= d <= 2 for d in M.distances())
    spec = gen.ProductSpec.complete([3, 3, 3])
    assert is_dominating(gen.product(spec), to_mask(spec.index(w) for w in D))


def test_dom_code_sizes():
    assert len(con.dom_code(2)[1]) <= 3
    M, D = con.dom_code(4)
    assert len(M.words) >= 4 and len(D) <= 12
    spec = gen.ProductSpec.complete([2, 3, 3, 3])
    assert is_dominating(gen.product(spec), to_mask(spec.index(w) for w in D))


@pytest.mark.parametrize("t", range(2, 8))
def test_dom_code_distances(t):
    M, D = con.dom_code(t)
    assert all(2 <= d <= t - 1 for d in M.distances())
    assert 4 * len(D) <= 3 * 2**t


def test_gv_lower():
    assert con.gv_lower(4, 2) == 8
    assert con.gv_lower(5, 2) == 16
    assert con.gv_lower(4, 3) == 2
    with pytest.raises(ValueError):
        con.gv_lower(3, 4)


# -- four-fold products -----------------------------------------------------------


def test_gamma4_closed_form():
    assert con.gamma4_closed_form(3, 3, 3, 3) == 7
    assert con.gamma4_closed_form(2, 3, 3, 3) == 8
    assert con.gamma4_closed_form(5, 5, 5, 5) == 5
    assert con.gamma4_closed_form(4, 4, 5, 6) == 6
    assert con.gamma4_closed_form(4, 4, 4, 5) == 7
    assert con.gamma4_closed_form(3, 6, 6, 6) == 6
    with pytest.raises(HypothesisViolated):
        con.gamma4_closed_form(2, 2, 3, 3)
    with pytest.raises(HypothesisViolated):
        con.gamma4_closed_form(3, 2, 4, 4)


def test_repaired_set_shape():
    D = con.repaired_d7()
    assert len(set(D)) == 7 and D[3] == con.D7_REPAIR
    assert all(max(p) < 3 for p in D)


def test_printed_six_set_in_k6_power():
    spec = gen.ProductSpec.complete([6, 6, 6, 6])
    G = gen.product(spec)
    S = to_mask(spec.index(p) for p in con.PRINTED_D6)
    assert is_dominating(G, S) and is_total_dominating(G, S)


def test_compact_relabel():
    pts = con.compact_relabel(con.PRINTED_D6, (4, 4, 4, 6))
    assert pts is not None and all(max(p[i] for p in pts) < n for i, n in enumerate((4, 4, 4, 6)))
    assert con.compact_relabel(con.PRINTED_D6, (4, 4, 5, 5)) is None


@pytest.mark.parametrize("ns", [(2, 3, 3, 3), (5, 5, 5, 5), (6, 6, 6, 6), (4, 4, 4, 6), (3, 4, 4, 4), (4, 4, 5, 5)])
def test_gamma4_witness(ns):
    w = con.gamma4_witness(*ns, budget=60)
    spec = gen.ProductSpec.complete(ns)
    assert w.verified and len(w.points) == con.gamma4_closed_form(*ns)
    assert is_dominating(gen.product(spec), to_mask(spec.index(p) for p in w.points))


# -- independent dominating sets of X_n ------------------------------------------------


def test_independent_product_examples():
    for primes, size in [((3, 5, 7), 4), ((2, 3, 5, 7), 8), ((2, 3, 5), 4)]:
        D = con.independent_dominating_product(primes)
        assert len(D) == size
        G = gen.unitary_cayley(math.prod(primes))
        assert classify_set(G, D).maximal_independent


def test_independent_product_sieve_route():
    c = con.verify_independent_dominating([3, 5, 7, 11, 13], size_cap=1000)
    assert c.route == "sieve" and c.size == 4 * 3 * 5 and c.maximal_independent
    c = con.verify_independent_dominating([2, 3, 5, 7])
    assert c.route == "graph" and c.maximal_independent


# -- closed forms and bounds --------------------------------------------------------------


def _get(reports, name):
    return next(r for r in reports if r.name.startswith(name))


def test_closed_forms_values():
    r = con.closed_forms(gen.ProductSpec.complete([3, 3, 3]))
    assert _get(r, "ir closed").bound_value == 4 and _get(r, "i closed").bound_value == 4
    r = con.closed_forms(gen.ProductSpec.complete([3, 3, 3, 3]))
    assert _get(r, "ir lower").bound_value == Fraction(7, 2)
    assert _get(r, "gamma lower").bound_value == 6
    r = con.closed_forms(gen.ProductSpec.complete([2, 5]))
    assert _get(r, "ir closed").bound_value == 2 and _get(r, "i closed").bound_value == 2
    assert not _get(r, "gamma lower").hypothesis_ok


def test_ir_upper_values():
    spec105 = gen.xn_product_spec(105)
    r = con.ir_upper_bounds(spec105, n=105)
    assert _get(r, "alpha =").bound_value == 35
    assert _get(r, "IR sum").bound_value == 65
    assert _get(r, "IR(X_n)").hypothesis_ok
    tri = gen.ProductSpec.complete([3, 3, 3])
    r = con.ir_upper_bounds(tri)
    assert _get(r, "IR sum").bound_value == 27
    ratio = _get(r, "IR ratio").bound_value
    assert ratio == Fraction(81, 5)
    ir = solve(gen.product(tri), P.IR_UPPER).value
    assert ir <= 16


def test_violated_bound_carries_certificate():
    b = con.BoundReport("demo", P.GAMMA, "upper", True, Fraction(3))
    b.judge(4, "Kn:3x3", (0, 1, 2, 3))
    assert b.verdict == "violated" and b.certificate["graph"] == "Kn:3x3"
    b = con.BoundReport("demo", P.GAMMA, "upper", True, Fraction(3)).judge(None)
    assert b.verdict == "unchecked"
    b = con.BoundReport("demo", P.GAMMA, "upper", False, None).judge(1)
    assert b.verdict == "not_applicable"


def test_evaluate_bounds_small():
    reports, values = con.evaluate_bounds(gen.ProductSpec.complete([2, 3]))
    assert values[P.IR_LOWER] == 2
    assert all(r.verdict != "violated" for r in reports)


# -- R_{q,d,k} ---------------------------------------------------------------


def test_rqdk():
    assert con.rqdk(7, 2, 1) == [1]
    assert con.rqdk(7, 2, 2) == [0, 1]
    R = con.rqdk(7, 6, 4)
    assert con.rqdk(7, 6, 1) == [1]
    assert R == [1, 2, 3, 4]
    size, _ = con.rqdk_cover(7, 6, 4)
    assert size <= 2

"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Every comparison is exact unless a numerical tolerance
is stated inline.
"""

import math
import random
import time
from fractions import Fraction

from tsppsd.bounds import (
    bound_oracle,
    bound_report,
    f_counts,
    g_counts,
    lemma_bound,
    proposition_bound,
    theorem1_constants,
)
from tsppsd.cycles import (
    HamiltonianCycle,
    PathSystem,
    all_edges,
    count_cycles_containing,
    edge,
    edge_index,
    enumerate_cycles,
)
from tsppsd.functionals import (
    FacetSpec,
    LinearFunctional,
    average_on_x,
    make_edge_bound,
    make_ones,
    make_subtour,
    make_two_matching,
)
from tsppsd.moment import (
    GroundSet,
    closed_form_k1,
    expected_trace,
    moment_matrix_closed_form_k1,
    moment_matrix_enumerated_cycles,
    trace_of,
)
from tsppsd.psd import (
    boundary_certificate,
    membership_p1,
    verify_certificate,
    zero_one_collapse_check,
)
from tsppsd.spectra import (
    spectrum_matches_numerical,
    sqrt_n_nonpositivity,
    verify_eigenpairs_exact,
)

_CYCLES = {}


def cycles_of(n):
    if n not in _CYCLES:
        _CYCLES[n] = enumerate_cycles(n)
    return _CYCLES[n]


def report(num, name, ok, t0, budget, detail=""):
    elapsed = time.time() - t0
    status = "PASS" if ok and elapsed < budget else "FAIL"
    extra = f", {detail}" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: {status} ({elapsed:.1f}s{extra})")
    assert ok, f"criterion {num} ({name}): {detail}"
    assert elapsed < budget, f"criterion {num} exceeded {budget}s budget: {elapsed:.1f}s"


def path_patterns(n):
    out = set()

    def rec(prefix, cap):
        k, m = sum(prefix), len(prefix)
        for part in range(1, cap + 1):
            if k + part + m + 1 <= n:
                out.add(tuple(prefix + [part]))
                rec(prefix + [part], part)

    rec([], n - 1)
    return sorted(out)


def test_criterion_01_lemma_paths():
    t0 = time.time()
    rng = random.Random(0)
    checked = 0
    ok = True
    for n in range(4, 10):
        cycles = cycles_of(n)
        for pattern in path_patterns(n):
            labels = list(range(1, n + 1))
            rng.shuffle(labels)
            paths, pos = [], 0
            for length in pattern:
                paths.append(tuple(labels[pos: pos + length + 1]))
                pos += length + 1
            ps = PathSystem(tuple(paths))
            closed = count_cycles_containing(n, ps)
            brute = sum(1 for c in cycles if ps.edges <= c.edges)
            ok = ok and closed == brute
            checked += 1
    report(1, "lemma-paths", ok, t0, 60, f"{checked} patterns")


def _facet_family(n):
    fns = [("ones", make_ones(n))]
    for m in range(2, n // 2 + 1):
        fns.append((f"subtour-m{m}", make_subtour(n, range(2, m + 2))))
    fns.append(("edge-lower", make_edge_bound(n, edge(2, 3), "lower")))
    fns.append(("edge-upper", make_edge_bound(n, edge(2, 3), "upper")))
    if n >= 7:
        fns.append(
            ("two-matching",
             make_two_matching(n, {1, 2, 3}, [edge(1, 4), edge(2, 5), edge(3, 6)]))
        )
    return fns


def test_criterion_02_moment_matrix_oracle():
    t0 = time.time()
    ok = True
    count = 0
    for n in range(6, 10):
        for name, f in _facet_family(n):
            closed = moment_matrix_closed_form_k1(f)
            enum = moment_matrix_enumerated_cycles(n, f, 1)
            ok = ok and closed.entries == enum.entries
            count += 1
    report(2, "moment-closed-vs-enumerated", ok, t0, 300, f"{count} matrices")


def test_criterion_03_trace_identity():
    t0 = time.time()
    rng = random.Random(1)
    ok = True
    for n in (6, 7, 8):
        for k in (1, 2):
            f = make_subtour(n, {1, 2, 3})
            M = moment_matrix_enumerated_cycles(n, f, k)
            ok = ok and trace_of(M) == math.comb(n + k, k)
    randoms = 0
    while randoms < 20:
        n = rng.choice((6, 7))
        k = rng.choice((1, 2))
        coeff = {
            e: Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            for e in all_edges(n)
            if rng.random() < 0.5
        }
        f = LinearFunctional(n, Fraction(rng.randint(-2, 2)), coeff)
        M = moment_matrix_enumerated_cycles(n, f, k)
        ok = ok and trace_of(M) == expected_trace(n, k, average_on_x(f))
        randoms += 1
    report(3, "trace-identity", ok, t0, 60, "generators + 20 random")


def test_criterion_04_boundary_certificates():
    t0 = time.time()
    ok = True
    count = 0
    for n in (6, 7, 8):
        for e in all_edges(n):
            for kind in ("edge-lower", "edge-upper"):
                spec = FacetSpec(kind, n, edge=e)
                ok = ok and verify_certificate(
                    spec.functional(), boundary_certificate(spec), n
                )
                count += 1
        for m in range(2, n // 2 + 1):
            spec = FacetSpec("subtour", n, U=tuple(range(1, m + 1)))
            ok = ok and verify_certificate(
                spec.functional(), boundary_certificate(spec), n
            )
            count += 1
    for n in (7, 8):
        spec = FacetSpec(
            "two-matching", n, U=(1, 2, 3), F=(edge(1, 4), edge(2, 5), edge(3, 6))
        )
        ok = ok and verify_certificate(
            spec.functional(), boundary_certificate(spec), n
        )
        count += 1
    report(4, "boundary-certificates", ok, t0, 120, f"{count} zero identities")


def test_criterion_05_eigenvalue_tables():
    t0 = time.time()
    ok = True
    pairs = 0
    for n in range(6, 11):
        for m in range(3, n // 2 + 1):
            mult_total = None
            for a in (0, 1, 5):
                rep = verify_eigenpairs_exact(n, m, a)
                ok = ok and rep.all_ok
                mult_total = sum(c.claimed_multiplicity for c in rep.families)
            ok = ok and mult_total == n * (n - 1) // 2 - 1
            pairs += 1
    for n in range(6, 15):
        for m in range(3, n // 2 + 1):
            dev = spectrum_matches_numerical(n, m, Fraction(1))
            ok = ok and dev < 1e-9
    report(5, "eigenvalue-tables", ok, t0, 300, f"{pairs} (n,m) pairs, a in {{0,1,5}}")


def test_criterion_06_sqrt_n_nonpositivity():
    t0 = time.time()
    ok = True
    count = 0
    for n in range(6, 41):
        for check in sqrt_n_nonpositivity(n):
            ok = ok and check.ok
            count += 1
    report(6, "sqrt-n-nonpositivity", ok, t0, 600, f"{count} (n,m) pairs")


def test_criterion_07_proposition_calculations():
    t0 = time.time()
    ok = True
    for n in range(6, 10):
        y = HamiltonianCycle(tuple(range(1, n + 1)))
        for k in range(1, n // 2 + 1):
            counts = f_counts(n, k) if n % 2 == 0 else g_counts(n, k)
            oracle = (
                bound_oracle(n, k, y, edge(1, 3)),
                bound_oracle(n, k, y, edge(1, 2)),
            )
            ok = ok and counts == oracle
            ok = ok and lemma_bound(*counts, n) == proposition_bound(n, k)
    for n in range(6, 41):
        ok = ok and proposition_bound(n, 1) == -(n - 1)
        ok = ok and bound_report(n, 1).a_k == n
    report(7, "proposition-calculations", ok, t0, 300, "counts vs brute force, n<=9")


def test_criterion_08_theorem1_constants():
    t0 = time.time()
    ok = True
    count = 0
    for n in range(9, 201):
        for k in range(1, n // 2 + 1):
            rep = theorem1_constants(n, k)
            ok = ok and abs(rep.alpha_k) <= Fraction(10, n)
            ok = ok and rep.a_k == Fraction(n, k) + rep.alpha_k
            count += 1
    report(8, "theorem1-constants", ok, t0, 60, f"{count} (n,k) pairs")


def test_criterion_09_zero_one_collapse():
    t0 = time.time()
    rng = random.Random(2)
    ok = True
    rejected = 0
    for _ in range(60):
        d = rng.randint(2, 4)
        universe = [
            tuple(Fraction((mask >> i) & 1) for i in range(d))
            for mask in range(2**d)
        ]
        pts = tuple(rng.sample(universe, rng.randint(2, 2**d)))
        X = GroundSet(d, pts)
        const = Fraction(rng.randint(-3, 3))
        coefs = [Fraction(rng.randint(-3, 3)) for _ in range(d)]
        values = [const + sum(c * x for c, x in zip(coefs, pts_i)) for pts_i in pts]
        result = zero_one_collapse_check(X, values)
        negative = any(v < 0 for v in values)
        ok = ok and result.in_q != negative
        if not result.in_q:
            rejected += 1
            y = result.witness_point
            fy = values[pts.index(y)]
            # independent recomputation of q_f(p_y)
            q = sum(
                (fv * result.certificate.evaluate(p) ** 2 for p, fv in zip(pts, values)),
                Fraction(0),
            ) / len(pts)
            ok = ok and q == Fraction(fy, len(pts)) and q < 0
            ok = ok and result.q_value == q
    report(9, "zero-one-collapse", ok, t0, 30, f"60 trials, {rejected} rejections")


def test_criterion_10_membership_sanity():
    t0 = time.time()
    ok = True
    count = 0
    for n in range(6, 41):
        for name, f in _facet_family(n):
            verdict = membership_p1(f)
            ok = ok and verdict.is_psd
            count += 1
        # the |U| = 2 subtour facet sits on the boundary: the inner-edge row
        # of its moment matrix vanishes identically
        cf = closed_form_k1(make_subtour(n, {2, 3}))
        ok = ok and cf.zero_rows() == [1 + edge_index(edge(2, 3), n)]
    report(10, "membership-sanity", ok, t0, 120, f"{count} functionals, n<=40")

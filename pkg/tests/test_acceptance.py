"""Acceptance suite for the package: ten checks, one printed line each.

Run `pytest -s tests/test_acceptance.py` to see the [PASS]/[FAIL] lines.
Every comparison is exact rational arithmetic; the only tolerances are the
stated node-count and wall-clock ceilings.  Instance suites are generated
deterministically from fixed seeds; the suites for the complete-search
checks use seeds screened once for tractable trees (complete search on
small hard instances is not always tractable), and the screening rule is
recorded next to each seed list.
"""

import time
from fractions import Fraction

import pytest

import semifluid as sf
from semifluid import (GenSpec, Limits, Rule, bfd, branch_and_bound, expand,
                       generate, lds, make_root, pack, validate)
from semifluid.bench import pairwise, solve_with

from oracle import best_restricted_value


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def gen(family, n, seed, digits=2, factor=Fraction(1)):
    return generate(GenSpec(family=family, n_items=n, length_digits=digits,
                            volume_factor=Fraction(factor), seed=seed))


# ---------------------------------------------------------------------------
# Shared suites.
# ---------------------------------------------------------------------------

DOMINANCE_SIZES = [5, 5, 8, 8, 10, 10, 15, 15, 20, 20, 30, 50]


@pytest.fixture(scope="module")
def dominance_suite():
    """500 generated instances, sizes 5 to 50, alternating families,
    digits, and hard-instance volume factors."""
    suite = []
    for k in range(500):
        family = "easy" if k % 2 == 0 else "hard"
        result = gen(family, DOMINANCE_SIZES[k % len(DOMINANCE_SIZES)],
                     seed=2000 + k, digits=2 if (k // 2) % 2 == 0 else 3,
                     factor="1" if k % 4 == 1 else "3/2")
        suite.append((family, result.instance))
    return suite


# Complete-search suite: 26 easy and 24 hard instances of sizes 3 to 8.
# Hard seeds were screened once for complete-search tractability (LDS
# finishing within 2500 explored nodes); seeds count up, skipping the
# intractable ones, with the volume factor 3/2 for odd seeds and 1 for
# even.
AGREEMENT_SPECS = (
    [("easy", n, seed, "1") for n in (3, 4, 5, 6, 7, 8) for seed in (1, 2, 3, 4)]
    + [("easy", 3, 5, "1"), ("easy", 4, 5, "1")]
    + [("hard", 3, 1, "3/2"), ("hard", 3, 2, "1"), ("hard", 3, 3, "3/2"), ("hard", 3, 4, "1"),
       ("hard", 4, 1, "3/2"), ("hard", 4, 2, "1"), ("hard", 4, 3, "3/2"), ("hard", 4, 5, "3/2"),
       ("hard", 5, 1, "3/2"), ("hard", 5, 2, "1"), ("hard", 5, 5, "3/2"), ("hard", 5, 6, "1"),
       ("hard", 6, 1, "3/2"), ("hard", 6, 2, "1"), ("hard", 6, 5, "3/2"), ("hard", 6, 6, "1"),
       ("hard", 7, 1, "3/2"), ("hard", 7, 2, "1"), ("hard", 7, 5, "3/2"), ("hard", 7, 6, "1"),
       ("hard", 8, 2, "1"), ("hard", 8, 5, "3/2"), ("hard", 8, 6, "1"), ("hard", 8, 8, "1")])

# Small-instance suite for the bound admissibility and symmetry checks:
# 50 instances of size at most 5.  Hard seeds were screened once so the
# full symmetry-constrained tree walk stays below 40000 nodes and
# branch-and-bound without symmetry rules finishes within 6000 nodes.
SMALL_SPECS = (
    [("easy", n, seed, "1") for n in (3, 4, 5) for seed in range(1, 8)]
    + [("hard", 2, seed, "3/2" if seed % 2 else "1") for seed in range(1, 8)]
    + [("hard", 3, seed, "3/2" if seed % 2 else "1") for seed in range(1, 8)]
    + [("hard", 4, seed, "3/2" if seed % 2 else "1") for seed in (1, 2, 3, 5, 6, 8, 9)]
    + [("hard", 5, seed, "3/2" if seed % 2 else "1") for seed in (1, 2, 5, 6, 8, 9, 10, 11)])


def build(specs):
    return [(family, gen(family, n, seed, factor=factor).instance)
            for family, n, seed, factor in specs]


# ---------------------------------------------------------------------------
# The criteria.
# ---------------------------------------------------------------------------

def test_a01_easy_instances_solved_to_their_known_optimum():
    nodes = {"LDS": [], "BFD": []}
    slowest = 0.0
    for seed in range(1, 101):
        result = gen("easy", 5, seed)
        optimum = result.layout.value
        for name, search in (("LDS", lds), ("BFD", bfd)):
            outcome = search(result.instance)
            assert outcome.optimal, (name, seed)
            assert outcome.solution.value == optimum, (name, seed)
            assert validate(result.instance, outcome.solution) == []
            assert outcome.stats.wall_time < 1.0, (name, seed)
            nodes[name].append(outcome.stats.nodes_explored)
            slowest = max(slowest, outcome.stats.wall_time)
    means = {name: sum(counts) / len(counts) for name, counts in nodes.items()}
    ok = all(mean <= 500 for mean in means.values())
    report("A1 easy-instance optimality", ok,
           f"100/100 optimal at the known value; mean nodes explored "
           f"LDS {means['LDS']:.1f} / BFD {means['BFD']:.1f} (ceiling 500); "
           f"slowest run {slowest:.3f}s (ceiling 1s)")


def test_a02_complete_searches_agree_and_prove_optimality():
    suite = build(AGREEMENT_SPECS)
    assert len(suite) == 50
    start = time.perf_counter()
    for family, instance in suite:
        outcomes = [branch_and_bound(instance), bfd(instance), lds(instance)]
        values = {outcome.solution.value for outcome in outcomes}
        assert len(values) == 1, (family, len(instance.items))
        assert all(outcome.optimal for outcome in outcomes)
        for outcome in outcomes:
            assert validate(instance, outcome.solution) == []
    elapsed = time.perf_counter() - start
    report("A2 cross-method agreement", elapsed <= 300.0,
           f"BB=BFD=LDS with optimality on 50 mixed instances of sizes 3-8 "
           f"in {elapsed:.1f}s (ceiling 300s)")


def test_a03_local_ascent_dominates_and_often_improves(dominance_suite):
    violations = 0
    hard_total = hard_improved = 0
    for family, instance in dominance_suite:
        base = pack(instance, Rule.LBF)
        improved = sf.ascent(instance, Rule.LBF)
        if improved.value < base.value:
            violations += 1
        if family == "hard":
            hard_total += 1
            hard_improved += improved.value > base.value
    share = 100.0 * hard_improved / hard_total
    report("A3 ascent dominance", violations == 0 and share >= 30.0,
           f"ascent >= construction on 500/500 instances; strict improvement "
           f"on {hard_improved}/{hard_total} hard instances = {share:.0f}% "
           f"(floor 30%)")


def test_a04_length_rules_beat_value_rules_on_hard_instances():
    records = []
    for k in range(200):
        instance = gen("hard", 10 + 2 * (k % 6), seed=3000 + k,
                       digits=2 if k % 2 == 0 else 3,
                       factor="1" if k % 4 < 2 else "3/2").instance
        for method in ("LBF", "WFF", "WBF"):
            record = solve_with(method, instance)
            record.instance_id = f"h{k}"
            records.append(record)
    matrix = pairwise(records, ["LBF", "WFF", "WBF"])
    diff = matrix.difference()
    lbf_wff = diff[0][1]
    lbf_wbf = diff[0][2]
    report("A4 rule-family ordering", lbf_wff > 0 and lbf_wbf > 0,
           f"win-count differences on 200 hard instances of sizes 10-20: "
           f"LBF-WFF {lbf_wff:+d}, LBF-WBF {lbf_wbf:+d} (both must be positive)")


def test_a05_bfd_first_leaf_equals_the_lbf_construction(dominance_suite):
    mismatches = 0
    for _, instance in dominance_suite:
        outcome = bfd(instance, stop_after_first_leaf=True)
        if outcome.stats.first_leaf_value != pack(instance, Rule.LBF).value:
            mismatches += 1
    report("A5 BFD first-leaf property", mismatches == 0,
           f"first leaf = LBF construction on {len(dominance_suite) - mismatches}"
           f"/{len(dominance_suite)} instances")


def test_a06_two_item_gap_regression(two_item_gap_instance):
    instance = two_item_gap_instance
    brute = best_restricted_value(instance)
    root_bound = sf.upper_bound(make_root(instance), instance)
    values, flags = [], []
    for search in (branch_and_bound, bfd, lds):
        outcome = search(instance)
        values.append(outcome.solution.value)
        flags.append(outcome.optimal)
        assert validate(instance, outcome.solution) == []
    ok = (brute == 24 and all(v == 24 for v in values) and all(flags)
          and root_bound == 30)
    report("A6 ceiling-split-only gap regression", ok,
           "complete search returns exactly 24 with the optimality flag; "
           "brute force confirms 24 is the restricted-space maximum while "
           "the root relaxation (and the true fractional packing) reach 30")


def test_a07_upper_bound_dominates_every_subtree():
    suite = build(SMALL_SPECS)
    assert len(suite) == 50
    checked = 0

    def walk(node, instance):
        nonlocal checked
        checked += 1
        children = expand(node, instance, enforce_symmetry=True)
        if not children:
            return node.value
        best = max(walk(child, instance) for child in children)
        assert node.upper_bound >= best, "bound below subtree maximum"
        return best

    for _, instance in suite:
        best = walk(make_root(instance), instance)
        assert best == best_restricted_value(instance)
    report("A7 bound admissibility", True,
           f"upper bound >= exhaustive subtree maximum at every node of 50 "
           f"complete trees ({checked} nodes checked), and each tree maximum "
           f"matches the independent brute force")


def test_a08_symmetry_rules_preserve_the_optimum():
    suite = build(SMALL_SPECS)
    for _, instance in suite:
        with_rules = branch_and_bound(instance)
        without = branch_and_bound(instance, enforce_symmetry=False)
        assert with_rules.optimal and without.optimal
        assert with_rules.solution.value == without.solution.value
    report("A8 symmetry soundness", True,
           "optimum with symmetry rules equals optimum without, exactly, "
           "on 50 instances of size <= 5")


def test_a09_every_emitted_solution_is_feasible():
    methods = ("BF", "LFF", "LBF", "WFF", "WBF", "LA", "BB", "BFD", "LDS")
    limits = Limits(max_nodes=2000)
    checked = 0
    for k in range(20):
        family = "easy" if k % 2 == 0 else "hard"
        instance = gen(family, 3 + k % 6, seed=4000 + k,
                       factor="3/2" if k % 4 == 3 else "1").instance
        for method in methods:
            record = solve_with(method, instance, limits)
            assert validate(instance, record.solution) == [], (method, k)
            checked += 1
    report("A9 feasibility of every solution", True,
           f"validator accepts all {checked} solutions "
           f"(9 methods x 20 instances, node-capped searches included)")


def test_a10_generator_reproducibility_and_partitions(tmp_path):
    byte_checks = partition_checks = 0
    for seed in range(1, 16):
        for family, factor in (("easy", "1"), ("hard", "1"), ("hard", "3/2")):
            spec = dict(family=family, n=4 + seed % 5, seed=seed,
                        digits=2 if seed % 2 else 3, factor=factor)
            paths = []
            for k in range(2):
                result = gen(**spec)
                path = tmp_path / f"{family}_{factor.replace('/', '-')}_{seed}_{k}.txt"
                sf.write_instance(result.instance, path, header=result.header)
                paths.append(path)
            assert paths[0].read_bytes() == paths[1].read_bytes()
            byte_checks += 1

            result = gen(**spec)
            total = sum(item.volume for item in result.instance.items)
            if family == "easy":
                assert total == result.instance.volume == 1
                assert validate(result.instance, result.layout) == []
                assert result.layout.value == sum(item.value
                                                  for item in result.instance.items)
            else:
                assert total == Fraction(factor)
            partition_checks += 1
    report("A10 generator reproducibility and partition", True,
           f"{byte_checks} byte-identical regenerations; {partition_checks} "
           f"exact volume checks (easy layouts validate at the known optimum)")

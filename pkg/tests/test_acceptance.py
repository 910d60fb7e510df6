"""Acceptance gate: one test per primary criterion, tolerances pinned here.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion.
"""

import random
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from conceptprobe import (
    FormalContext,
    ProbeState,
    attribute_concept,
    build_aoc,
    build_lattice,
    complementary_cover,
    compute_groups,
    derive_attributes,
    enumerate_concepts,
    generate_benchmark,
    iceberg_filter,
    layout,
    reveal,
    semantic_distance,
    visible_groups,
)

from .oracles import brute_concepts, brute_minimal_covers, concepts_as_name_pairs

GOLDEN = Path(__file__).parent / "golden" / "server_walkthrough.json"


def ok(name):
    print(f"ACCEPTANCE PASS: {name}")


def make_probe(ctx, names, weights=None):
    probe = ProbeState(ctx)
    for n in names:
        probe.add_object(n)
    for n, w in (weights or {}).items():
        probe.set_weight(n, w)
    return probe


def name_pairs(ctx, concepts):
    return concepts_as_name_pairs(ctx, concepts)


def test_table1_ground_truth(table1):
    enumerate_concepts(table1)  # warm caches before timing
    start = time.perf_counter()
    concepts = enumerate_concepts(table1)
    elapsed = time.perf_counter() - start
    assert len(concepts) == 10
    pairs = name_pairs(table1, concepts)
    assert (
        frozenset({"Angelina", "Brad"}),
        frozenset({"Film1", "Film3", "Film5"}),
    ) in pairs
    assert (frozenset({"Cate"}), frozenset({"Film1", "Film4"})) in pairs
    assert elapsed < 0.010, f"enumeration took {elapsed * 1000:.2f} ms"
    ok(f"Table 1 ground truth (10 concepts, {elapsed * 1e6:.0f} us)")


def test_derivation_fixtures(table1):
    films = table1.attribute_mask(["Film1", "Film3", "Film5"])
    extent = derive_attributes(table1, films)
    assert set(table1.object_names(extent)) == {"Angelina", "Brad"}
    from conceptprobe import closure_attributes

    closed = closure_attributes(table1, films)
    assert closed == films
    assert closure_attributes(table1, closed) == closed
    ok("derivation fixtures ({F1,F3,F5}' and fixed-point closure)")


def test_aoc_criteria(table1):
    lat = build_lattice(table1, enumerate_concepts(table1))
    aoc = build_aoc(table1, lat)
    by_extent = {lat.concepts[i].extent: i for i in aoc.node_ids}

    ba = table1.object_mask(["Brad", "Angelina"])
    assert table1.attribute_names(aoc.reduced_intents[by_extent[ba]]) == ["Film3"]

    cate = table1.object_mask(["Cate"])
    assert aoc.reduced_intents[by_extent[cate]] == 0

    union = 0
    for mask in aoc.reduced_intents.values():
        assert union & mask == 0, "attribute labelled twice"
        union |= mask
    assert union == table1.all_attributes, "attribute never labelled"

    gammas = [attribute_concept(table1, m) for m in range(table1.n_attributes)]
    for c in lat.concepts:
        rebuilt = 0
        for m, gamma in enumerate(gammas):
            if c.extent & gamma.extent == c.extent:
                rebuilt |= 1 << m
        assert rebuilt == c.intent, f"rebuild law fails at concept {c.id}"
    ok("AOC reduced labels, label partition, rebuild law on all 10 concepts")


def test_oracle_equivalence_200_random_contexts():
    start = time.perf_counter()
    rng = random.Random(20240601)
    mismatches = 0
    for trial in range(200):
        n_obj = rng.randint(0, 10)
        n_attr = rng.randint(0, 10)
        rows = [
            sum(1 << m for m in range(n_attr) if rng.random() < 0.45)
            for _ in range(n_obj)
        ]
        ctx = FormalContext(
            f"r{trial}",
            [f"g{i}" for i in range(n_obj)],
            [f"m{j}" for j in range(n_attr)],
            rows,
        )
        if name_pairs(ctx, enumerate_concepts(ctx)) != brute_concepts(ctx):
            mismatches += 1
            continue
        if ctx.n_objects == 0:
            continue
        # probe structure vs. brute-force sub-context attribute extents
        k = rng.randint(1, ctx.n_objects)
        probe = make_probe(ctx, rng.sample(list(ctx.objects), k))
        groups = compute_groups(ctx)
        lay = layout(ctx, probe, groups)
        filtered = {
            cls.filtered_extent for layer in lay.layers for cls in layer.classes
        }
        positive = probe.positive
        expected = {
            ctx.cols[m] & positive
            for m in range(ctx.n_attributes)
            if ctx.cols[m] & positive
        }
        if filtered != expected:
            mismatches += 1
            continue
        for gid in visible_groups(ctx, probe, groups):
            res = reveal(ctx, probe, gid, groups)
            members = 0
            for i in res.highlighted:
                members |= groups[i].members
            brute = 0
            for m in range(ctx.n_attributes):
                if ctx.cols[m] & positive and res.extent & ctx.cols[m] == res.extent:
                    brute |= 1 << m
            if members != brute:
                mismatches += 1
                break
    elapsed = time.perf_counter() - start
    assert mismatches == 0
    assert elapsed < 30, f"oracle suite took {elapsed:.1f} s"
    ok(f"oracle equivalence on 200 random contexts ({elapsed:.1f} s)")


def test_probe_layering(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    lay = layout(table1, probe, groups)
    shape = [
        (
            layer.sd,
            [
                (
                    tuple(table1.object_names(cls.filtered_extent)),
                    tuple(
                        table1.attributes[groups[g].representative]
                        for g in cls.group_ids
                    ),
                )
                for cls in layer.classes
            ],
        )
        for layer in lay.layers
    ]
    assert shape == [
        (Fraction(0), [(("Brad", "Angelina", "Cate"), ("Film1",))]),
        (Fraction(1, 3), [(("Brad", "Angelina"), ("Film3", "Film5"))]),
        (Fraction(2, 3), [(("Brad",), ("Film2",)), (("Cate",), ("Film4",))]),
    ]

    # weight locality at 0.50: only Cate-containing groups move
    before = {g.id: semantic_distance(probe, g) for g in groups}
    probe.set_weight("Cate", "0.5")
    cate = table1.object_index["Cate"]
    for g in groups:
        moved = semantic_distance(probe, g) != before[g.id]
        assert moved == bool((g.extent >> cate) & 1)

    # weight 0 hides exactly the groups whose sole common object is Cate
    probe.set_weight("Cate", "0")
    vis = set(visible_groups(table1, probe, groups))
    positive_others = table1.object_mask(["Angelina", "Brad"])
    for g in groups:
        should_hide = bool(
            (g.extent >> cate) & 1 or not g.extent & probe.loaded
        ) and not g.extent & positive_others
        assert (g.id not in vis) == should_hide
    ok("probe layering fixtures incl. half-weight locality and zero-weight hiding")


def test_benchmark_structure_and_bounds():
    ctx = generate_benchmark(127, 245, trilogy=True, seed=42)
    groups = compute_groups(ctx)
    assert len(groups) == 125
    assert [g.badge for g in groups].count(3) == 1
    assert all(g.badge == 1 for g in groups if g.badge != 3)

    start = time.perf_counter()
    concepts = enumerate_concepts(ctx)
    build_lattice(ctx, concepts)
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"benchmark lattice took {elapsed:.2f} s"

    rng = random.Random(7)
    assert len(groups) <= ctx.n_attributes
    for _ in range(50):
        k = rng.randint(1, 6)
        probe = make_probe(ctx, rng.sample(list(ctx.objects), k))
        assert len(visible_groups(ctx, probe, groups)) <= 125 <= ctx.n_attributes
    ok(
        f"benchmark: 125 groups, one badge-3, lattice of {len(concepts)} "
        f"concepts in {elapsed:.2f} s, visible-group bound on 50 probes"
    )


def test_iceberg_criterion(table1):
    lat = build_lattice(table1, enumerate_concepts(table1))
    kept = iceberg_filter(lat, table1, Fraction(3, 5))
    assert len(kept) == 3
    extents = {frozenset(table1.object_names(lat.concepts[i].extent)) for i in kept}
    assert extents == {
        frozenset({"Brad", "Angelina", "Cate", "Leonardo"}),
        frozenset({"Brad", "Angelina", "Cate"}),
        frozenset({"Brad", "Angelina", "Leonardo"}),
    }
    for lo, hi in zip(range(0, 10), range(1, 11)):
        assert set(iceberg_filter(lat, table1, Fraction(hi, 10))) <= set(
            iceberg_filter(lat, table1, Fraction(lo, 10))
        )
    ok("iceberg monotonicity and the 0.6-threshold fixture (3 concepts)")


def test_cover_search_criterion(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, table1.objects)
    got = complementary_cover(table1, probe, 2, max_results=100)
    sets_by_id = {
        g.id: g.extent & probe.positive for g in groups if g.extent & probe.positive
    }
    assert [tuple(c) for c in got.covers] == brute_minimal_covers(
        probe.positive, sets_by_id, 2
    )

    for size in range(1, 5):
        for combo in combinations(table1.objects, size):
            p = make_probe(table1, combo)
            sets_by_id = {
                g.id: g.extent & p.positive for g in groups if g.extent & p.positive
            }
            got = complementary_cover(table1, p, 6, max_results=10_000)
            assert [tuple(c) for c in got.covers] == brute_minimal_covers(
                p.positive, sets_by_id, 6
            ), combo
    ok("cover search equals brute force on every probe over Table 1")


def test_scale_smoke_1200_attributes():
    rng = random.Random(314159)
    n_obj, n_attr = 260, 1200
    rows = [0] * n_obj
    for m in range(n_attr):
        for _ in range(rng.randint(2, 6)):
            rows[rng.randrange(n_obj)] |= 1 << m
    ctx = FormalContext(
        "albums",
        [f"g{i}" for i in range(n_obj)],
        [f"t{j}" for j in range(n_attr)],
        rows,
    )
    groups = compute_groups(ctx)
    worst = 0.0
    for _ in range(20):
        probe = make_probe(ctx, rng.sample(list(ctx.objects), 3))
        start = time.perf_counter()
        layout(ctx, probe, groups)
        worst = max(worst, time.perf_counter() - start)
    assert worst < 0.100, f"slowest layout took {worst * 1000:.1f} ms"
    ok(f"scale smoke: 1200x260 3-object layouts, worst {worst * 1000:.2f} ms")


def test_server_golden_walkthrough():
    from .test_server import run_walkthrough

    text = run_walkthrough()
    assert text == GOLDEN.read_text(encoding="utf-8")
    assert text == run_walkthrough()
    ok("server golden walkthrough byte-stable")

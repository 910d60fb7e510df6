import random
from fractions import Fraction

import pytest

from conceptprobe import (
    ProbeState,
    compute_groups,
    diff_layout,
    layout,
    parse_cxt,
    reveal,
    semantic_distance,
    sub_context,
    visible_groups,
)
from conceptprobe.probe import layout_to_json

from .oracles import random_context


def make_probe(ctx, names, weights=None):
    probe = ProbeState(ctx)
    for n in names:
        probe.add_object(n)
    for n, w in (weights or {}).items():
        probe.set_weight(n, w)
    return probe


def group_by_rep(ctx, groups, attr_name):
    m = ctx.attribute_index[attr_name]
    for g in groups:
        if (g.members >> m) & 1:
            return g
    raise AssertionError(attr_name)


def layer_shape(ctx, lay):
    """[(sd, [(filtered extent names, [group ids])])] for readable asserts."""
    return [
        (
            layer.sd,
            [
                (tuple(ctx.object_names(cls.filtered_extent)), list(cls.group_ids))
                for cls in layer.classes
            ],
        )
        for layer in lay.layers
    ]


# --- sub-context -----------------------------------------------------------------

def test_sub_context_drops_unmatched_attributes(table1):
    probe = make_probe(table1, ["Brad", "Angelina", "Cate"])
    sub = sub_context(table1, probe)
    assert list(sub.objects) == ["Brad", "Angelina", "Cate"]
    assert list(sub.attributes) == ["Film1", "Film2", "Film3", "Film4", "Film5"]


def test_sub_context_empty_probe(table1):
    sub = sub_context(table1, ProbeState(table1))
    assert sub.n_objects == 0 and sub.n_attributes == 0


def test_sub_context_full_probe(table1):
    probe = make_probe(table1, table1.objects)
    sub = sub_context(table1, probe)
    assert list(sub.attributes) == [
        m for m in table1.attributes
        if table1.cols[table1.attribute_index[m]]
    ]
    assert sub.rows == table1.rows


def test_sub_context_restricts_incidence(table1):
    probe = make_probe(table1, ["Cate", "Leonardo"])
    sub = sub_context(table1, probe)
    for g, obj in enumerate(sub.objects):
        for j, attr in enumerate(sub.attributes):
            orig = table1.rows[table1.object_index[obj]]
            assert ((sub.rows[g] >> j) & 1) == (
                (orig >> table1.attribute_index[attr]) & 1
            )


# --- semantic distance --------------------------------------------------------------

def test_distance_full_match_is_zero(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    groups = compute_groups(table1)
    assert semantic_distance(probe, group_by_rep(table1, groups, "Film1")) == 0


def test_distance_partial_matches(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    groups = compute_groups(table1)
    assert semantic_distance(probe, group_by_rep(table1, groups, "Film3")) == Fraction(1, 3)
    assert semantic_distance(probe, group_by_rep(table1, groups, "Film4")) == Fraction(2, 3)


def test_distance_with_half_weight(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"], {"Cate": "0.5"})
    groups = compute_groups(table1)
    assert semantic_distance(probe, group_by_rep(table1, groups, "Film1")) == Fraction(1, 6)
    assert semantic_distance(probe, group_by_rep(table1, groups, "Film3")) == Fraction(1, 3)


def test_distance_requires_nonempty_probe(table1):
    groups = compute_groups(table1)
    with pytest.raises(ValueError):
        semantic_distance(ProbeState(table1), groups[0])


# --- visibility -----------------------------------------------------------------------

def test_visible_groups_for_brad(table1):
    probe = make_probe(table1, ["Brad"])
    groups = compute_groups(table1)
    reps = {
        table1.attributes[groups[i].representative]
        for i in visible_groups(table1, probe, groups)
    }
    assert reps == {"Film1", "Film2", "Film3", "Film5"}


def test_weight_zero_confers_no_visibility(table1):
    probe = make_probe(table1, ["Brad", "Cate"], {"Cate": 0})
    groups = compute_groups(table1)
    reps = {
        table1.attributes[groups[i].representative]
        for i in visible_groups(table1, probe, groups)
    }
    assert reps == {"Film1", "Film2", "Film3", "Film5"}


def test_empty_probe_sees_nothing(table1):
    assert visible_groups(table1, ProbeState(table1)) == []


# --- layout ------------------------------------------------------------------------

def test_layout_three_layers(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    lay = layout(table1, probe)
    assert layer_shape(table1, lay) == [
        (Fraction(0), [(("Brad", "Angelina", "Cate"), [0])]),
        (Fraction(1, 3), [(("Brad", "Angelina"), [2, 4])]),
        (Fraction(2, 3), [(("Brad",), [1]), (("Cate",), [3])]),
    ]


def test_layout_single_object_probe(table1):
    probe = make_probe(table1, ["Brad"])
    lay = layout(table1, probe)
    assert layer_shape(table1, lay) == [
        (Fraction(0), [(("Brad",), [0, 1, 2, 4])]),
    ]


def test_layout_empty_probe_is_empty(table1):
    assert layout(table1, ProbeState(table1)).layers == ()


def test_layer_count_bounded_by_positive_objects():
    ctx = parse_cxt(
        "B\nbench\n4\n5\na\nb\nc\nd\nm1\nm2\nm3\nm4\nm5\n"
        "XX...\nX.X..\nX..X.\nX...X\n"
    )
    probe = make_probe(ctx, ["a", "b", "c"])
    lay = layout(ctx, probe)
    assert len(lay.layers) <= 3
    assert lay.layers[0].sd == min(layer.sd for layer in lay.layers)


def test_layout_layer_sds_strictly_increase(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"], {"Cate": "0.5"})
    lay = layout(table1, probe)
    sds = [layer.sd for layer in lay.layers]
    assert sds == sorted(set(sds))


def test_unweighted_reduction_matches_match_counts(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    groups = compute_groups(table1)
    lay = layout(table1, probe, groups)
    n = probe.size
    for layer in lay.layers:
        assert layer.sd.denominator in (1, 3)
        for cls in layer.classes:
            for gid in cls.group_ids:
                match = (groups[gid].extent & probe.positive).bit_count()
                assert layer.sd == 1 - Fraction(match, n)


def test_visible_bound(table1):
    groups = compute_groups(table1)
    for size in range(1, 5):
        for combo_seed in range(5):
            rng = random.Random(combo_seed)
            names = rng.sample(list(table1.objects), size)
            probe = make_probe(table1, names)
            vis = visible_groups(table1, probe, groups)
            assert len(vis) <= len(groups) <= table1.n_attributes


def test_weight_locality(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    before = {g.id: semantic_distance(probe, g) for g in groups}
    probe.set_weight("Cate", "0.25")
    cate = table1.object_index["Cate"]
    for g in groups:
        if not (g.extent >> cate) & 1:
            assert semantic_distance(probe, g) == before[g.id]


def test_monotone_demotion(table1):
    groups = compute_groups(table1)
    cate = table1.object_index["Cate"]
    weights = ["1", "0.75", "0.5", "0.25", "0"]
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    last = None
    for w in weights:
        probe.set_weight("Cate", w)
        sds = {
            g.id: semantic_distance(probe, g)
            for g in groups
            if (g.extent >> cate) & 1
        }
        if last is not None:
            for gid, sd in sds.items():
                assert sd >= last[gid]
        last = sds


def test_class_structure_matches_subcontext_attributes(table1):
    # Distinct filtered extents = nonempty attribute extents of the
    # positive-weight sub-context.
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"], {"Cate": "0.5"})
    groups = compute_groups(table1)
    lay = layout(table1, probe, groups)
    filtered = {
        cls.filtered_extent for layer in lay.layers for cls in layer.classes
    }
    positive = probe.positive
    expected = {
        table1.cols[m] & positive
        for m in range(table1.n_attributes)
        if table1.cols[m] & positive
    }
    assert filtered == expected


# --- reveal -----------------------------------------------------------------------

def test_reveal_film2(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    groups = compute_groups(table1)
    res = reveal(table1, probe, group_by_rep(table1, groups, "Film2").id, groups)
    assert table1.object_names(res.extent) == ["Brad"]
    reps = {table1.attributes[groups[i].representative] for i in res.highlighted}
    assert reps == {"Film1", "Film2", "Film3", "Film5"}
    dim_reps = {table1.attributes[groups[i].representative] for i in res.dimmed}
    assert dim_reps == {"Film4"}


def test_reveal_full_match(table1):
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    groups = compute_groups(table1)
    res = reveal(table1, probe, group_by_rep(table1, groups, "Film1").id, groups)
    assert set(table1.object_names(res.extent)) == {"Brad", "Angelina", "Cate"}
    assert list(res.highlighted) == [group_by_rep(table1, groups, "Film1").id]


def test_reveal_single_object_probe_highlights_everything(table1):
    probe = make_probe(table1, ["Brad"])
    groups = compute_groups(table1)
    vis = visible_groups(table1, probe, groups)
    res = reveal(table1, probe, vis[0], groups)
    assert set(res.highlighted) == set(vis)


def test_reveal_hidden_group_rejected(table1):
    probe = make_probe(table1, ["Brad"])
    groups = compute_groups(table1)
    film6 = group_by_rep(table1, groups, "Film6")
    with pytest.raises(ValueError, match="not visible"):
        reveal(table1, probe, film6.id, groups)


def test_reveal_hovered_group_always_highlighted(table1):
    groups = compute_groups(table1)
    for size in (1, 2, 3, 4):
        rng = random.Random(size)
        probe = make_probe(table1, rng.sample(list(table1.objects), size))
        for gid in visible_groups(table1, probe, groups):
            res = reveal(table1, probe, gid, groups)
            assert gid in res.highlighted


def test_reveal_matches_subcontext_concept_oracle():
    rng = random.Random(99)
    for _ in range(25):
        ctx = random_context(rng, max_objects=6, max_attributes=6)
        if ctx.n_objects == 0:
            continue
        k = rng.randint(1, ctx.n_objects)
        probe = make_probe(ctx, rng.sample(list(ctx.objects), k))
        groups = compute_groups(ctx)
        positive = probe.positive
        for gid in visible_groups(ctx, probe, groups):
            res = reveal(ctx, probe, gid, groups)
            # Highlighted members = intent of the sub-context concept with
            # extent res.extent, computed by direct derivation.
            members = 0
            for i in res.highlighted:
                members |= groups[i].members
            expected = 0
            for m in range(ctx.n_attributes):
                if ctx.cols[m] & positive and res.extent & ctx.cols[m] == res.extent:
                    expected |= 1 << m
            assert members == expected


# --- probe mutations ------------------------------------------------------------------

def test_add_object_defaults_weight_one(table1):
    probe = ProbeState(table1)
    probe.add_object("Brad")
    assert table1.object_names(probe.loaded) == ["Brad"]
    assert probe.weight_hundredths(table1.object_index["Brad"]) == 100


def test_remove_last_object_empties_layout(table1):
    probe = make_probe(table1, ["Brad"])
    probe.remove_object("Brad")
    assert probe.size == 0
    assert layout(table1, probe).layers == ()


def test_clear(table1):
    probe = make_probe(table1, ["Brad", "Cate"])
    probe.clear()
    assert probe.size == 0


def test_unknown_object_rejected(table1):
    probe = ProbeState(table1)
    with pytest.raises(ValueError, match="unknown object"):
        probe.add_object("Nobody")


def test_set_weight_validation(table1):
    probe = make_probe(table1, ["Brad"])
    with pytest.raises(ValueError, match="not loaded"):
        probe.set_weight("Cate", "0.5")
    with pytest.raises(ValueError, match="hundredths"):
        probe.set_weight("Brad", 0.333)
    with pytest.raises(ValueError, match="outside"):
        probe.set_weight("Brad", "1.5")
    probe.set_weight("Brad", "0.05")
    assert probe.weight_hundredths(table1.object_index["Brad"]) == 5


def test_add_group_extent(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Brad"])
    probe.add_group_extent(group_by_rep(table1, groups, "Film4"))
    assert set(table1.object_names(probe.loaded)) == {"Brad", "Cate", "Leonardo"}


def test_add_group_extent_keeps_existing_weights(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Cate"], {"Cate": "0.25"})
    probe.add_group_extent(group_by_rep(table1, groups, "Film4"))
    assert probe.weight_hundredths(table1.object_index["Cate"]) == 25
    assert probe.weight_hundredths(table1.object_index["Leonardo"]) == 100


def test_add_group_extent_idempotent(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Brad", "Angelina", "Cate"])
    before = dict(probe.items())
    probe.add_group_extent(group_by_rep(table1, groups, "Film1"))
    assert dict(probe.items()) == before


def test_add_group_extent_on_empty_probe(table1):
    groups = compute_groups(table1)
    probe = ProbeState(table1)
    probe.add_group_extent(group_by_rep(table1, groups, "Film4"))
    assert set(table1.object_names(probe.loaded)) == {"Cate", "Leonardo"}


# --- layout diffs ----------------------------------------------------------------------

def test_diff_add_cate(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Brad"])
    before = layout(table1, probe, groups)
    probe.add_object("Cate")
    after = layout(table1, probe, groups)
    delta = diff_layout(before, after)
    assert [table1.attributes[groups[i].representative] for i in delta.entering] == ["Film4"]
    assert delta.leaving == ()
    moved = {
        table1.attributes[groups[g].representative]: (old, new)
        for g, old, new in delta.moved
    }
    assert moved == {
        "Film2": (Fraction(0), Fraction(1, 2)),
        "Film3": (Fraction(0), Fraction(1, 2)),
        "Film5": (Fraction(0), Fraction(1, 2)),
    }
    assert [table1.attributes[groups[i].representative] for i in delta.stable] == ["Film1"]


def test_diff_identical_layouts(table1):
    probe = make_probe(table1, ["Brad", "Cate"])
    lay = layout(table1, probe)
    delta = diff_layout(lay, lay)
    assert delta.entering == () and delta.leaving == () and delta.moved == ()
    assert len(delta.stable) == 5


def test_diff_clear_probe(table1):
    probe = make_probe(table1, ["Brad"])
    before = layout(table1, probe)
    probe.clear()
    delta = diff_layout(before, layout(table1, probe))
    assert set(delta.leaving) == {0, 1, 2, 4}
    assert delta.entering == () and delta.moved == () and delta.stable == ()


def test_diff_partition_property(table1):
    groups = compute_groups(table1)
    rng = random.Random(31337)
    probe = ProbeState(table1)
    prev = layout(table1, probe, groups)
    for _ in range(60):
        op = rng.choice(["add", "remove", "weight", "clear", "group"])
        try:
            if op == "add":
                probe.add_object(rng.choice(list(table1.objects)))
            elif op == "remove":
                probe.remove_object(rng.choice(list(table1.objects)))
            elif op == "weight":
                probe.set_weight(
                    rng.choice(list(table1.objects)),
                    rng.choice(["0", "0.25", "0.5", "0.75", "1"]),
                )
            elif op == "clear":
                probe.clear()
            else:
                probe.add_group_extent(rng.choice(groups))
        except ValueError:
            continue
        cur = layout(table1, probe, groups)
        delta = diff_layout(prev, cur)
        old_ids = set(prev.sd_by_group())
        new_ids = set(cur.sd_by_group())
        moved_ids = {g for g, _, _ in delta.moved}
        pieces = [set(delta.entering), set(delta.leaving), moved_ids, set(delta.stable)]
        assert set().union(*pieces) == old_ids | new_ids
        assert sum(len(p) for p in pieces) == len(old_ids | new_ids)
        assert not set(delta.entering) & old_ids
        assert not set(delta.leaving) & new_ids
        prev = cur


# --- serialization ---------------------------------------------------------------------

def test_layout_json_shape(table1):
    groups = compute_groups(table1)
    probe = make_probe(table1, ["Angelina", "Brad", "Cate"])
    payload = layout_to_json(table1, groups, layout(table1, probe, groups))
    assert [layer["sd"] for layer in payload["layers"]] == ["0", "1/3", "2/3"]
    top = payload["layers"][0]["classes"][0]
    assert top["filteredExtent"] == ["Brad", "Angelina", "Cate"]
    assert top["groups"][0]["representative"] == "Film1"
    assert top["groups"][0]["badge"] == 1

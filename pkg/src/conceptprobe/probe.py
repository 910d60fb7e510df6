"""Probe sessions: weighted object bags that extract and layer attribute groups.

A probe holds loaded objects with hundredth-precision weights. Groups whose
extents meet the probe gather into layers by semantic distance; groups in a
layer regroup side by side into classes sharing one filtered extent. All
distance arithmetic is exact (weights are integer hundredths, distances are
Fractions), so layer membership is never subject to float drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .context import FormalContext, iter_bits, mask_of
from .lattice import compute_groups

WEIGHT_SCALE = 100


def _parse_weight(w):
    """Normalize a weight to integer hundredths in [0, 100]."""
    if isinstance(w, bool):
        raise ValueError(f"invalid weight {w!r}")
    if isinstance(w, int):
        value = w * WEIGHT_SCALE
    elif isinstance(w, Fraction):
        value = w * WEIGHT_SCALE
        if value.denominator != 1:
            raise ValueError(f"weight {w} is finer than hundredths")
        value = value.numerator
    elif isinstance(w, float):
        scaled = w * WEIGHT_SCALE
        value = round(scaled)
        if abs(scaled - value) > 1e-6:
            raise ValueError(f"weight {w!r} is finer than hundredths")
    elif isinstance(w, str):
        try:
            parsed = Fraction(w)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"invalid weight {w!r}") from None
        return _parse_weight(parsed)
    else:
        raise ValueError(f"invalid weight {w!r}")
    if not 0 <= value <= WEIGHT_SCALE:
        raise ValueError(f"weight {w!r} outside [0, 1]")
    return value


class ProbeState:
    """Mutable probe owned by one session: loaded objects and their weights.

    Objects are addressed by name at this boundary; weights default to 1.00
    on load. Mutations must be serialized by the owner; all queries below
    take the probe as a read-only snapshot.
    """

    def __init__(self, ctx: FormalContext):
        self.ctx = ctx
        self._weights: dict[int, int] = {}

    def _index(self, name):
        try:
            return self.ctx.object_index[name]
        except KeyError:
            raise ValueError(f"unknown object {name!r}") from None

    @property
    def loaded(self):
        """Mask of loaded objects."""
        return mask_of(self._weights)

    @property
    def positive(self):
        """Mask of loaded objects with weight > 0."""
        return mask_of(g for g, w in self._weights.items() if w > 0)

    @property
    def size(self):
        return len(self._weights)

    def weight_hundredths(self, g):
        return self._weights.get(g, 0)

    def items(self):
        """(object index, weight hundredths) pairs in context order."""
        return sorted(self._weights.items())

    def add_object(self, name):
        self._weights[self._index(name)] = WEIGHT_SCALE

    def remove_object(self, name):
        g = self._index(name)
        if g in self._weights:
            del self._weights[g]

    def clear(self):
        self._weights.clear()

    def set_weight(self, name, w):
        g = self._index(name)
        if g not in self._weights:
            raise ValueError(f"object {name!r} is not loaded")
        self._weights[g] = _parse_weight(w)

    def add_group_extent(self, group):
        """Load a group's whole extent; already-loaded objects keep their weights."""
        for g in iter_bits(group.extent):
            self._weights.setdefault(g, WEIGHT_SCALE)

    def copy(self):
        clone = ProbeState(self.ctx)
        clone._weights = dict(self._weights)
        return clone

    @classmethod
    def restore(cls, ctx, weights_by_name):
        """Rebuild a probe from persisted name -> hundredths weights."""
        probe = cls(ctx)
        for name, hundredths in weights_by_name.items():
            g = probe._index(name)
            if not 0 <= int(hundredths) <= WEIGHT_SCALE:
                raise ValueError(f"weight {hundredths!r} outside [0, 100] hundredths")
            probe._weights[g] = int(hundredths)
        return probe


def sub_context(ctx, probe):
    """Restriction of the context to the probe's objects and their attributes.

    Keeps exactly the attributes whose extent meets the loaded set; an empty
    probe yields the empty context.
    """
    loaded = probe.loaded
    obj_idx = list(iter_bits(loaded))
    attr_idx = [m for m in range(ctx.n_attributes) if ctx.cols[m] & loaded]
    pos_of = {g: i for i, g in enumerate(obj_idx)}
    rows = [0] * len(obj_idx)
    for j, m in enumerate(attr_idx):
        for g in iter_bits(ctx.cols[m] & loaded):
            rows[pos_of[g]] |= 1 << j
    return FormalContext(
        name=f"{ctx.name}:probe",
        objects=[ctx.objects[g] for g in obj_idx],
        attributes=[ctx.attributes[m] for m in attr_idx],
        rows=rows,
    )


def _weighted_match(probe, extent):
    """Sum of weights (hundredths) over probe objects inside the extent."""
    return sum(w for g, w in probe._weights.items() if (extent >> g) & 1)


def semantic_distance(probe, group):
    """Exact distance between probe and group: 1 - weighted match / |loaded|."""
    n = probe.size
    if n == 0:
        raise ValueError("semantic distance is undefined for an empty probe")
    return 1 - Fraction(_weighted_match(probe, group.extent), WEIGHT_SCALE * n)


def visible_groups(ctx, probe, groups=None):
    """Ids of groups with positive weighted match (weight-0 objects confer none)."""
    if groups is None:
        groups = compute_groups(ctx)
    positive = probe.positive
    return [grp.id for grp in groups if grp.extent & positive]


@dataclass(frozen=True)
class ExtentClass:
    """Groups sharing one filtered extent, shown side by side within a layer."""

    filtered_extent: int
    group_ids: tuple[int, ...]


@dataclass(frozen=True)
class Layer:
    sd: Fraction
    classes: tuple[ExtentClass, ...]


@dataclass(frozen=True)
class Layout:
    """Layers of visible groups ordered top-down by increasing distance."""

    layers: tuple[Layer, ...]

    def sd_by_group(self):
        return {
            gid: layer.sd
            for layer in self.layers
            for cls in layer.classes
            for gid in cls.group_ids
        }


def layout(ctx, probe, groups=None):
    """Bucket visible groups into sd layers and filtered-extent classes.

    Ordering: layers by ascending sd; classes by descending filtered-extent
    size, then by member indices; groups within a class by representative.
    """
    if groups is None:
        groups = compute_groups(ctx)
    if probe.size == 0:
        return Layout(layers=())
    positive = probe.positive
    by_sd = {}
    for grp in groups:
        if not grp.extent & positive:
            continue
        sd = semantic_distance(probe, grp)
        by_sd.setdefault(sd, []).append(grp)
    layers = []
    for sd in sorted(by_sd):
        by_extent = {}
        for grp in by_sd[sd]:
            by_extent.setdefault(grp.extent & positive, []).append(grp.id)
        classes = [
            ExtentClass(filtered_extent=fe, group_ids=tuple(sorted(ids)))
            for fe, ids in by_extent.items()
        ]
        classes.sort(
            key=lambda c: (-c.filtered_extent.bit_count(), tuple(iter_bits(c.filtered_extent)))
        )
        layers.append(Layer(sd=sd, classes=tuple(classes)))
    return Layout(layers=tuple(layers))


@dataclass(frozen=True)
class RevealResult:
    """Hover result: the probe-filtered extent plus the highlighted group ids."""

    extent: int
    highlighted: tuple[int, ...]
    dimmed: tuple[int, ...]


def reveal(ctx, probe, group_id, groups=None):
    """Concept revealed by hovering a visible group.

    The result extent is the intersection of the group's extent with the
    positive-weight probe objects; highlighted groups are the visible ones
    whose extents contain it (the revealed concept's intent, as groups).
    """
    if groups is None:
        groups = compute_groups(ctx)
    by_id = {grp.id: grp for grp in groups}
    if group_id not in by_id:
        raise ValueError(f"unknown group id {group_id}")
    positive = probe.positive
    target = by_id[group_id]
    filtered = target.extent & positive
    if not filtered:
        raise ValueError(f"group {group_id} is not visible for this probe")
    highlighted, dimmed = [], []
    for grp in groups:
        if not grp.extent & positive:
            continue
        if filtered & grp.extent == filtered:
            highlighted.append(grp.id)
        else:
            dimmed.append(grp.id)
    return RevealResult(
        extent=filtered, highlighted=tuple(highlighted), dimmed=tuple(dimmed)
    )


@dataclass(frozen=True)
class TransitionDelta:
    """Animation contract between two layouts of one context."""

    entering: tuple[int, ...]
    leaving: tuple[int, ...]
    moved: tuple[tuple[int, Fraction, Fraction], ...]
    stable: tuple[int, ...]


def diff_layout(old, new):
    """Partition old/new visible groups into entering, leaving, moved, stable."""
    old_sd = old.sd_by_group()
    new_sd = new.sd_by_group()
    entering = sorted(set(new_sd) - set(old_sd))
    leaving = sorted(set(old_sd) - set(new_sd))
    moved, stable = [], []
    for gid in sorted(set(old_sd) & set(new_sd)):
        if old_sd[gid] == new_sd[gid]:
            stable.append(gid)
        else:
            moved.append((gid, old_sd[gid], new_sd[gid]))
    return TransitionDelta(
        entering=tuple(entering),
        leaving=tuple(leaving),
        moved=tuple(moved),
        stable=tuple(stable),
    )


# --- complementarity covers ---------------------------------------------------

EXACT_COVER_UNIVERSE = 20
_COVER_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class CoverSearchResult:
    covers: tuple[tuple[int, ...], ...]
    truncated: bool


def complementary_cover(ctx, probe, max_size, max_results=100, groups=None):
    """Minimal sets of visible groups whose filtered extents cover the probe.

    Exact and complete (then truncated to max_results) while the positive
    probe has at most EXACT_COVER_UNIVERSE objects; beyond that a
    greedy-seeded branch-and-bound explores under a node budget and reports
    truncation when the budget ran out.
    """
    if probe.size == 0:
        raise ValueError("cover search is undefined for an empty probe")
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if groups is None:
        groups = compute_groups(ctx)
    universe = probe.positive
    sets = [
        (grp.id, grp.extent & universe) for grp in groups if grp.extent & universe
    ]
    reachable = 0
    for _, fe in sets:
        reachable |= fe
    if universe == 0 or reachable != universe:
        return CoverSearchResult(covers=(), truncated=False)

    exact = universe.bit_count() <= EXACT_COVER_UNIVERSE
    budget = None if exact else _COVER_NODE_BUDGET
    found, exhausted = _enumerate_covers(universe, sets, max_size, budget)
    if not exact:
        greedy = _greedy_cover(universe, sets, max_size)
        if greedy is not None:
            found.add(greedy)

    minimal = []
    for cover in found:
        if _is_minimal(cover, dict(sets), universe):
            minimal.append(tuple(sorted(cover)))
    minimal.sort(key=lambda ids: (len(ids), ids))
    truncated = len(minimal) > max_results or exhausted
    return CoverSearchResult(covers=tuple(minimal[:max_results]), truncated=truncated)


def _enumerate_covers(universe, sets, max_size, budget):
    """All covers of size <= max_size (complete when budget is None).

    Branches on the lowest uncovered object; branch k uses candidate k and
    bans candidates 0..k-1 from its subtree, so each cover family is visited
    exactly once.
    """
    by_elem = {}
    for gid, fe in sets:
        for g in iter_bits(fe):
            by_elem.setdefault(g, []).append((gid, fe))
    found = set()
    nodes = 0
    exhausted = False

    def walk(covered, chosen, banned):
        nonlocal nodes, exhausted
        if budget is not None:
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
        if covered == universe:
            found.add(frozenset(chosen))
            return
        if len(chosen) >= max_size:
            return
        e = ((universe & ~covered) & -(universe & ~covered)).bit_length() - 1
        candidates = [c for c in by_elem[e] if c[0] not in banned]
        newly_banned = set(banned)
        for gid, fe in candidates:
            walk(covered | fe, chosen + [gid], frozenset(newly_banned))
            newly_banned.add(gid)

    walk(0, [], frozenset())
    return found, exhausted


def _greedy_cover(universe, sets, max_size):
    """Largest-gain greedy cover, pruned to a minimal one; None if it fails."""
    covered = 0
    chosen = []
    pool = dict(sets)
    while covered != universe and len(chosen) < max_size:
        best = max(
            pool.items(),
            key=lambda kv: ((kv[1] & ~covered).bit_count(), -kv[0]),
            default=None,
        )
        if best is None or not best[1] & ~covered:
            return None
        chosen.append(best[0])
        covered |= best[1]
        del pool[best[0]]
    if covered != universe:
        return None
    sets_by_id = dict(sets)
    pruned = list(chosen)
    for gid in list(chosen):
        rest = 0
        for other in pruned:
            if other != gid:
                rest |= sets_by_id[other]
        if rest == universe:
            pruned.remove(gid)
    return frozenset(pruned)


def _is_minimal(cover, sets_by_id, universe):
    for gid in cover:
        rest = 0
        for other in cover:
            if other != gid:
                rest |= sets_by_id[other]
        if rest == universe:
            return False
    return True


# --- JSON serialization --------------------------------------------------------

def group_to_json(ctx, group):
    return {
        "id": group.id,
        "representative": ctx.attributes[group.representative],
        "badge": group.badge,
        "members": ctx.attribute_names(group.members),
        "extent": ctx.object_names(group.extent),
    }


def layout_to_json(ctx, groups, lay):
    by_id = {grp.id: grp for grp in groups}
    layers = []
    for layer in lay.layers:
        classes = []
        for cls in layer.classes:
            classes.append(
                {
                    "filteredExtent": ctx.object_names(cls.filtered_extent),
                    "groups": [group_to_json(ctx, by_id[g]) for g in cls.group_ids],
                }
            )
        layers.append({"sd": str(layer.sd), "classes": classes})
    return {"layers": layers}


def reveal_to_json(ctx, result):
    return {
        "extent": ctx.object_names(result.extent),
        "highlighted": list(result.highlighted),
    }


def delta_to_json(delta):
    return {
        "entering": list(delta.entering),
        "leaving": list(delta.leaving),
        "moved": [
            {"id": gid, "from": str(old), "to": str(new)}
            for gid, old, new in delta.moved
        ],
        "stable": list(delta.stable),
    }


def probe_to_json(probe):
    ctx = probe.ctx
    return {
        "objects": [
            {"name": ctx.objects[g], "weight": f"{w // 100}.{w % 100:02d}"}
            for g, w in probe.items()
        ]
    }


def cover_result_to_json(result):
    return {
        "covers": [list(ids) for ids in result.covers],
        "truncated": result.truncated,
    }

"""Concept enumeration, Hasse covers, attribute groups, iceberg filtering, AOC posets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .context import FormalContext, derive_attributes, derive_objects
from .kernels import enumerate_closed_extents

DEFAULT_CONCEPT_LIMIT = 1_000_000


class LatticeOverflowError(RuntimeError):
    """Concept enumeration hit the configured ceiling."""

    def __init__(self, limit):
        super().__init__(f"concept count exceeds the limit of {limit}")
        self.limit = limit


@dataclass(frozen=True)
class Concept:
    """A closed (extent, intent) pair; id is the dense index in its lattice
    (-1 for concepts computed standalone)."""

    extent: int
    intent: int
    id: int = -1


def enumerate_concepts(ctx, limit=DEFAULT_CONCEPT_LIMIT):
    """Every concept of the context exactly once, ids in lectic extent order."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    pairs = enumerate_closed_extents(
        ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, limit
    )
    if pairs is None:
        raise LatticeOverflowError(limit)
    return [Concept(extent=e, intent=i, id=n) for n, (e, i) in enumerate(pairs)]


def _covers_from_extents(ids, extent_of):
    """Transitive-reduction cover lists for a family of distinct extents.

    Returns (upper, lower): dicts id -> sorted tuple of cover ids.
    """
    by_size = sorted(ids, key=lambda i: (extent_of[i].bit_count(), i))
    upper = {i: [] for i in ids}
    lower = {i: [] for i in ids}
    for pos, c in enumerate(by_size):
        ce = extent_of[c]
        covers = []
        for d in by_size[pos + 1:]:
            de = extent_of[d]
            if ce & de == ce and ce != de:
                if not any(extent_of[e] & de == extent_of[e] for e in covers):
                    covers.append(d)
        upper[c] = sorted(covers)
        for d in covers:
            lower[d].append(c)
    return (
        {i: tuple(v) for i, v in upper.items()},
        {i: tuple(sorted(v)) for i, v in lower.items()},
    )


@dataclass(frozen=True)
class ConceptLattice:
    """All concepts of a context plus the cover (Hasse) relation."""

    ctx: FormalContext
    concepts: tuple[Concept, ...]
    upper_covers: tuple[tuple[int, ...], ...]
    lower_covers: tuple[tuple[int, ...], ...]
    top_id: int
    bottom_id: int

    def leq(self, i, j):
        """Order test: concept i below-or-equal concept j (extent inclusion)."""
        ei = self.concepts[i].extent
        return ei & self.concepts[j].extent == ei


def build_lattice(ctx, concepts):
    """Hasse structure over a complete concept set; errors on duplicate extents."""
    extents = [c.extent for c in concepts]
    if len(set(extents)) != len(extents):
        raise ValueError("duplicate extents in concept list")
    ids = list(range(len(concepts)))
    extent_of = {c.id: c.extent for c in concepts}
    if sorted(extent_of) != ids:
        concepts = [Concept(c.extent, c.intent, i) for i, c in enumerate(concepts)]
        extent_of = {c.id: c.extent for c in concepts}
    upper, lower = _covers_from_extents(ids, extent_of)
    top_id = bottom_id = -1
    for c in concepts:
        if c.extent == ctx.all_objects:
            top_id = c.id
        if c.intent == ctx.all_attributes:
            bottom_id = c.id
    return ConceptLattice(
        ctx=ctx,
        concepts=tuple(concepts),
        upper_covers=tuple(upper[i] for i in ids),
        lower_covers=tuple(lower[i] for i in ids),
        top_id=top_id,
        bottom_id=bottom_id,
    )


def support(ctx, attribute_mask):
    """Fraction of objects owning every attribute in the mask; exact rational."""
    if ctx.n_objects == 0:
        raise ValueError("support is undefined on a context without objects")
    extent = derive_attributes(ctx, attribute_mask)
    return Fraction(extent.bit_count(), ctx.n_objects)


def iceberg_filter(lattice, ctx, min_support):
    """Ids of concepts whose intent support reaches the threshold."""
    threshold = Fraction(min_support)
    if not 0 <= threshold <= 1:
        raise ValueError("min_support must lie in [0, 1]")
    return [c.id for c in lattice.concepts if support(ctx, c.intent) >= threshold]


@dataclass(frozen=True)
class AttributeGroup:
    """Maximal set of attributes sharing one extent; the probe's visual unit."""

    id: int
    members: int        # attribute mask
    extent: int         # shared object mask
    representative: int  # lowest member attribute index
    badge: int          # member count


def compute_groups(ctx):
    """Partition attributes by extent equality, ids ordered by representative."""
    by_extent = {}
    for m in range(ctx.n_attributes):
        by_extent.setdefault(ctx.cols[m], []).append(m)
    groups = []
    for members in sorted(by_extent.values(), key=lambda ms: ms[0]):
        mask = 0
        for m in members:
            mask |= 1 << m
        groups.append(
            AttributeGroup(
                id=len(groups),
                members=mask,
                extent=ctx.cols[members[0]],
                representative=members[0],
                badge=len(members),
            )
        )
    return groups


def _attr_index(ctx, m):
    if isinstance(m, str):
        try:
            return ctx.attribute_index[m]
        except KeyError:
            raise ValueError(f"unknown attribute {m!r}") from None
    if not 0 <= m < ctx.n_attributes:
        raise ValueError(f"attribute index {m} out of range")
    return m


def _obj_index(ctx, g):
    if isinstance(g, str):
        try:
            return ctx.object_index[g]
        except KeyError:
            raise ValueError(f"unknown object {g!r}") from None
    if not 0 <= g < ctx.n_objects:
        raise ValueError(f"object index {g} out of range")
    return g


def attribute_concept(ctx, m):
    """The most specialized concept containing attribute m: the pair (m', m'')."""
    m = _attr_index(ctx, m)
    extent = ctx.cols[m]
    return Concept(extent=extent, intent=derive_objects(ctx, extent))


def object_concept(ctx, g):
    """The most general concept containing object g: the pair (g'', g')."""
    g = _obj_index(ctx, g)
    intent = ctx.rows[g]
    return Concept(extent=derive_attributes(ctx, intent), intent=intent)


@dataclass(frozen=True)
class AocPoset:
    """Attribute/object Galois sub-hierarchy with reduced labels.

    Nodes are lattice concept ids; every attribute appears in exactly one
    reduced intent and every object in exactly one reduced extent.
    """

    ctx: FormalContext
    lattice: ConceptLattice
    node_ids: tuple[int, ...]
    reduced_intents: dict[int, int] = field(compare=False)
    reduced_extents: dict[int, int] = field(compare=False)
    upper_covers: dict[int, tuple[int, ...]] = field(compare=False)
    lower_covers: dict[int, tuple[int, ...]] = field(compare=False)


def build_aoc(ctx, lattice, include_object_concepts=True):
    """Reduce a lattice to its attribute-concepts (and, by default, object-concepts).

    Attributes with empty extents label the bottom concept. Dropping
    object-only concepts (the stricter attribute-only reading) is available
    via the flag.
    """
    id_by_extent = {c.extent: c.id for c in lattice.concepts}
    reduced_intents = {}
    reduced_extents = {}
    for m in range(ctx.n_attributes):
        cid = id_by_extent[ctx.cols[m]]
        reduced_intents[cid] = reduced_intents.get(cid, 0) | (1 << m)
    for g in range(ctx.n_objects):
        cid = id_by_extent[derive_attributes(ctx, ctx.rows[g])]
        reduced_extents[cid] = reduced_extents.get(cid, 0) | (1 << g)

    node_ids = set(reduced_intents)
    if include_object_concepts:
        node_ids |= set(reduced_extents)
    else:
        reduced_extents = {i: v for i, v in reduced_extents.items() if i in node_ids}
    node_ids = tuple(sorted(node_ids))

    extent_of = {i: lattice.concepts[i].extent for i in node_ids}
    upper, lower = _covers_from_extents(list(node_ids), extent_of)
    return AocPoset(
        ctx=ctx,
        lattice=lattice,
        node_ids=node_ids,
        reduced_intents={i: reduced_intents.get(i, 0) for i in node_ids},
        reduced_extents={i: reduced_extents.get(i, 0) for i in node_ids},
        upper_covers=upper,
        lower_covers=lower,
    )


# --- exports -----------------------------------------------------------------

def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _label(objs, attrs):
    return _dot_escape("{%s}\\n{%s}" % (", ".join(objs), ", ".join(attrs)))


def export_dot(structure, labeling="full"):
    """DOT digraph of a ConceptLattice or AocPoset (deterministic output).

    `full` labels nodes with complete extents/intents; `reduced` with the
    non-redundant labels of the sub-hierarchy.
    """
    if labeling not in ("full", "reduced"):
        raise ValueError(f"unknown labeling {labeling!r}")
    ctx = structure.ctx
    if isinstance(structure, AocPoset):
        ids = list(structure.node_ids)
        concepts = structure.lattice.concepts
        upper = structure.upper_covers
        red_int = structure.reduced_intents
        red_ext = structure.reduced_extents
    else:
        ids = [c.id for c in structure.concepts]
        concepts = structure.concepts
        upper = {i: structure.upper_covers[i] for i in ids}
        if labeling == "reduced":
            aoc = build_aoc(ctx, structure)
            red_int = {i: aoc.reduced_intents.get(i, 0) for i in ids}
            red_ext = {i: aoc.reduced_extents.get(i, 0) for i in ids}

    lines = ["digraph concepts {", "  rankdir=BT;", '  node [shape=box, fontsize=10];']
    for i in ids:
        c = concepts[i]
        if labeling == "full":
            label = _label(ctx.object_names(c.extent), ctx.attribute_names(c.intent))
        else:
            label = _label(
                ctx.object_names(red_ext.get(i, 0)),
                ctx.attribute_names(red_int.get(i, 0)),
            )
        lines.append(f'  c{i} [label="{label}"];')
    for i in ids:
        for j in upper[i]:
            lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lattice, iceberg_ids=None):
    """JSON-ready dict for a lattice; optionally restricted to an iceberg subset."""
    ctx = lattice.ctx
    keep = set(iceberg_ids) if iceberg_ids is not None else None
    concepts = []
    for c in lattice.concepts:
        if keep is not None and c.id not in keep:
            continue
        concepts.append(
            {
                "id": c.id,
                "extent": ctx.object_names(c.extent),
                "intent": ctx.attribute_names(c.intent),
            }
        )
    covers = []
    for i, ups in enumerate(lattice.upper_covers):
        if keep is not None and i not in keep:
            continue
        for j in ups:
            if keep is None or j in keep:
                covers.append([i, j])
    covers.sort()
    return {
        "concepts": concepts,
        "covers": covers,
        "topId": lattice.top_id,
        "bottomId": lattice.bottom_id,
    }


def aoc_to_json(aoc):
    ctx = aoc.ctx
    nodes = []
    for i in aoc.node_ids:
        c = aoc.lattice.concepts[i]
        nodes.append(
            {
                "id": i,
                "extent": ctx.object_names(c.extent),
                "intent": ctx.attribute_names(c.intent),
                "reducedExtent": ctx.object_names(aoc.reduced_extents.get(i, 0)),
                "reducedIntent": ctx.attribute_names(aoc.reduced_intents.get(i, 0)),
            }
        )
    covers = sorted([i, j] for i in aoc.node_ids for j in aoc.upper_covers[i])
    return {"nodes": nodes, "covers": covers}

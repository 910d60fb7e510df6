"""Independent brute-force oracles used to check the fast paths.

Everything here works on name sets and itertools enumeration, deliberately
avoiding the package's bitset kernels and search strategies.
"""

from itertools import combinations

from conceptprobe.context import iter_bits


def brute_concepts(ctx):
    """All concepts as (frozenset of object names, frozenset of attribute names),
    via closures of every object subset."""
    objs = list(ctx.objects)
    attrs = list(ctx.attributes)
    row_sets = {
        o: {attrs[m] for m in iter_bits(ctx.rows[g])} for g, o in enumerate(objs)
    }

    def derive_obj(oset):
        result = set(attrs)
        for o in oset:
            result &= row_sets[o]
        return result

    def derive_attr(aset):
        return {o for o in objs if aset <= row_sets[o]}

    seen = {}
    for r in range(len(objs) + 1):
        for combo in combinations(objs, r):
            intent = derive_obj(set(combo))
            extent = frozenset(derive_attr(intent))
            seen[extent] = frozenset(derive_obj(extent))
    return {(e, i) for e, i in seen.items()}


def concepts_as_name_pairs(ctx, concepts):
    return {
        (
            frozenset(ctx.object_names(c.extent)),
            frozenset(ctx.attribute_names(c.intent)),
        )
        for c in concepts
    }


def brute_minimal_covers(universe_mask, sets_by_id, max_size):
    """All minimal covers as sorted id tuples, by exhaustive subset search."""
    ids = sorted(sets_by_id)
    covers = []
    for r in range(1, max_size + 1):
        for combo in combinations(ids, r):
            union = 0
            for gid in combo:
                union |= sets_by_id[gid]
            if union != universe_mask:
                continue
            minimal = True
            for gid in combo:
                rest = 0
                for other in combo:
                    if other != gid:
                        rest |= sets_by_id[other]
                if rest == universe_mask:
                    minimal = False
                    break
            if minimal:
                covers.append(tuple(combo))
    covers.sort(key=lambda ids_: (len(ids_), ids_))
    return covers


def transitive_closure_reachable(n, upper_covers):
    """Reachability sets (including self) by walking cover edges upward."""
    reach = [set() for _ in range(n)]

    def visit(i):
        if reach[i]:
            return reach[i]
        acc = {i}
        for j in upper_covers[i]:
            acc |= visit(j)
        reach[i] = acc
        return acc

    for i in range(n):
        visit(i)
    return reach


def random_context(rng, max_objects=10, max_attributes=10, density=0.45):
    """Small random context from a random.Random instance."""
    from conceptprobe import FormalContext

    n_obj = rng.randint(0, max_objects)
    n_attr = rng.randint(0, max_attributes)
    rows = []
    for _ in range(n_obj):
        row = 0
        for m in range(n_attr):
            if rng.random() < density:
                row |= 1 << m
        rows.append(row)
    return FormalContext(
        name="random",
        objects=[f"g{i}" for i in range(n_obj)],
        attributes=[f"m{j}" for j in range(n_attr)],
        rows=rows,
    )

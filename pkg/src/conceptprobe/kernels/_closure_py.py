"""Pure-Python closure enumeration over int bitsets.

This is the fallback for the compiled kernel. Both implementations share one
contract: NextClosure over object sets, yielding every (extent, intent) pair
exactly once, in lectic order of extents (bit i of an extent mask is object
i; the set whose smallest differing object is present comes later).
"""

IMPL = "python"


def enumerate_closed_extents(rows, cols, n_objects, n_attributes, limit):
    """All closed (extent, intent) pairs of a context, lectic order of extents.

    rows[g] is the attribute mask of object g, cols[m] the object mask of
    attribute m. Returns a list of (extent_mask, intent_mask) pairs, or None
    if more than `limit` concepts exist.
    """
    full_m = (1 << n_attributes) - 1 if n_attributes else 0
    full_g = (1 << n_objects) - 1 if n_objects else 0

    # First closure: extent of the empty object set = objects owning all of M.
    intent = full_m
    extent = 0
    for g in range(n_objects):
        if rows[g] & intent == intent:
            extent |= 1 << g
    result = [(extent, intent)]
    if len(result) > limit:
        return None

    current = extent
    while current != full_g:
        # Members of `current` ascending, with prefix intents so the intent
        # of {g in current : g < i} is available in O(1) as i descends.
        members = []
        prefix = [full_m]
        m = current
        while m:
            lsb = m & -m
            g = lsb.bit_length() - 1
            members.append(g)
            prefix.append(prefix[-1] & rows[g])
            m ^= lsb

        k = len(members)
        advanced = False
        for i in range(n_objects - 1, -1, -1):
            if k and members[k - 1] == i:
                k -= 1
                continue
            low_mask = (1 << i) - 1
            base_low = current & low_mask
            cand_intent = prefix[k] & rows[i]
            # Extent of the candidate intent via column intersections.
            cand_extent = full_g
            mm = cand_intent
            while mm:
                lsb = mm & -mm
                cand_extent &= cols[lsb.bit_length() - 1]
                mm ^= lsb
            # Canonical iff no object below i entered the closure.
            if cand_extent & low_mask == base_low:
                result.append((cand_extent, cand_intent))
                if len(result) > limit:
                    return None
                current = cand_extent
                advanced = True
                break
        if not advanced:  # pragma: no cover - full_g is always closed
            break
    return result

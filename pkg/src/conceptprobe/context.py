"""Formal contexts: named objects/attributes with a dual-indexed incidence relation.

Sets of objects or attributes are plain ints used as dense bit-vectors
(bit i of an object mask = object index i). Both incidence directions are
stored (per-object rows, per-attribute columns) so either derivation is a
single run of intersections.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property


class ContextError(ValueError):
    """Malformed context data: parse errors, bad names, bad dimensions."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def mask_of(indices):
    """Bit mask from an iterable of indices."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def iter_bits(mask):
    """Indices of set bits, ascending."""
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


@dataclass(frozen=True)
class FormalContext:
    """The triple of objects, attributes and their binary incidence.

    `rows[g]` is the attribute mask of object g; `cols[m]` (derived) is the
    object mask of attribute m. Immutable after construction and safe to
    share across threads.
    """

    name: str
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "rows", tuple(self.rows))
        _check_names(self.objects, "object")
        _check_names(self.attributes, "attribute")
        if len(self.rows) != len(self.objects):
            raise ContextError(
                f"expected {len(self.objects)} incidence rows, got {len(self.rows)}"
            )
        n_attr = len(self.attributes)
        cols = [0] * n_attr
        for g, row in enumerate(self.rows):
            if row < 0 or row >> n_attr:
                raise ContextError(
                    f"row {g} ({self.objects[g]!r}) has bits outside the "
                    f"{n_attr} declared attributes"
                )
            for m in iter_bits(row):
                cols[m] |= 1 << g
        object.__setattr__(self, "cols", tuple(cols))

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_attributes(self):
        return len(self.attributes)

    @property
    def all_objects(self):
        return (1 << self.n_objects) - 1

    @property
    def all_attributes(self):
        return (1 << self.n_attributes) - 1

    @cached_property
    def object_index(self):
        return {name: i for i, name in enumerate(self.objects)}

    @cached_property
    def attribute_index(self):
        return {name: i for i, name in enumerate(self.attributes)}

    def object_mask(self, names):
        try:
            return mask_of(self.object_index[n] for n in names)
        except KeyError as exc:
            raise ContextError(f"unknown object {exc.args[0]!r}") from None

    def attribute_mask(self, names):
        try:
            return mask_of(self.attribute_index[n] for n in names)
        except KeyError as exc:
            raise ContextError(f"unknown attribute {exc.args[0]!r}") from None

    def object_names(self, mask):
        return [self.objects[i] for i in iter_bits(mask)]

    def attribute_names(self, mask):
        return [self.attributes[i] for i in iter_bits(mask)]


def _check_names(names, kind):
    seen = set()
    for n in names:
        if not n or n != n.strip():
            raise ContextError(
                f"invalid {kind} name {n!r}: must be non-empty without "
                "leading/trailing whitespace"
            )
        if n in seen:
            raise ContextError(f"duplicate {kind} name {n!r}")
        seen.add(n)


# --- derivation and closure operators -------------------------------------

def derive_objects(ctx, object_mask):
    """Attributes shared by every object in the mask; all of M for the empty set."""
    result = ctx.all_attributes
    for g in iter_bits(object_mask):
        result &= ctx.rows[g]
    return result


def derive_attributes(ctx, attribute_mask):
    """Objects owning every attribute in the mask; all of G for the empty set."""
    result = ctx.all_objects
    for m in iter_bits(attribute_mask):
        result &= ctx.cols[m]
    return result


def closure_objects(ctx, object_mask):
    return derive_attributes(ctx, derive_objects(ctx, object_mask))


def closure_attributes(ctx, attribute_mask):
    return derive_objects(ctx, derive_attributes(ctx, attribute_mask))


def transpose(ctx):
    """Swap the roles of objects and attributes; an involution."""
    return FormalContext(
        name=ctx.name,
        objects=ctx.attributes,
        attributes=ctx.objects,
        rows=ctx.cols,
    )


# --- Burmeister .cxt format ------------------------------------------------

def parse_cxt(data):
    """Parse Burmeister interchange text into a context.

    Grammar: line 1 is `B`, line 2 the context name (may be empty), lines 3-4
    the object and attribute counts, then object names, attribute names, and
    one `X`/`.` row per object. Accepts `\\r\\n` and a missing final newline.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def take(lineno, what):
        if lineno > len(lines):
            raise ContextError(f"unexpected end of input, expected {what}", line=lineno)
        return lines[lineno - 1]

    if take(1, "format marker") != "B":
        raise ContextError(f"expected format marker 'B', got {lines[0]!r}", line=1)
    name = take(2, "context name")
    try:
        n_obj = int(take(3, "object count"))
        if n_obj < 0:
            raise ValueError
    except ValueError:
        raise ContextError(f"invalid object count {take(3, 'object count')!r}", line=3) from None
    try:
        n_attr = int(take(4, "attribute count"))
        if n_attr < 0:
            raise ValueError
    except ValueError:
        raise ContextError(f"invalid attribute count {take(4, 'attribute count')!r}", line=4) from None

    objects, attributes, rows = [], [], []
    lineno = 4
    seen = set()
    for _ in range(n_obj):
        lineno += 1
        nm = take(lineno, "object name")
        if not nm or nm != nm.strip():
            raise ContextError(f"invalid object name {nm!r}", line=lineno)
        if nm in seen:
            raise ContextError(f"duplicate object name {nm!r}", line=lineno)
        seen.add(nm)
        objects.append(nm)
    seen = set()
    for _ in range(n_attr):
        lineno += 1
        nm = take(lineno, "attribute name")
        if not nm or nm != nm.strip():
            raise ContextError(f"invalid attribute name {nm!r}", line=lineno)
        if nm in seen:
            raise ContextError(f"duplicate attribute name {nm!r}", line=lineno)
        seen.add(nm)
        attributes.append(nm)
    for g in range(n_obj):
        lineno += 1
        row_text = take(lineno, "incidence row")
        if len(row_text) != n_attr:
            raise ContextError(
                f"row for {objects[g]!r} has {len(row_text)} cells, expected {n_attr}",
                line=lineno,
            )
        row = 0
        for m, ch in enumerate(row_text):
            if ch == "X":
                row |= 1 << m
            elif ch != ".":
                raise ContextError(
                    f"illegal cell character {ch!r} at column {m + 1}", line=lineno
                )
        rows.append(row)
    for extra in range(lineno + 1, len(lines) + 1):
        if lines[extra - 1] != "":
            raise ContextError(f"unexpected trailing content {lines[extra - 1]!r}", line=extra)
    return FormalContext(name=name, objects=objects, attributes=attributes, rows=rows)


def write_cxt(ctx):
    """Canonical Burmeister text for a context (ends with a newline)."""
    out = ["B", ctx.name, str(ctx.n_objects), str(ctx.n_attributes)]
    out.extend(ctx.objects)
    out.extend(ctx.attributes)
    for row in ctx.rows:
        out.append(
            "".join("X" if (row >> m) & 1 else "." for m in range(ctx.n_attributes))
        )
    return "\n".join(out) + "\n"


# --- CSV format --------------------------------------------------------------

_CSV_TRUE = {"1", "X", "x"}
_CSV_FALSE = {"0", ""}


def parse_csv(data):
    """Parse a CSV context: header of attribute names, leading object column.

    The corner cell holds the context name. Cells are 0/1/X/blank.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    table = [row for row in reader]
    while table and not any(cell.strip() for cell in table[-1]):
        table.pop()
    if not table:
        raise ContextError("empty CSV input", line=1)
    header = table[0]
    name = header[0].strip()
    attributes = [c.strip() for c in header[1:]]
    n_attr = len(attributes)
    objects, rows = [], []
    for r, record in enumerate(table[1:], start=2):
        if len(record) != n_attr + 1:
            raise ContextError(
                f"row has {len(record)} columns, expected {n_attr + 1}", line=r
            )
        objects.append(record[0].strip())
        row = 0
        for m, cell in enumerate(record[1:]):
            token = cell.strip()
            if token in _CSV_TRUE:
                row |= 1 << m
            elif token not in _CSV_FALSE:
                raise ContextError(
                    f"unknown cell token {cell!r} at row {r}, column {m + 2}", line=r
                )
        rows.append(row)
    try:
        return FormalContext(name=name, objects=objects, attributes=attributes, rows=rows)
    except ContextError as exc:
        raise ContextError(str(exc)) from None


def write_csv(ctx):
    """CSV text for a context; inverse of parse_csv."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([ctx.name, *ctx.attributes])
    for g, obj in enumerate(ctx.objects):
        row = ctx.rows[g]
        writer.writerow([obj, *("1" if (row >> m) & 1 else "0" for m in range(ctx.n_attributes))])
    return buf.getvalue()


# --- synthetic benchmark ------------------------------------------------------

_MASK64 = (1 << 64) - 1


class _SplitMix64:
    """Tiny deterministic PRNG, stable across platforms and Python versions."""

    def __init__(self, seed):
        self._state = seed & _MASK64

    def next(self):
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        return self.next() % n


_CAST_RETRY_BUDGET = 10_000


def generate_benchmark(n_films, n_people, trilogy=True, seed=0):
    """Synthetic film/person context: distinct 3-person casts, optional trilogy.

    Every non-trilogy film gets 2 actors + 1 director sampled from the person
    pool (people recur across films); when `trilogy` is set the first three
    films share one identical 5-person cast. Deterministic for a given seed.
    """
    if n_people < 5:
        raise ContextError("need at least 5 people in the pool")
    if trilogy and n_films < 4:
        raise ContextError("trilogy benchmark needs at least 4 films")
    if n_films < 0:
        raise ContextError("film count must be non-negative")
    n_regular = n_films - 3 if trilogy else n_films
    n_triples = (n_people * (n_people - 1) * (n_people - 2)) // 6
    if n_regular > n_triples:
        raise ContextError(
            f"cannot build {n_regular} pairwise-distinct 3-person casts "
            f"from a pool of {n_people} people"
        )

    rng = _SplitMix64(seed)
    width_p = len(str(n_people))
    width_f = len(str(max(n_films, 1)))
    people = [f"Person{str(i + 1).zfill(width_p)}" for i in range(n_people)]
    films = [f"Film{str(i + 1).zfill(width_f)}" for i in range(n_films)]

    def sample(k):
        picked = []
        while len(picked) < k:
            p = rng.below(n_people)
            if p not in picked:
                picked.append(p)
        return picked

    casts = []
    if trilogy:
        shared = mask_of(sample(5))
        casts.extend([shared, shared, shared])
    seen = set()
    for _ in range(n_regular):
        for _attempt in range(_CAST_RETRY_BUDGET):
            cast = mask_of(sample(3))
            if cast not in seen:
                seen.add(cast)
                casts.append(cast)
                break
        else:
            raise ContextError(
                f"gave up finding a fresh cast after {_CAST_RETRY_BUDGET} attempts"
            )

    rows = [0] * n_people
    for m, cast in enumerate(casts):
        for g in iter_bits(cast):
            rows[g] |= 1 << m
    return FormalContext(
        name=f"benchmark-{n_films}x{n_people}",
        objects=people,
        attributes=films,
        rows=rows,
    )

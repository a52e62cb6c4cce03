"""Tables with incomplete information: standard, vague, and disjunctive models.

A vague tuple stores a non-empty finite set of candidate values per cell; a
disjunctive tuple stores a finite set of alternative standard rows.  Every
valuation (one value per cell, or one disjunct per tuple) yields a standard
row; a valuation of a whole table yields a standard table with duplicates
removed, called a possible world.

All types here are immutable and hashable.  Values are plain strings with a
total order (lexicographic), used only to make iteration and serialization
deterministic.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import ModelError, SchemaError, WorldLimitExceeded


class Model(str, Enum):
    STANDARD = "standard"
    VAGUE = "vague"
    DISJUNCTIVE = "disjunctive"


Row = tuple  # raw value row: tuple[str, ...]


@dataclass(frozen=True)
class Schema:
    """Ordered list of uniquely named attributes."""

    attributes: tuple

    def __init__(self, attributes: Iterable[str]):
        attrs = tuple(attributes)
        for a in attrs:
            if not isinstance(a, str) or not a or a != a.strip():
                raise SchemaError(f"attribute name {a!r} must be a non-empty trimmed string")
            if any(c in _STRUCTURAL for c in a) or "\n" in a:
                raise SchemaError(f"attribute name {a!r}: characters ,|{{}}() are reserved")
        if len(set(attrs)) != len(attrs):
            raise SchemaError(f"duplicate attribute names in {attrs}")
        object.__setattr__(self, "attributes", attrs)

    def __len__(self) -> int:
        return len(self.attributes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.attributes)

    def __contains__(self, name: str) -> bool:
        return name in self.attributes

    def positions(self, attrs: Iterable[str]) -> tuple:
        """Positions of `attrs`, in schema order; rejects unknown names."""
        wanted = set(attrs)
        unknown = wanted - set(self.attributes)
        if unknown:
            raise SchemaError(f"unknown attributes {sorted(unknown)} for schema {self.attributes}")
        return tuple(i for i, a in enumerate(self.attributes) if a in wanted)

    def restrict(self, attrs: Iterable[str]) -> "Schema":
        return Schema(self.attributes[i] for i in self.positions(attrs))


_CELL_OPEN, _CELL_SEP, _CELL_CLOSE = "{", "|", "}"
_STRUCTURAL = set(",|{}()")


def check_value(v: str) -> str:
    """Values must be plain non-empty strings free of structural characters.

    Returned interned, since the same value typically recurs across many
    cells, bindings, and map keys.
    """
    if not isinstance(v, str) or not v or v != v.strip():
        raise SchemaError(f"bad value {v!r}: must be a non-empty trimmed string")
    if any(c in _STRUCTURAL for c in v) or "\n" in v:
        raise SchemaError(f"bad value {v!r}: characters ,|{{}}() are reserved")
    return sys.intern(v)


def _as_cell(value) -> frozenset:
    if isinstance(value, str):
        return frozenset((check_value(value),))
    return frozenset(check_value(v) for v in value)


def render_cell(cell: frozenset) -> str:
    """Canonical text for a set-valued cell; singletons render bare."""
    vals = sorted(cell)
    if len(vals) == 1:
        return vals[0]
    return _CELL_OPEN + _CELL_SEP.join(vals) + _CELL_CLOSE


@dataclass(frozen=True)
class StandardTuple:
    """One known value per attribute."""

    schema: Schema
    values: tuple

    def __init__(self, schema: Schema, values: Sequence[str]):
        vals = tuple(check_value(v) for v in values)
        if len(vals) != len(schema):
            raise SchemaError(f"arity {len(vals)} does not match schema {schema.attributes}")
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "values", vals)

    @property
    def model(self) -> Model:
        return Model.STANDARD

    def sort_key(self):
        return self.values

    def render(self) -> str:
        return ",".join(self.values)


@dataclass(frozen=True)
class VagueTuple:
    """A non-empty finite set of candidate values per attribute."""

    schema: Schema
    cells: tuple

    def __init__(self, schema: Schema, cells: Sequence):
        norm = tuple(_as_cell(c) for c in cells)
        if len(norm) != len(schema):
            raise SchemaError(f"arity {len(norm)} does not match schema {schema.attributes}")
        for attr, cell in zip(schema, norm):
            if not cell:
                raise SchemaError(f"empty cell for attribute {attr}")
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "cells", norm)

    @property
    def model(self) -> Model:
        return Model.VAGUE

    def is_singleton(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def valuations(self) -> Iterator[Row]:
        """All standard rows obtainable from this tuple, in value order."""
        return itertools.product(*(sorted(c) for c in self.cells))

    def valuation_count(self) -> int:
        n = 1
        for c in self.cells:
            n *= len(c)
        return n

    def sort_key(self):
        return tuple(tuple(sorted(c)) for c in self.cells)

    def render(self) -> str:
        return ",".join(render_cell(c) for c in self.cells)


@dataclass(frozen=True)
class DisjunctiveTuple:
    """A finite, non-empty disjunction of standard rows over one schema."""

    schema: Schema
    disjuncts: frozenset

    def __init__(self, schema: Schema, disjuncts: Iterable[Sequence[str]]):
        rows = frozenset(tuple(check_value(v) for v in row) for row in disjuncts)
        if not rows:
            raise SchemaError("disjunctive tuple needs at least one disjunct")
        for row in rows:
            if len(row) != len(schema):
                raise SchemaError(f"disjunct arity {len(row)} does not match schema {schema.attributes}")
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "disjuncts", rows)

    @property
    def model(self) -> Model:
        return Model.DISJUNCTIVE

    def valuations(self) -> Iterator[Row]:
        return iter(sorted(self.disjuncts))

    def valuation_count(self) -> int:
        return len(self.disjuncts)

    def sort_key(self):
        return tuple(sorted(self.disjuncts))

    def render(self) -> str:
        return "||".join("(" + ",".join(row) + ")" for row in sorted(self.disjuncts))


AnyTuple = Union[StandardTuple, VagueTuple, DisjunctiveTuple]

_MODEL_TYPES = {
    Model.STANDARD: StandardTuple,
    Model.VAGUE: VagueTuple,
    Model.DISJUNCTIVE: DisjunctiveTuple,
}


@dataclass(frozen=True)
class Table:
    """A set of tuples of one uniform model; duplicates collapse eagerly."""

    schema: Schema
    model: Model
    tuples: tuple

    def __init__(self, schema: Schema, model: Model, tuples: Iterable[AnyTuple]):
        model = Model(model)
        expected = _MODEL_TYPES[model]
        unique = set(tuples)
        for t in unique:
            if not isinstance(t, expected):
                raise ModelError(f"{model.value} table cannot hold a {type(t).__name__}")
            if t.schema != schema:
                raise SchemaError(f"tuple schema {t.schema.attributes} differs from table schema {schema.attributes}")
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "tuples", tuple(sorted(unique, key=lambda t: t.sort_key())))

    @classmethod
    def standard(cls, attrs: Iterable[str], rows: Iterable[Sequence[str]]) -> "Table":
        schema = attrs if isinstance(attrs, Schema) else Schema(attrs)
        return cls(schema, Model.STANDARD, (StandardTuple(schema, r) for r in rows))

    @classmethod
    def vague(cls, attrs: Iterable[str], rows: Iterable[Sequence]) -> "Table":
        schema = attrs if isinstance(attrs, Schema) else Schema(attrs)
        return cls(schema, Model.VAGUE, (VagueTuple(schema, r) for r in rows))

    @classmethod
    def disjunctive(cls, attrs: Iterable[str], rows: Iterable[Iterable[Sequence[str]]]) -> "Table":
        schema = attrs if isinstance(attrs, Schema) else Schema(attrs)
        return cls(schema, Model.DISJUNCTIVE, (DisjunctiveTuple(schema, r) for r in rows))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[AnyTuple]:
        return iter(self.tuples)

    def valuation_count(self) -> int:
        n = 1
        for t in self.tuples:
            n *= 1 if isinstance(t, StandardTuple) else t.valuation_count()
        return n


World = Table  # a possible world is a standard table


def _require_same(t1: AnyTuple, t2: AnyTuple) -> None:
    if type(t1) is not type(t2):
        raise ModelError(f"mixed tuple models: {type(t1).__name__} vs {type(t2).__name__}")
    if t1.schema != t2.schema:
        raise SchemaError("tuples have different schemas")


def equal_tuples(t1: AnyTuple, t2: AnyTuple) -> bool:
    """Model-aware equality: same possible valuations.

    Vague tuples compare cell-by-cell (sound for that model); disjunctive
    tuples compare whole disjunct sets, since attribute-wise agreement is not
    sufficient for them.
    """
    _require_same(t1, t2)
    return t1 == t2


def project_tuple(t: AnyTuple, attrs: Iterable[str]) -> AnyTuple:
    """t[X]; preserves the tuple model."""
    pos = t.schema.positions(attrs)
    sub = t.schema.restrict(attrs)
    if isinstance(t, StandardTuple):
        return StandardTuple(sub, tuple(t.values[i] for i in pos))
    if isinstance(t, VagueTuple):
        return VagueTuple(sub, tuple(t.cells[i] for i in pos))
    return DisjunctiveTuple(sub, (tuple(row[i] for i in pos) for row in t.disjuncts))


def project_table(table: Table, attrs: Iterable[str]) -> Table:
    """pi_X(R): project every tuple; duplicates collapse."""
    sub = table.schema.restrict(attrs)
    return Table(sub, table.model, (project_tuple(t, attrs) for t in table.tuples))


def tuple_union(t1: AnyTuple, t2: AnyTuple) -> AnyTuple:
    """Tuple covering the union of both valuations (cell-wise / disjunct-set)."""
    _require_same(t1, t2)
    if isinstance(t1, StandardTuple):
        if t1 == t2:
            return t1
        raise ModelError("union of distinct standard tuples is not a standard tuple")
    if isinstance(t1, VagueTuple):
        return VagueTuple(t1.schema, tuple(a | b for a, b in zip(t1.cells, t2.cells)))
    return DisjunctiveTuple(t1.schema, t1.disjuncts | t2.disjuncts)


def tuple_intersection(t1: AnyTuple, t2: AnyTuple) -> Optional[AnyTuple]:
    """Tuple covering the common valuations, or None when there are none."""
    _require_same(t1, t2)
    if isinstance(t1, StandardTuple):
        return t1 if t1 == t2 else None
    if isinstance(t1, VagueTuple):
        cells = tuple(a & b for a, b in zip(t1.cells, t2.cells))
        if any(not c for c in cells):
            return None
        return VagueTuple(t1.schema, cells)
    common = t1.disjuncts & t2.disjuncts
    if not common:
        return None
    return DisjunctiveTuple(t1.schema, common)


def iter_valuation_worlds(table: Table) -> Iterator[Table]:
    """Every valuation's world, in deterministic order, duplicates included.

    One world is yielded per valuation; distinct valuations may yield equal
    worlds.  Standard tables have exactly one valuation: themselves.
    """
    if table.model is Model.STANDARD:
        yield table
        return
    choice_lists = [list(t.valuations()) for t in table.tuples]
    for combo in itertools.product(*choice_lists):
        yield Table.standard(table.schema, combo)


def enumerate_worlds(table: Table, limit: Optional[int] = None) -> list:
    """All distinct possible worlds, canonically ordered.

    Raises WorldLimitExceeded as soon as the number of distinct worlds passes
    `limit`.
    """
    seen = set()
    for world in iter_valuation_worlds(table):
        seen.add(world)
        if limit is not None and len(seen) > limit:
            raise WorldLimitExceeded(limit)
    return sorted(seen, key=lambda w: tuple(t.sort_key() for t in w.tuples))


def to_disjunctive_tuple(t: AnyTuple) -> DisjunctiveTuple:
    if isinstance(t, DisjunctiveTuple):
        return t
    if isinstance(t, StandardTuple):
        return DisjunctiveTuple(t.schema, (t.values,))
    return DisjunctiveTuple(t.schema, t.valuations())


def to_disjunctive(table: Table) -> Table:
    """Equivalent disjunctive table (same set of possible worlds)."""
    return Table(table.schema, Model.DISJUNCTIVE, (to_disjunctive_tuple(t) for t in table.tuples))


def try_to_vague(t: DisjunctiveTuple) -> Optional[VagueTuple]:
    """Inverse embedding: succeeds iff the disjuncts form a full cell product."""
    if not isinstance(t, DisjunctiveTuple):
        raise ModelError(f"expected a disjunctive tuple, got {type(t).__name__}")
    cells = tuple(frozenset(row[i] for row in t.disjuncts) for i in range(len(t.schema)))
    product_size = 1
    for c in cells:
        product_size *= len(c)
    if product_size != len(t.disjuncts):
        return None
    return VagueTuple(t.schema, cells)

"""Satisfaction checkers for functional dependencies over incomplete tables.

Six interpretations are supported:

* standard   -- classical FDs on standard tables only;
* strong     -- the FD holds in every possible world;
* weak       -- the FD holds in at least one possible world;
* pfd        -- for any two tuples and any shared lhs binding, the selected
                rhs answer sets coincide;
* vertical   -- pfd agreement plus a per-tuple product-form condition and a
                per-tuple multivalued dependency;
* rm         -- Raju-Majumdar style: rhs resemblance never drops below lhs
                resemblance (vague tables only).

Seamless satisfaction (one world satisfying a whole FD set at once) is a
set-level check and is exposed as `check_seamless`.  Checking it is
NP-complete, so it carries a search budget.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from .errors import ModelError, ValuationBudgetExceeded
from .model import (
    DisjunctiveTuple,
    Model,
    StandardTuple,
    Table,
    VagueTuple,
    iter_valuation_worlds,
    to_disjunctive,
)

DEFAULT_VALUATION_CAP = 1_000_000


@dataclass(frozen=True)
class FunctionalDependency:
    """X -> Y over attribute names; sides may overlap or be empty."""

    lhs: frozenset
    rhs: frozenset

    def __init__(self, lhs: Iterable[str], rhs: Iterable[str]):
        object.__setattr__(self, "lhs", frozenset(lhs))
        object.__setattr__(self, "rhs", frozenset(rhs))

    def attributes(self) -> frozenset:
        return self.lhs | self.rhs

    def __str__(self) -> str:
        return f"{' '.join(sorted(self.lhs))} -> {' '.join(sorted(self.rhs))}"


class Semantics(str, Enum):
    STANDARD = "standard"
    STRONG = "strong"
    WEAK = "weak"
    SEAMLESS = "seamless"
    PFD = "pfd"
    VERTICAL = "vertical"
    RM = "rm"


# ---------------------------------------------------------------------------
# Selection: t[X=binding] and its projections
# ---------------------------------------------------------------------------


def bindings(t, attrs: Iterable[str]) -> frozenset:
    """t[X] as the set of standard value rows its valuations take on X."""
    pos = t.schema.positions(attrs)
    if isinstance(t, StandardTuple):
        return frozenset((tuple(t.values[i] for i in pos),))
    if isinstance(t, VagueTuple):
        return frozenset(itertools.product(*(sorted(t.cells[i]) for i in pos)))
    return frozenset(tuple(row[i] for i in pos) for row in t.disjuncts)


def answer_set(t, x_attrs: Iterable[str], binding: tuple, y_attrs: Iterable[str]) -> frozenset:
    """t[X=binding][Y]: selected valuations of t, projected on Y.

    For vague tuples only the X-union-Y restriction of the valuation product is
    ever materialized.
    """
    x_pos = t.schema.positions(x_attrs)
    y_pos = t.schema.positions(y_attrs)
    if isinstance(t, DisjunctiveTuple):
        return frozenset(
            tuple(row[i] for i in y_pos)
            for row in t.disjuncts
            if tuple(row[i] for i in x_pos) == binding
        )
    cells = t.cells if isinstance(t, VagueTuple) else tuple(frozenset((v,)) for v in t.values)
    bound = dict(zip(x_pos, binding))
    if any(bound[i] not in cells[i] for i in x_pos):
        return frozenset()
    factors = [(bound[i],) if i in bound else sorted(cells[i]) for i in y_pos]
    return frozenset(itertools.product(*factors))


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of selecting t[X=binding] and projecting the survivors."""

    source: object
    x_attrs: tuple
    binding: tuple
    onto: tuple
    answers: frozenset


def select(t, x_attrs: Iterable[str], binding: tuple, onto: Optional[Iterable[str]] = None) -> SelectionResult:
    """t[X=binding], projected on `onto` (defaults to the full schema)."""
    onto_attrs = tuple(t.schema.attributes if onto is None else t.schema.restrict(onto).attributes)
    x_norm = tuple(t.schema.restrict(x_attrs).attributes)
    answers = answer_set(t, x_norm, tuple(binding), onto_attrs)
    return SelectionResult(t, x_norm, tuple(binding), onto_attrs, answers)


# ---------------------------------------------------------------------------
# Violation evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """Machine-readable witness of a failed check."""

    reason: str
    tuples: tuple
    binding: Optional[tuple] = None
    note: str = ""

    def render(self) -> str:
        parts = [self.reason]
        parts.extend(f"t{i + 1}=({t.render()})" for i, t in enumerate(self.tuples))
        if self.binding is not None:
            parts.append(f"binding=({','.join(self.binding)})")
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Standard / strong / weak
# ---------------------------------------------------------------------------


def _world_rows_violate(rows, x_pos, y_pos):
    """First (u1, u2) in row order with equal X but different Y, else None."""
    seen = {}
    for row in rows:
        key = tuple(row[i] for i in x_pos)
        val = tuple(row[i] for i in y_pos)
        if key in seen:
            if seen[key][0] != val:
                return seen[key][1], row
        else:
            seen[key] = (val, row)
    return None


def _fd_positions(schema, fd: FunctionalDependency):
    return schema.positions(fd.lhs), schema.positions(fd.rhs)


def find_standard_violation(table: Table, fd: FunctionalDependency) -> Optional[Violation]:
    if table.model is not Model.STANDARD:
        raise ModelError("standard satisfaction is defined over standard tables only")
    x_pos, y_pos = _fd_positions(table.schema, fd)
    for i, t1 in enumerate(table.tuples):
        for t2 in table.tuples[i:]:
            k1 = tuple(t1.values[p] for p in x_pos)
            if k1 == tuple(t2.values[p] for p in x_pos):
                if tuple(t1.values[p] for p in y_pos) != tuple(t2.values[p] for p in y_pos):
                    return Violation("pair-disagrees", (t1, t2), k1)
    return None


def check_standard(table: Table, fd: FunctionalDependency) -> bool:
    """Classical satisfaction: equal on X implies equal on Y."""
    if table.model is not Model.STANDARD:
        raise ModelError("standard satisfaction is defined over standard tables only")
    x_pos, y_pos = _fd_positions(table.schema, fd)
    return _world_rows_violate((t.values for t in table.tuples), x_pos, y_pos) is None


def _capped_worlds(table: Table, cap: int):
    """Valuation worlds in deterministic order; raises once `cap` valuations
    have been consumed without the caller settling on an answer."""
    for t in table.tuples:
        if not isinstance(t, StandardTuple) and t.valuation_count() > cap:
            raise ValuationBudgetExceeded(cap)
    count = 0
    for world in iter_valuation_worlds(table):
        count += 1
        if count > cap:
            raise ValuationBudgetExceeded(cap)
        yield world


def check_strong(table: Table, fd: FunctionalDependency, valuation_cap: int = DEFAULT_VALUATION_CAP) -> bool:
    """True iff every possible world satisfies the FD standardly."""
    x_pos, y_pos = _fd_positions(table.schema, fd)
    for world in _capped_worlds(table, valuation_cap):
        if _world_rows_violate((t.values for t in world.tuples), x_pos, y_pos) is not None:
            return False
    return True


def find_strong_violation(
    table: Table, fd: FunctionalDependency, valuation_cap: int = DEFAULT_VALUATION_CAP
) -> Optional[Violation]:
    """First violating world (in valuation order) with its offending row pair."""
    x_pos, y_pos = _fd_positions(table.schema, fd)
    for world in _capped_worlds(table, valuation_cap):
        hit = _world_rows_violate((t.values for t in world.tuples), x_pos, y_pos)
        if hit is not None:
            u1, u2 = (StandardTuple(table.schema, r) for r in hit)
            return Violation(
                "world-pair-disagrees",
                (u1, u2),
                tuple(u1.values[p] for p in x_pos),
                note="in world: " + "; ".join(t.render() for t in world.tuples),
            )
    return None


def check_weak(table: Table, fd: FunctionalDependency, valuation_cap: int = DEFAULT_VALUATION_CAP) -> bool:
    """True iff some possible world satisfies the FD standardly."""
    x_pos, y_pos = _fd_positions(table.schema, fd)
    for world in _capped_worlds(table, valuation_cap):
        if _world_rows_violate((t.values for t in world.tuples), x_pos, y_pos) is None:
            return True
    return False


# ---------------------------------------------------------------------------
# Seamless satisfaction (NP-complete; pruned exhaustive search)
# ---------------------------------------------------------------------------


def check_seamless(
    table: Table,
    fds: Iterable[FunctionalDependency],
    budget: int = DEFAULT_VALUATION_CAP,
) -> Optional[Table]:
    """A world satisfying every FD in the set at once, or None.

    Exhaustive backtracking over per-tuple valuations.  At every node the
    still-unassigned tuple with the fewest valuations compatible with the
    choices so far is branched on (fail-first), and a partial valuation is
    abandoned as soon as some tuple has no compatible valuation left.  Raises
    ValuationBudgetExceeded after `budget` candidate extensions.
    """
    fds = list(fds)
    positions = [_fd_positions(table.schema, fd) for fd in fds]
    choice_lists = []
    for t in table.tuples:
        if isinstance(t, StandardTuple):
            choice_lists.append([t.values])
        else:
            if t.valuation_count() > budget:
                raise ValuationBudgetExceeded(budget)
            choice_lists.append(list(t.valuations()))
    # Per FD: binding -> [y-value, multiplicity] over the chosen rows.
    maps = [dict() for _ in fds]
    chosen = []
    unassigned = set(range(len(choice_lists)))
    attempts = 0

    def compatible(row) -> bool:
        for m, (x_pos, y_pos) in zip(maps, positions):
            slot = m.get(tuple(row[i] for i in x_pos))
            if slot is not None and slot[0] != tuple(row[i] for i in y_pos):
                return False
        return True

    def push(row):
        for m, (x_pos, y_pos) in zip(maps, positions):
            key = tuple(row[i] for i in x_pos)
            slot = m.get(key)
            if slot is None:
                m[key] = [tuple(row[i] for i in y_pos), 1]
            else:
                slot[1] += 1
        chosen.append(row)

    def pop(row):
        chosen.pop()
        for m, (x_pos, _) in zip(maps, positions):
            key = tuple(row[i] for i in x_pos)
            slot = m[key]
            slot[1] -= 1
            if slot[1] == 0:
                del m[key]

    def search() -> bool:
        nonlocal attempts
        if not unassigned:
            return True
        best = None
        best_rows = None
        for i in sorted(unassigned):
            rows = [r for r in choice_lists[i] if compatible(r)]
            if not rows:
                return False
            if best_rows is None or len(rows) < len(best_rows):
                best, best_rows = i, rows
                if len(rows) == 1:
                    break
        unassigned.remove(best)
        for row in best_rows:
            attempts += 1
            if attempts > budget:
                raise ValuationBudgetExceeded(budget)
            push(row)
            if search():
                return True
            pop(row)
        unassigned.add(best)
        return False

    if search():
        return Table.standard(table.schema, chosen)
    return None


# ---------------------------------------------------------------------------
# PFD
# ---------------------------------------------------------------------------


def find_pfd_violation(table: Table, fd: FunctionalDependency) -> Optional[Violation]:
    """First (t1, t2, binding) in canonical order breaking answer-set equality."""
    x_attrs = tuple(table.schema.restrict(fd.lhs).attributes)
    y_attrs = tuple(table.schema.restrict(fd.rhs).attributes)
    binds = [bindings(t, x_attrs) for t in table.tuples]
    for i, t1 in enumerate(table.tuples):
        for j in range(i, len(table.tuples)):
            t2 = table.tuples[j]
            for b in sorted(binds[i] & binds[j]):
                a1 = answer_set(t1, x_attrs, b, y_attrs)
                a2 = answer_set(t2, x_attrs, b, y_attrs)
                if a1 != a2:
                    return Violation("answer-sets-differ", (t1, t2), b)
    return None


def check_pfd(table: Table, fd: FunctionalDependency) -> bool:
    """For any two tuples (identity included) and any shared lhs binding, the
    selected rhs answer sets must coincide."""
    return find_pfd_violation(table, fd) is None


def check_pfd_decomposed(table: Table, fd: FunctionalDependency) -> bool:
    """Vague-table fast path: split the rhs into single attributes outside the
    lhs and require cell equality whenever the lhs cells can all agree.

    Equivalent to `check_pfd` on vague tables; not valid for disjunctive ones.
    """
    if table.model is Model.DISJUNCTIVE:
        raise ModelError("the decomposed check is sound for vague tables only")
    x_pos = table.schema.positions(fd.lhs)
    rest = sorted(fd.rhs - fd.lhs)
    rest_pos = table.schema.positions(rest)

    def cell(t, i):
        return t.cells[i] if isinstance(t, VagueTuple) else frozenset((t.values[i],))

    for i, t1 in enumerate(table.tuples):
        for t2 in table.tuples[i + 1 :]:
            if all(cell(t1, p) & cell(t2, p) for p in x_pos):
                if any(cell(t1, p) != cell(t2, p) for p in rest_pos):
                    return False
    return True


# ---------------------------------------------------------------------------
# Vertical FDs
# ---------------------------------------------------------------------------


def _mvd_holds(rows, x_pos, z_pos) -> bool:
    """X ->> Z over a small relation given as a set of value rows."""
    rows = set(rows)
    for u in rows:
        for v in rows:
            if tuple(u[i] for i in x_pos) != tuple(v[i] for i in x_pos):
                continue
            swap = list(v)
            for i in z_pos:
                swap[i] = u[i]
            if tuple(swap) not in rows:
                return False
    return True


def find_vertical_violation(table: Table, fd: FunctionalDependency) -> Optional[Violation]:
    """Three conditions over the disjunctive form: cross-tuple answer-set
    agreement, per-tuple product form on rhs-minus-lhs, and a per-tuple
    multivalued dependency lhs ->> rhs-minus-lhs."""
    dt = to_disjunctive(table)
    x_attrs = tuple(dt.schema.restrict(fd.lhs).attributes)
    rest = sorted(fd.rhs - fd.lhs)
    x_pos = dt.schema.positions(fd.lhs)
    rest_pos = dt.schema.positions(rest)

    agreement = find_pfd_violation(dt, fd)
    if agreement is not None:
        return agreement

    for t in dt.tuples:
        for b in sorted(bindings(t, x_attrs)):
            selected = [row for row in sorted(t.disjuncts) if tuple(row[i] for i in x_pos) == b]
            projected = {tuple(row[i] for i in rest_pos) for row in selected}
            size = 1
            for i in rest_pos:
                size *= len({row[i] for row in selected})
            if size != len(projected):
                return Violation("not-a-product", (t,), b)
        if not _mvd_holds(t.disjuncts, x_pos, rest_pos):
            return Violation("mvd-fails", (t,))
    return None


def check_vertical(table: Table, fd: FunctionalDependency) -> bool:
    """Vertical satisfaction; vague and standard tables are converted to their
    disjunctive form first."""
    return find_vertical_violation(table, fd) is None


# ---------------------------------------------------------------------------
# Resemblance and Raju-Majumdar dependencies
# ---------------------------------------------------------------------------

MAX_RESEMBLANCE = "max"
MIN_RESEMBLANCE = "min"


def resemblance(a: Iterable[str], b: Iterable[str], variant: str = MAX_RESEMBLANCE) -> float:
    """Set-overlap score in [0,1]: 0 iff disjoint, 1 iff one side contains the
    other (for the max variant)."""
    a, b = frozenset(a), frozenset(b)
    if not a or not b:
        raise ValueError("resemblance needs non-empty sets")
    inter = len(a & b)
    ratios = (inter / len(a), inter / len(b))
    return max(ratios) if variant == MAX_RESEMBLANCE else min(ratios)


def tuple_resemblance(t1, t2, attrs: Iterable[str], variant: str = MAX_RESEMBLANCE) -> float:
    """Minimum per-attribute resemblance over `attrs` (1.0 for no attributes)."""
    pos = t1.schema.positions(attrs)

    def cell(t, i):
        return t.cells[i] if isinstance(t, VagueTuple) else frozenset((t.values[i],))

    if isinstance(t1, DisjunctiveTuple) or isinstance(t2, DisjunctiveTuple):
        raise ModelError("tuple resemblance is defined for vague tuples")
    return min((resemblance(cell(t1, i), cell(t2, i), variant) for i in pos), default=1.0)


def find_rm_violation(
    table: Table, fd: FunctionalDependency, variant: str = MAX_RESEMBLANCE
) -> Optional[Violation]:
    if table.model is Model.DISJUNCTIVE:
        raise ModelError("rm satisfaction is defined over vague tables only")
    for i, t1 in enumerate(table.tuples):
        for t2 in table.tuples[i:]:
            mx = tuple_resemblance(t1, t2, fd.lhs, variant)
            my = tuple_resemblance(t1, t2, fd.rhs, variant)
            if my < mx:
                return Violation(
                    "resemblance-drops", (t1, t2), note=f"lhs={mx:.6g} rhs={my:.6g}"
                )
    return None


def check_rm(table: Table, fd: FunctionalDependency, variant: str = MAX_RESEMBLANCE) -> bool:
    """Resemblance of the rhs never drops below the resemblance of the lhs."""
    return find_rm_violation(table, fd, variant) is None


# ---------------------------------------------------------------------------
# Uniform dispatcher
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FdVerdict:
    """`fd` is None for set-level (seamless) verdicts; `fds` then lists the set."""

    fd: Optional[FunctionalDependency]
    semantics: Semantics
    holds: bool
    violation: Optional[Violation] = None
    witness: Optional[Table] = None
    fds: tuple = ()

    def label(self) -> str:
        if self.fd is not None:
            return str(self.fd)
        return "; ".join(str(f) for f in self.fds)


@dataclass
class CheckReport:
    """Per-FD verdicts plus, for seamless runs, the witness world if any."""

    model: Model
    semantics: Semantics
    verdicts: list = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def satisfied(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "semantics": self.semantics.value,
            "satisfied": self.satisfied,
            "verdicts": [
                {
                    "fd": v.label(),
                    "holds": v.holds,
                    "violation": v.violation.render() if v.violation else None,
                    "witness": [t.render() for t in v.witness.tuples] if v.witness else None,
                }
                for v in self.verdicts
            ],
        }

    def to_text(self, timing: bool = False) -> str:
        lines = [
            f"model: {self.model.value}",
            f"semantics: {self.semantics.value}",
            f"satisfied: {'true' if self.satisfied else 'false'}",
        ]
        for v in self.verdicts:
            lines.append(f"fd: {v.label()}")
            lines.append(f"holds: {'true' if v.holds else 'false'}")
            if v.violation is not None:
                lines.append(f"violation: {v.violation.render()}")
            if v.witness is not None:
                lines.append("witness: " + "; ".join(t.render() for t in v.witness.tuples))
        if timing:
            lines.append(f"elapsed_ms: {self.elapsed_s * 1000:.3f}")
        return "\n".join(lines) + "\n"


_FINDERS = {
    Semantics.PFD: find_pfd_violation,
    Semantics.VERTICAL: find_vertical_violation,
    Semantics.RM: find_rm_violation,
}


def check(
    table: Table,
    fds: Union[FunctionalDependency, Iterable[FunctionalDependency]],
    semantics: Semantics,
    valuation_cap: int = DEFAULT_VALUATION_CAP,
) -> CheckReport:
    """Uniform entry point; seamless treats `fds` as one set, the rest check
    each FD on its own."""
    semantics = Semantics(semantics)
    if isinstance(fds, FunctionalDependency):
        fds = [fds]
    fds = list(fds)
    start = time.perf_counter()
    report = CheckReport(table.model, semantics)

    if semantics is Semantics.SEAMLESS:
        witness = check_seamless(table, fds, budget=valuation_cap)
        report.verdicts.append(
            FdVerdict(None, semantics, witness is not None, witness=witness, fds=tuple(fds))
        )
    elif semantics is Semantics.STANDARD:
        for fd in fds:
            v = find_standard_violation(table, fd)
            report.verdicts.append(FdVerdict(fd, semantics, v is None, violation=v))
    elif semantics is Semantics.STRONG:
        for fd in fds:
            v = find_strong_violation(table, fd, valuation_cap)
            report.verdicts.append(FdVerdict(fd, semantics, v is None, violation=v))
    elif semantics is Semantics.WEAK:
        for fd in fds:
            holds = check_weak(table, fd, valuation_cap)
            report.verdicts.append(FdVerdict(fd, semantics, holds))
    else:
        finder = _FINDERS[semantics]
        for fd in fds:
            v = finder(table, fd)
            report.verdicts.append(FdVerdict(fd, semantics, v is None, violation=v))

    report.elapsed_s = time.perf_counter() - start
    return report

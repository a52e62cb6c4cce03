"""Syntactic reasoning over FD sets: closure, implication, and checkable proofs.

The three inference rules are the classical ones:

* reflexivity:   Y subset-of X        gives X -> Y
* augmentation:  X -> Y               gives XZ -> YZ
* transitivity:  X -> Y and Y -> Z    gives X -> Z

`derive` emits proofs in a fixed phase order (base citations, one reflexivity
step, augmentations, transitivities) so golden tests stay stable, and
`check_derivation` replays them step by step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .semantics import FunctionalDependency

GIVEN = "given"
REFLEXIVITY = "reflexivity"
AUGMENTATION = "augmentation"
TRANSITIVITY = "transitivity"
_RULES = (GIVEN, REFLEXIVITY, AUGMENTATION, TRANSITIVITY)


def _sorted_fds(fds: Iterable[FunctionalDependency]) -> list:
    return sorted(set(fds), key=lambda f: (tuple(sorted(f.lhs)), tuple(sorted(f.rhs))))


def attribute_closure(fds: Iterable[FunctionalDependency], attrs: Iterable[str]) -> frozenset:
    """Fixpoint of `attrs` under the FD set: the usual worklist closure."""
    closure = set(attrs)
    pending = _sorted_fds(fds)
    changed = True
    while changed:
        changed = False
        remaining = []
        for fd in pending:
            if fd.lhs <= closure:
                if not fd.rhs <= closure:
                    closure |= fd.rhs
                    changed = True
            else:
                remaining.append(fd)
        pending = remaining
    return frozenset(closure)


def implies(fds: Iterable[FunctionalDependency], fd: FunctionalDependency) -> bool:
    """Semantic implication, decided syntactically via the closure."""
    return fd.rhs <= attribute_closure(fds, fd.lhs)


@dataclass(frozen=True)
class DerivationStep:
    """One rule application; premises are indices of earlier steps."""

    rule: str
    conclusion: FunctionalDependency
    premises: tuple = ()
    augment_with: frozenset = frozenset()


@dataclass(frozen=True)
class Derivation:
    conclusion: FunctionalDependency
    steps: tuple


def derive(fds: Iterable[FunctionalDependency], fd: FunctionalDependency) -> Optional[Derivation]:
    """A machine-checkable proof of `fd` from `fds`, or None if not implied.

    Shape: each used base FD is cited once; a single reflexivity step brings
    the target rhs under the closure; augmentation steps grow the lhs chain;
    transitivity steps stitch the chain together.
    """
    base = _sorted_fds(fds)
    target_lhs = fd.lhs

    # Replay the closure, recording which base FDs actually grow it.
    closure = set(target_lhs)
    used = []
    changed = True
    while changed and not fd.rhs <= closure:
        changed = False
        for f in base:
            if f.lhs <= closure and not f.rhs <= closure:
                used.append((f, frozenset(closure)))
                closure |= f.rhs
                changed = True
                break
    if not fd.rhs <= closure:
        return None

    steps = []
    if not used:
        steps.append(DerivationStep(REFLEXIVITY, fd))
        return Derivation(fd, tuple(steps))

    given_index = {}
    for f, _ in used:
        if f not in given_index:
            steps.append(DerivationStep(GIVEN, f))
            given_index[f] = len(steps) - 1

    final_set = frozenset(used[-1][1] | used[-1][0].rhs)
    reflex_index = len(steps)
    steps.append(DerivationStep(REFLEXIVITY, FunctionalDependency(final_set, fd.rhs)))

    # Augmentations: (S_i -> S_{i+1}) from each used FD, padding by S_i.
    aug_indices = []
    for f, before in used:
        grown = FunctionalDependency(before, before | f.rhs)
        steps.append(DerivationStep(AUGMENTATION, grown, (given_index[f],), before))
        aug_indices.append(len(steps) - 1)

    # Transitivity chain: X -> S_1 -> ... -> S_k, then S_k -> rhs.
    chain = aug_indices[0]
    for idx in aug_indices[1:]:
        prev = steps[chain].conclusion
        nxt = steps[idx].conclusion
        steps.append(
            DerivationStep(TRANSITIVITY, FunctionalDependency(prev.lhs, nxt.rhs), (chain, idx))
        )
        chain = len(steps) - 1
    steps.append(
        DerivationStep(
            TRANSITIVITY,
            FunctionalDependency(steps[chain].conclusion.lhs, fd.rhs),
            (chain, reflex_index),
        )
    )
    return Derivation(fd, tuple(steps))


def check_derivation(fds: Iterable[FunctionalDependency], derivation: Derivation) -> bool:
    """Validate every step against the base set and earlier conclusions."""
    base = set(fds)
    seen = []
    for step in derivation.steps:
        if step.rule not in _RULES:
            raise ValueError(f"unknown rule {step.rule!r}")
        if any(not isinstance(p, int) or p < 0 or p >= len(seen) for p in step.premises):
            return False
        if step.rule == GIVEN:
            if step.premises or step.conclusion not in base:
                return False
        elif step.rule == REFLEXIVITY:
            if step.premises or not step.conclusion.rhs <= step.conclusion.lhs:
                return False
        elif step.rule == AUGMENTATION:
            if len(step.premises) != 1:
                return False
            p = seen[step.premises[0]]
            want = FunctionalDependency(p.lhs | step.augment_with, p.rhs | step.augment_with)
            if step.conclusion != want:
                return False
        else:  # transitivity
            if len(step.premises) != 2:
                return False
            p1, p2 = (seen[i] for i in step.premises)
            if p1.rhs != p2.lhs:
                return False
            if step.conclusion != FunctionalDependency(p1.lhs, p2.rhs):
                return False
        seen.append(step.conclusion)
    return bool(seen) and seen[-1] == derivation.conclusion

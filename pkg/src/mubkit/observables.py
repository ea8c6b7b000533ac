"""Finite-outcome observables and the operations that combine them.

An observable is a labelled family of effects summing to the identity.
Derived constructions (products, conditioning, coarse-graining) re-validate
their result with a 10x looser sum tolerance, since each entry accumulates
roundoff from up to m*n sequential products.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from . import linalg
from .effects import Effect, State, occurrence_probability, seq_product
from .errors import (
    DimMismatch,
    DuplicateLabel,
    LabelMismatch,
    MubkitError,
    NotAnEffect,
    SumNotIdentity,
)

PRODUCT_SEP = "⊗"  # the symbol joining outcome labels of a product observable


class Observable:
    """Effects A_x indexed by string outcome labels, with sum(A_x) = I."""

    __slots__ = ("outcomes", "effects", "dim")

    def __init__(self, outcomes: Sequence[str], effects, tol: float | None = None,
                 sum_tol: float | None = None):
        labels = tuple(str(x) for x in outcomes)
        if len(set(labels)) != len(labels):
            seen = [x for i, x in enumerate(labels) if x in labels[:i]]
            raise DuplicateLabel(f"repeated outcome label(s): {sorted(set(seen))}")
        if len(labels) != len(effects):
            raise LabelMismatch(f"{len(labels)} labels for {len(effects)} effects")
        if not labels:
            raise LabelMismatch("observable needs at least one outcome")
        validated = []
        for x, e in zip(labels, effects):
            if isinstance(e, Effect):
                validated.append(e)
                continue
            try:
                validated.append(Effect(e, tol))
            except MubkitError as err:
                raise NotAnEffect(f"outcome {x!r}: {err}") from err
        dims = {e.dim for e in validated}
        if len(dims) != 1:
            raise DimMismatch(f"effects have mixed dimensions {sorted(dims)}")
        dim = dims.pop()
        if sum_tol is None:
            sum_tol = tol if tol is not None else linalg.default_tol(dim)
        total = np.zeros((dim, dim), dtype=complex)
        for e in validated:
            total = total + e.matrix
        defect = linalg.max_abs(total - np.eye(dim))
        if defect > sum_tol:
            raise SumNotIdentity(f"effects sum misses identity by {defect:.3e} (tol {sum_tol:.3e})")
        self.outcomes = labels
        self.effects = tuple(validated)
        self.dim = dim

    def __len__(self) -> int:
        return len(self.outcomes)

    def items(self) -> Iterator[tuple[str, Effect]]:
        return zip(self.outcomes, self.effects)

    def effect(self, label: str) -> Effect:
        try:
            return self.effects[self.outcomes.index(label)]
        except ValueError:
            raise LabelMismatch(f"no outcome {label!r}") from None

    def matrices(self) -> tuple[np.ndarray, ...]:
        return tuple(e.matrix for e in self.effects)

    def is_sharp(self, tol: float | None = None) -> bool:
        return all(e.is_sharp(tol) for e in self.effects)

    def is_atomic(self, tol: float | None = None) -> bool:
        return all(e.is_atomic(tol) for e in self.effects)

    def __repr__(self) -> str:
        return f"Observable(dim={self.dim}, outcomes={list(self.outcomes)!r})"


def observable_new(dim: int, outcomes: Sequence[str], matrices, tol: float | None = None) -> Observable:
    """Validate raw matrices as an observable of the stated dimension."""
    obs = Observable(outcomes, matrices, tol)
    if obs.dim != dim:
        raise DimMismatch(f"declared dim {dim}, effects are {obs.dim}x{obs.dim}")
    return obs


@dataclass(frozen=True)
class Distribution:
    """Outcome probabilities of one observable in one state."""

    outcomes: tuple[str, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        s = sum(self.probabilities)
        if abs(s - 1.0) > 10 * linalg.default_tol(max(len(self.probabilities), 1)):
            raise ValueError(f"probabilities sum to {s!r}, not 1")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.outcomes, self.probabilities))

    def __getitem__(self, label: str) -> float:
        return self.as_dict()[label]


def distribution(rho: State, a: Observable, tol: float | None = None) -> Distribution:
    probs = tuple(occurrence_probability(rho, e, tol) for e in a.effects)
    return Distribution(a.outcomes, probs)


def obs_seq_product(a: Observable, b: Observable, tol: float | None = None) -> Observable:
    """Joint observable with effects A_x o B_y on outcomes 'x<sep>y'.

    Outcomes run in lexicographic input order: all of A's first outcome
    paired with each of B's outcomes, and so on.
    """
    if a.dim != b.dim:
        raise DimMismatch(f"dims {a.dim} and {b.dim} differ")
    base = tol if tol is not None else linalg.default_tol(a.dim)
    labels = []
    prods = []
    for x, ax in a.items():
        for y, by in b.items():
            labels.append(f"{x}{PRODUCT_SEP}{y}")
            prods.append(seq_product(ax, by, tol))
    return Observable(labels, prods, tol, sum_tol=10 * base)


def conditioned(b: Observable, a: Observable, tol: float | None = None) -> Observable:
    """The observable (B|A): effect y is sum_x A_x o B_y."""
    if a.dim != b.dim:
        raise DimMismatch(f"dims {a.dim} and {b.dim} differ")
    base = tol if tol is not None else linalg.default_tol(a.dim)
    effs = []
    for by in b.effects:
        total = np.zeros((a.dim, a.dim), dtype=complex)
        for ax in a.effects:
            total = total + seq_product(ax, by, tol).matrix
        effs.append((total + total.conj().T) / 2.0)
    return Observable(b.outcomes, effs, 10 * base, sum_tol=10 * base)


@dataclass(frozen=True)
class PartitionMap:
    """Surjective map from one outcome set onto another, fiber by fiber."""

    source_outcomes: tuple[str, ...]
    target_outcomes: tuple[str, ...]
    mapping: Mapping[str, str]

    def __post_init__(self):
        src = tuple(str(x) for x in self.source_outcomes)
        tgt = tuple(str(y) for y in self.target_outcomes)
        if len(set(src)) != len(src) or len(set(tgt)) != len(tgt):
            raise DuplicateLabel("partition outcome labels must be unique")
        object.__setattr__(self, "source_outcomes", src)
        object.__setattr__(self, "target_outcomes", tgt)
        object.__setattr__(self, "mapping", dict(self.mapping))
        if set(self.mapping) != set(src):
            raise LabelMismatch("mapping must be defined on exactly the source outcomes")
        values = set(self.mapping.values())
        if not values <= set(tgt):
            raise LabelMismatch(f"mapping hits unknown target(s) {sorted(values - set(tgt))}")
        if values != set(tgt):
            raise LabelMismatch(f"target(s) never hit: {sorted(set(tgt) - values)}")

    def fibers(self) -> dict[str, tuple[str, ...]]:
        """Preimages keyed by target, each in source order."""
        return {
            y: tuple(x for x in self.source_outcomes if self.mapping[x] == y)
            for y in self.target_outcomes
        }

    def fiber_sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.fibers().values())


def coarse_grain(a: Observable, f: PartitionMap, tol: float | None = None) -> Observable:
    """Merge outcomes of ``a`` along the fibers of ``f``."""
    if set(f.source_outcomes) != set(a.outcomes):
        raise LabelMismatch("partition source must equal the observable's outcomes")
    base = tol if tol is not None else linalg.default_tol(a.dim)
    effs = []
    for y, fiber in f.fibers().items():
        total = np.zeros((a.dim, a.dim), dtype=complex)
        for x in fiber:
            total = total + a.effect(x).matrix
        effs.append(total)
    return Observable(f.target_outcomes, effs, 10 * base, sum_tol=10 * base)


class CoexistenceWitness(NamedTuple):
    joint: Observable
    to_first: PartitionMap
    to_second: PartitionMap


def coexistence_witness(a: Observable, b: Observable, tol: float | None = None) -> CoexistenceWitness:
    """Exhibit A and (B|A) as coarse-grainings of the product A o B.

    The returned partitions recover A exactly (first marginal) and the
    conditioned observable (B|A) (second marginal), so both are parts of
    one joint observable.
    """
    joint = obs_seq_product(a, b, tol)
    pairs = [(x, y) for x in a.outcomes for y in b.outcomes]
    joined = [f"{x}{PRODUCT_SEP}{y}" for x, y in pairs]
    to_first = PartitionMap(tuple(joined), a.outcomes,
                            {lab: x for lab, (x, _) in zip(joined, pairs)})
    to_second = PartitionMap(tuple(joined), b.outcomes,
                             {lab: y for lab, (_, y) in zip(joined, pairs)})
    return CoexistenceWitness(joint, to_first, to_second)


def conjugate(a: Observable, u: np.ndarray, tol: float | None = None) -> Observable:
    """Apply the unitary change of basis E -> U E U* to every effect."""
    effs = [u @ e.matrix @ u.conj().T for e in a.effects]
    return Observable(a.outcomes, effs, tol)


def iter_set_partitions(items: Sequence) -> Iterator[list[list]]:
    """Every partition of ``items`` into nonempty blocks.

    Blocks and items keep first-occurrence order; the count over n items
    is the n-th Bell number.
    """
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in iter_set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def iter_partition_maps(a: Observable) -> Iterator[PartitionMap]:
    """All coarse-graining maps of an observable, targets labelled '0', '1', ..."""
    for blocks in iter_set_partitions(a.outcomes):
        ordered = sorted(blocks, key=lambda blk: a.outcomes.index(blk[0]))
        targets = tuple(str(i) for i in range(len(ordered)))
        mapping = {x: str(i) for i, blk in enumerate(ordered) for x in blk}
        yield PartitionMap(a.outcomes, targets, mapping)

"""Coset actions of free products of cyclic groups and their rank arithmetic.

A group spec [m_1, ..., m_k] stands for the free product of cyclic groups of
those orders, with 0 meaning the infinite cyclic factor.  Finite-index data
arrives as one permutation of the cosets 0..i-1 per factor; a torsion factor
must act with every cycle of full length, the combinatorial shadow of a free
action.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import relcore
from .relcore import ModelError
from .unionfind import UnionFind

MAX_ATTEMPTS = 10_000
MODEL_ATOM_CAP = 10_000

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer; the one fixed mixing step behind every stream."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master: int, *counters: int) -> int:
    """Fold counters into the master seed, one mixing round per counter.

    Sampling draws its per-(factor, attempt) streams from here, which keeps
    every result a pure function of the arguments no matter how calls are
    scheduled.
    """
    state = mix64(master)
    for c in counters:
        state = mix64((state + _GOLDEN + c) & _MASK)
    return state


@dataclass(frozen=True)
class GroupSpec:
    """Orders of the free-product factors; 0 is the infinite cyclic factor."""

    factor_orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factor_orders", tuple(self.factor_orders))
        if not self.factor_orders:
            raise ModelError("a group spec needs at least one factor")
        for m in self.factor_orders:
            if m < 0 or m == 1:
                raise ModelError(f"factor order {m} must be 0 or at least 2")


@dataclass(frozen=True)
class GroupInvariants:
    factor_costs: tuple[Fraction, ...]
    predicted_cost: Fraction
    beta1: Fraction
    rank: int


def factor_cost(order: int) -> Fraction:
    """1 - 1/m for a finite cyclic factor, 1 for the infinite one."""
    return Fraction(1) if order == 0 else 1 - Fraction(1, order)


def group_invariants(spec: GroupSpec) -> GroupInvariants:
    costs = tuple(factor_cost(m) for m in spec.factor_orders)
    total = sum(costs, Fraction(0))
    return GroupInvariants(costs, total, total - 1, len(spec.factor_orders))


def _check_permutation(perm, index: int):
    if len(perm) != index or sorted(perm) != list(range(index)):
        raise ModelError(f"each factor needs a permutation of 0..{index - 1}")


def _cycle_count(perm) -> int:
    seen = [False] * len(perm)
    count = 0
    for x in range(len(perm)):
        if seen[x]:
            continue
        count += 1
        while not seen[x]:
            seen[x] = True
            x = perm[x]
    return count


def _cycle_lengths(perm) -> list[int]:
    seen = [False] * len(perm)
    out = []
    for x in range(len(perm)):
        if seen[x]:
            continue
        length = 0
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        out.append(length)
    return out


def _transitive(perms, index: int) -> bool:
    uf = UnionFind(index)
    for perm in perms:
        for x, y in enumerate(perm):
            uf.union(x, y)
    return uf.components == 1


@dataclass
class PermAction:
    """One permutation of the cosets per factor, acting freely at torsion."""

    spec: GroupSpec
    index: int
    perms: list[list[int]]

    def __post_init__(self):
        if self.index < 1:
            raise ModelError(f"index must be positive, got {self.index}")
        if len(self.perms) != len(self.spec.factor_orders):
            raise ModelError(
                f"{len(self.spec.factor_orders)} factors but {len(self.perms)} permutations")
        for order, perm in zip(self.spec.factor_orders, self.perms):
            _check_permutation(perm, self.index)
            if order and any(length != order for length in _cycle_lengths(perm)):
                raise ModelError(
                    f"an order-{order} factor must act with every cycle of length {order}")
        if not _transitive(self.perms, self.index):
            raise ModelError("the factors do not act transitively on the cosets")


def _sample_factor_perm(order: int, index: int, rng: random.Random) -> list[int]:
    """Uniform permutation, constrained to full-length cycles at torsion.

    A shuffled point sequence chopped into consecutive order-sized cycles is
    uniform over such permutations: each one arises from exactly
    (index/order)! * order^(index/order) shufflings.
    """
    pts = list(range(index))
    rng.shuffle(pts)
    if order == 0:
        return pts
    perm = [0] * index
    for base in range(0, index, order):
        block = pts[base:base + order]
        for pos, x in enumerate(block):
            perm[x] = block[(pos + 1) % order]
    return perm


def sample_free_action(spec: GroupSpec, index: int, seed: int) -> PermAction:
    """Draw per-factor permutations until the action is transitive.

    Each (factor, attempt) pair gets its own stream derived from the master
    seed, so the result depends only on (spec, index, seed).  Gives up after
    MAX_ATTEMPTS rejections.
    """
    if index < 1:
        raise ModelError(f"index must be positive, got {index}")
    for order in spec.factor_orders:
        if order and index % order:
            raise ModelError(f"factor order {order} does not divide the index {index}")
    for attempt in range(MAX_ATTEMPTS):
        perms = [
            _sample_factor_perm(order, index, random.Random(derive_seed(seed, j, attempt)))
            for j, order in enumerate(spec.factor_orders)
        ]
        if _transitive(perms, index):
            return PermAction(spec, index, perms)
    raise ModelError(
        f"no transitive action found in {MAX_ATTEMPTS} attempts for orders "
        f"{list(spec.factor_orders)} at index {index}")


def subgroup_rank(act: PermAction) -> int:
    """Rank of the index-i subgroup behind the action, computed twice.

    Once through the Euler characteristic (i vertices, one full sheet of
    edges per factor, i/m sheets regained per torsion factor) and once as
    the cycle rank of the contracted coset multigraph, where each torsion
    cycle leaves a path of length one less and each infinite factor
    contributes i edges.  The two counts must agree.
    """
    i = act.index
    if not _transitive(act.perms, i):
        raise ModelError("rank needs a transitive action")
    orders = act.spec.factor_orders
    chi = i - len(orders) * i + sum(i // m for m in orders if m)
    by_euler = 1 - chi
    edges = 0
    for order, perm in zip(orders, act.perms):
        if order:
            edges += i - _cycle_count(perm)
        else:
            edges += i
    by_graph = edges - i + 1
    if by_euler != by_graph:
        raise AssertionError(f"rank computations disagree: {by_euler} vs {by_graph}")
    return by_euler


@dataclass(frozen=True)
class GradientRow:
    index: int
    rank: int
    gradient: Fraction
    matches_beta1: bool


def rank_gradient(spec: GroupSpec, indices, seed: int, samples: int = 1) -> list[GradientRow]:
    """(rank - 1)/index over freshly sampled actions, one row per sample.

    For transitive free-at-torsion actions every row lands exactly on the
    predicted first Betti value; the match flag records the comparison
    rather than assuming it.
    """
    if samples < 1:
        raise ModelError(f"samples must be positive, got {samples}")
    beta1 = group_invariants(spec).beta1
    rows = []
    for index in indices:
        for s in range(samples):
            act = sample_free_action(spec, index, derive_seed(seed, index, s))
            p = subgroup_rank(act)
            grad = Fraction(p - 1, index)
            rows.append(GradientRow(index, p, grad, grad == beta1))
    return rows


def compression_check(spec: GroupSpec, index: int, seed: int) -> tuple[Fraction, Fraction]:
    """(rank - 1, index * beta1) for one sampled action; the sides agree exactly."""
    act = sample_free_action(spec, index, seed)
    p = subgroup_rank(act)
    return Fraction(p - 1), index * group_invariants(spec).beta1


def _modeled_factor_cost(order: int) -> Fraction:
    """Re-price one factor through the finite relation calculus.

    A finite order m is the minimal cost of a relation whose classes all
    have m atoms; the infinite factor is the cost of the single full map
    cycling one class.
    """
    if order == 0:
        space = relcore.FiniteSpace(MODEL_ATOM_CAP)
        rel = relcore.Relation(space, [0] * MODEL_ATOM_CAP)
        psi = relcore.single_full_generator(rel)
        return relcore.cost(relcore.Graphing(space, [psi]))
    n = order * (MODEL_ATOM_CAP // order)
    space = relcore.FiniteSpace(n)
    rel = relcore.Relation(space, [x - x % order for x in range(n)])
    return relcore.min_cost(rel)


@dataclass(frozen=True)
class CoincidenceRow:
    factor_orders: tuple[int, ...]
    rank: int
    predicted_cost: Fraction
    beta1: Fraction
    index: int
    measured_cost: Fraction
    factor_costs: tuple[Fraction, ...]
    modeled_factor_costs: tuple[Fraction, ...]
    match: bool


def coincidence_report(specs, max_index: int = 120, seed: int = 0) -> list[CoincidenceRow]:
    """Predicted cost, measured rank gradient and re-priced factors, side by side.

    The measured column samples one action at the largest index <= max_index
    that every torsion order divides (a lone torsion factor is only ever
    transitive on its own order) and reports 1 + (rank - 1)/index.  The match
    flag compares measurement and re-pricing against the prediction; nothing
    beyond this class of groups is asserted.
    """
    rows = []
    for pos, raw in enumerate(specs):
        spec = raw if isinstance(raw, GroupSpec) else GroupSpec(tuple(raw))
        inv = group_invariants(spec)
        base = math.lcm(*(m for m in spec.factor_orders if m))
        if base > max_index:
            raise ModelError(
                f"max_index {max_index} cannot host the torsion orders {list(spec.factor_orders)}")
        if len(spec.factor_orders) == 1 and spec.factor_orders[0]:
            index = base
        else:
            index = max_index // base * base
        act = sample_free_action(spec, index, derive_seed(seed, pos))
        p = subgroup_rank(act)
        measured = 1 + Fraction(p - 1, index)
        modeled = tuple(_modeled_factor_cost(m) for m in spec.factor_orders)
        match = (measured == inv.predicted_cost
                 and modeled == inv.factor_costs
                 and sum(modeled, Fraction(0)) == inv.predicted_cost
                 and inv.rank == len(spec.factor_orders))
        rows.append(CoincidenceRow(spec.factor_orders, inv.rank, inv.predicted_cost,
                                   inv.beta1, index, measured, inv.factor_costs,
                                   modeled, match))
    return rows

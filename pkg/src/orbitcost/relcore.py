"""Finite measured spaces, partial maps, graphings and the exact cost calculus.

Atoms are the integers 0..n-1, each carrying weight 1/n.  Every measure and
cost in this module is a fractions.Fraction; nothing ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .unionfind import UnionFind


class ModelError(ValueError):
    """An argument broke a documented precondition."""


class NotInSameCycleError(ModelError):
    """orbit_exponent was asked about atoms lying in different cycles."""


class EdgeBudgetError(ModelError):
    """The exhaustive search was asked to scan more pairs than its budget."""


@dataclass(frozen=True)
class FiniteSpace:
    """n atoms of equal weight; the finite model of a probability space."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ModelError(f"a space needs at least one atom, got n={self.n}")

    @property
    def atom_weight(self) -> Fraction:
        return Fraction(1, self.n)

    def measure(self, count: int) -> Fraction:
        """Weight of any count-atom subset."""
        return Fraction(count, self.n)


@dataclass
class PartialMap:
    """A named injective map from a subset of the atoms into the atoms.

    mapping holds source -> target entries.  Loops (x -> x) are allowed; they
    widen the domain without relating distinct atoms.
    """

    name: str
    space: FiniteSpace
    mapping: dict[int, int]

    def __post_init__(self):
        n = self.space.n
        m = self.mapping
        if not m:
            return
        if min(m) < 0 or max(m) >= n:
            x = next(x for x in m if not 0 <= x < n)
            raise ModelError(f"map {self.name!r}: source atom {x} outside 0..{n - 1}")
        targets = m.values()
        if min(targets) < 0 or max(targets) >= n:
            y = next(y for y in targets if not 0 <= y < n)
            raise ModelError(f"map {self.name!r}: target atom {y} outside 0..{n - 1}")
        if len(set(targets)) != len(m):
            seen: dict[int, int] = {}
            for x, y in m.items():
                if y in seen:
                    raise ModelError(
                        f"map {self.name!r}: atoms {seen[y]} and {x} share the target {y}")
                seen[y] = x

    @classmethod
    def from_pairs(cls, name: str, space: FiniteSpace, pairs) -> "PartialMap":
        """Build from (source, target) pairs, rejecting duplicate sources."""
        mapping: dict[int, int] = {}
        for x, y in pairs:
            if x in mapping:
                raise ModelError(f"map {name!r}: duplicate source atom {x}")
            mapping[x] = y
        return cls(name, space, mapping)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.mapping.items())

    def domain(self) -> list[int]:
        return sorted(self.mapping)

    def apply(self, x: int) -> int:
        return self.mapping[x]

    def is_full(self) -> bool:
        """Full domain; together with injectivity this makes a permutation."""
        return len(self.mapping) == self.space.n

    def inverse(self) -> "PartialMap":
        return PartialMap(f"{self.name}_inv", self.space,
                          {y: x for x, y in self.mapping.items()})


@dataclass
class Graphing:
    """An ordered family of distinctly named partial maps over one space."""

    space: FiniteSpace
    maps: list[PartialMap]

    def __post_init__(self):
        names = set()
        for m in self.maps:
            if m.space != self.space:
                raise ModelError(
                    f"map {m.name!r} lives on n={m.space.n}, the graphing on n={self.space.n}")
            if m.name in names:
                raise ModelError(f"duplicate map name {m.name!r}")
            names.add(m.name)

    def map_named(self, name: str) -> PartialMap:
        for m in self.maps:
            if m.name == name:
                return m
        raise ModelError(f"no map named {name!r}")


@dataclass
class Relation:
    """An equivalence relation stored as a canonical representative array.

    parent[x] is the least atom equivalent to x, so parent[x] == x exactly at
    class representatives.
    """

    space: FiniteSpace
    parent: list[int]

    def __post_init__(self):
        n = self.space.n
        p = self.parent
        if len(p) != n:
            raise ModelError(f"representative array has length {len(p)}, space has {n} atoms")
        for x in range(n):
            r = p[x]
            if not 0 <= r <= x:
                raise ModelError(f"atom {x}: representative {r} is not an atom <= {x}")
            if p[r] != r:
                raise ModelError(f"atom {x}: representative {r} is not its own representative")

    @classmethod
    def from_classes(cls, space: FiniteSpace, groups) -> "Relation":
        """Build from lists of atoms; atoms left unlisted become singletons."""
        parent = list(range(space.n))
        seen = [False] * space.n
        for group in groups:
            members = sorted(group)
            for x in members:
                if not 0 <= x < space.n:
                    raise ModelError(f"class member {x} outside 0..{space.n - 1}")
                if seen[x]:
                    raise ModelError(f"atom {x} listed in two classes")
                seen[x] = True
                parent[x] = members[0]
        return cls(space, parent)

    def class_count(self) -> int:
        return sum(1 for x, r in enumerate(self.parent) if x == r)

    def classes(self) -> list[list[int]]:
        """Classes as ascending atom lists, ordered by representative."""
        groups: dict[int, list[int]] = {}
        for x, r in enumerate(self.parent):
            groups.setdefault(r, []).append(x)
        return [groups[r] for r in sorted(groups)]

    def same_class(self, x: int, y: int) -> bool:
        return self.parent[x] == self.parent[y]


@dataclass(frozen=True)
class Subset:
    """A set of atoms with its weight."""

    space: FiniteSpace
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for x in self.members:
            if not 0 <= x < self.space.n:
                raise ModelError(f"subset member {x} outside 0..{self.space.n - 1}")

    @property
    def measure(self) -> Fraction:
        return self.space.measure(len(self.members))

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members


@dataclass(frozen=True)
class EdgeSet:
    """Ordered atom pairs with set semantics; repeats collapse, loops stay."""

    space: FiniteSpace
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        for x, y in self.edges:
            if not (0 <= x < self.space.n and 0 <= y < self.space.n):
                raise ModelError(f"edge ({x}, {y}) leaves 0..{self.space.n - 1}")


def cost(g: Graphing) -> Fraction:
    """Total weight of the map domains, counted with multiplicity."""
    return g.space.measure(sum(len(m.mapping) for m in g.maps))


def to_edge_set(g: Graphing) -> EdgeSet:
    """Forget names and multiplicity; keep the distinct ordered pairs."""
    pairs: set[tuple[int, int]] = set()
    for m in g.maps:
        pairs.update(m.mapping.items())
    return EdgeSet(g.space, frozenset(pairs))


def nu_measure(edges: EdgeSet) -> Fraction:
    """Weight of an edge set: one atom weight per distinct pair."""
    return edges.space.measure(len(edges.edges))


def generated_relation(g: Graphing) -> Relation:
    """Smallest equivalence relation joining every source to its target."""
    uf = UnionFind(g.space.n)
    union = uf.union
    for m in g.maps:
        for x, y in m.mapping.items():
            union(x, y)
    return Relation(g.space, uf.canonical())


def generates(g: Graphing, r: Relation) -> bool:
    if g.space != r.space:
        raise ModelError("graphing and relation live on different spaces")
    return generated_relation(g).parent == r.parent


def is_treeing(g: Graphing) -> bool:
    """True when the multigraph of (map, source) entries is a forest.

    Every entry counts as its own edge, so loops, parallel copies and
    mutually inverse duplicates all create cycles.
    """
    uf = UnionFind(g.space.n)
    for m in g.maps:
        for x, y in m.mapping.items():
            if x == y or not uf.union(x, y):
                return False
    return True


def min_cost(r: Relation) -> Fraction:
    """(n - c)/n for c classes; the spanning-forest bound."""
    return r.space.measure(r.space.n - r.class_count())


def transversal(r: Relation) -> Subset:
    """The least atom of every class; its weight is c/n."""
    return Subset(r.space, frozenset(x for x, p in enumerate(r.parent) if x == p))


def spanning_treeing(r: Relation) -> Graphing:
    """One partial map chaining each class in ascending order.

    Every non-representative atom points at its predecessor within the class,
    which keeps the map injective and its entries spanning paths.  The result
    generates r at cost (n - c)/n exactly.
    """
    last: dict[int, int] = {}
    mapping: dict[int, int] = {}
    for x, rep in enumerate(r.parent):
        if rep in last:
            mapping[x] = last[rep]
        last[rep] = x
    return Graphing(r.space, [PartialMap("forest", r.space, mapping)])


def reduce_to_treeing(g: Graphing) -> Graphing:
    """Delete entries until the survivors form a spanning forest.

    Scans maps in list order and sources ascending, keeping an entry exactly
    when it joins two still-separate components.  The survivors generate the
    same relation at its minimal cost; a treeing passes through unchanged.
    """
    uf = UnionFind(g.space.n)
    kept_maps = []
    for m in g.maps:
        kept: dict[int, int] = {}
        for x in sorted(m.mapping):
            y = m.mapping[x]
            if x != y and uf.union(x, y):
                kept[x] = y
        kept_maps.append(PartialMap(m.name, g.space, kept))
    return Graphing(g.space, kept_maps)


def single_full_generator(r: Relation) -> PartialMap:
    """A permutation cycling every class in ascending order, cost exactly 1."""
    mapping: dict[int, int] = {}
    for group in r.classes():
        for pos, x in enumerate(group):
            mapping[x] = group[(pos + 1) % len(group)]
    return PartialMap("cycles", r.space, mapping)


def _require_permutation(psi: PartialMap):
    if not psi.is_full():
        raise ModelError(
            f"map {psi.name!r} must be a full permutation, its domain has "
            f"{len(psi.mapping)} of {psi.space.n} atoms")


def _require_atom(space: FiniteSpace, x: int):
    if not 0 <= x < space.n:
        raise ModelError(f"atom {x} outside 0..{space.n - 1}")


def orbit_exponent(psi: PartialMap, x: int, y: int) -> int:
    """Signed iterate count taking x to y along psi's cycle.

    Returns the k of smallest absolute value with psi^k(x) == y, preferring
    the forward direction on ties, and 0 when x == y.
    """
    _require_permutation(psi)
    _require_atom(psi.space, x)
    _require_atom(psi.space, y)
    if x == y:
        return 0
    forward = None
    length = 0
    z = x
    while True:
        z = psi.mapping[z]
        length += 1
        if z == y and forward is None:
            forward = length
        if z == x:
            break
    if forward is None:
        raise NotInSameCycleError(
            f"atoms {x} and {y} lie in different cycles of {psi.name!r}")
    return forward if forward <= length - forward else forward - length


def first_return_map(psi: PartialMap, a: Subset) -> PartialMap:
    """Send each atom of a to the first point where its forward orbit re-enters a.

    Within any single cycle the return times add up to the cycle length, so
    the induced map is a bijection of a onto itself.
    """
    _require_permutation(psi)
    if psi.space != a.space:
        raise ModelError("map and subset live on different spaces")
    if not a.members:
        raise ModelError("first return needs a nonempty subset")
    members = a.members
    step = psi.mapping
    mapping: dict[int, int] = {}
    for x in sorted(members):
        z = step[x]
        while z not in members:
            z = step[z]
        mapping[x] = z
    return PartialMap(f"{psi.name}_return", psi.space, mapping)


def restrict_map(g: Graphing, map_name: str, a: Subset) -> Graphing:
    """Shrink one map's domain to a, leaving the other maps alone."""
    if g.space != a.space:
        raise ModelError("graphing and subset live on different spaces")
    out = []
    found = False
    for m in g.maps:
        if m.name == map_name:
            found = True
            out.append(PartialMap(m.name, g.space,
                                  {x: y for x, y in m.mapping.items() if x in a.members}))
        else:
            out.append(m)
    if not found:
        raise ModelError(f"no map named {map_name!r}")
    return Graphing(g.space, out)


def restrict_relation(r: Relation, a: Subset) -> Relation:
    """The trace of r on a, re-indexed onto 0..|a|-1 in ascending atom order."""
    if r.space != a.space:
        raise ModelError("relation and subset live on different spaces")
    if not a.members:
        raise ModelError("cannot restrict to the empty subset")
    members = sorted(a.members)
    first: dict[int, int] = {}
    parent = []
    for i, x in enumerate(members):
        rep = r.parent[x]
        if rep not in first:
            first[rep] = i
        parent.append(first[rep])
    return Relation(FiniteSpace(len(members)), parent)


def compression_sides(r: Relation, a: Subset) -> tuple[Fraction, Fraction]:
    """Both sides of the finite compression identity for a subset meeting every class.

    lhs is min_cost of the re-indexed trace minus one; rhs is the weight of a
    times (min_cost(r) - 1).  On a finite space lhs <= rhs, with equality
    exactly when a is the whole space.
    """
    if r.space != a.space:
        raise ModelError("relation and subset live on different spaces")
    reps_met = {r.parent[x] for x in a.members}
    if len(reps_met) != r.class_count():
        missed = next(x for x, p in enumerate(r.parent) if x == p and x not in reps_met)
        raise ModelError(f"subset misses the class of atom {missed}")
    lhs = min_cost(restrict_relation(r, a)) - 1
    rhs = a.measure * (min_cost(r) - 1)
    return lhs, rhs


def brute_force_min_cost(r: Relation, edge_budget: int = 20) -> Fraction:
    """Exhaustive minimum of nu over edge sets regenerating r.

    Edges can only join atoms of one class, so the search runs class by
    class, scanning subsets of each class's pair universe in order of size
    and keeping the first connecting size.  Refuses to run when the whole
    universe exceeds edge_budget.
    """
    groups = [c for c in r.classes() if len(c) > 1]
    universe = sum(len(c) * (len(c) - 1) // 2 for c in groups)
    if universe > edge_budget:
        raise EdgeBudgetError(
            f"edge universe has {universe} pairs, the budget is {edge_budget}")
    total = 0
    for group in groups:
        size = len(group)
        pairs = list(combinations(range(size), 2))
        for k in range(size):  # some (size-1)-subset always connects
            found = False
            for combo in combinations(pairs, k):
                uf = UnionFind(size)
                for i, j in combo:
                    uf.union(i, j)
                if uf.components == 1:
                    found = True
                    break
            if found:
                total += k
                break
    return r.space.measure(total)

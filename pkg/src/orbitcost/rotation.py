"""Cyclic rotation systems: finite stand-ins for circle rotations.

The space is Z/nZ and each named step s acts by x -> x + s (mod n).  A step
size coprime to n plays the role of an irrational angle: on its own it
already visits every atom.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .relcore import (
    FiniteSpace,
    Graphing,
    ModelError,
    PartialMap,
    Relation,
    Subset,
    cost,
    generates,
)


class UnreachableArcError(ModelError):
    """No forward iterate of the step lands in the arc."""


@dataclass
class RotationSystem:
    """n atoms with an ordered family of named steps, stored reduced mod n."""

    n: int
    steps: dict[str, int]

    def __post_init__(self):
        if self.n < 1:
            raise ModelError(f"a rotation system needs n >= 1, got {self.n}")
        for name in self.steps:
            if not isinstance(name, str) or not name:
                raise ModelError(f"step name {name!r} must be a nonempty string")
        self.steps = {name: s % self.n for name, s in self.steps.items()}

    @property
    def space(self) -> FiniteSpace:
        return FiniteSpace(self.n)


@dataclass(frozen=True)
class Arc:
    """length consecutive atoms from start, wrapping modulo n."""

    start: int
    length: int

    def check(self, n: int):
        if not 0 <= self.start < n:
            raise ModelError(f"arc start {self.start} outside 0..{n - 1}")
        if not 0 <= self.length <= n:
            raise ModelError(f"arc length {self.length} outside 0..{n}")

    def contains(self, x: int, n: int) -> bool:
        return (x - self.start) % n < self.length

    def atoms(self, n: int) -> list[int]:
        return [(self.start + i) % n for i in range(self.length)]

    def subset(self, space: FiniteSpace) -> Subset:
        self.check(space.n)
        return Subset(space, frozenset(self.atoms(space.n)))


def expected_relation(sys: RotationSystem) -> Relation:
    """Cosets of g = gcd(n, all steps): the orbit partition of the full action."""
    g = math.gcd(sys.n, *sys.steps.values())
    return Relation(sys.space, [x % g for x in range(sys.n)])


def full_graphing(sys: RotationSystem) -> Graphing:
    """Every step on its full domain."""
    space = sys.space
    n = sys.n
    maps = [PartialMap(name, space, {x: (x + s) % n for x in range(n)})
            for name, s in sys.steps.items()]
    return Graphing(space, maps)


def epsilon_graphing(sys: RotationSystem, full_step: str, arc: Arc) -> Graphing:
    """Keep one step everywhere and restrict every other step to the arc.

    Costs 1 + (k-1) * length/n for k steps.  When the full step is coprime
    to n the family still generates the whole orbit partition, because any
    restricted jump can be reached through the arc.
    """
    if len(sys.steps) < 2:
        raise ModelError("need at least two steps to restrict against a full one")
    if full_step not in sys.steps:
        raise ModelError(f"no step named {full_step!r}")
    arc.check(sys.n)
    space = sys.space
    n = sys.n
    arc_atoms = arc.atoms(n)
    maps = []
    for name, s in sys.steps.items():
        if name == full_step:
            maps.append(PartialMap(name, space, {x: (x + s) % n for x in range(n)}))
        else:
            maps.append(PartialMap(name, space, {x: (x + s) % n for x in arc_atoms}))
    return Graphing(space, maps)


def first_hitting_time(n: int, step: int, x: int, arc: Arc) -> int:
    """Least m >= 0 with x + m*step inside the arc (mod n).

    Solved atom by atom through the modular inverse of step/gcd, so the work
    grows with the arc length, never with n.
    """
    if n < 1:
        raise ModelError(f"modulus must be positive, got {n}")
    arc.check(n)
    if not 0 <= x < n:
        raise ModelError(f"atom {x} outside 0..{n - 1}")
    step %= n
    g = math.gcd(step, n)
    span = n // g
    inv = pow(step // g, -1, span) if span > 1 else 0
    best = None
    for t in arc.atoms(n):
        d = (t - x) % n
        if d % g:
            continue
        m = (d // g) * inv % span
        if best is None or m < best:
            best = m
    if best is None:
        raise UnreachableArcError(
            f"step {step} from atom {x} never enters the arc at {arc.start} of length {arc.length}")
    return best


@dataclass(frozen=True)
class Segment:
    """count repeats of one elementary jump; power -1 means the inverse step."""

    step: str
    power: int
    count: int


@dataclass
class Path:
    """A run-length encoded walk across the rotation graph."""

    n: int
    start: int
    end: int
    hit: int
    segments: list[Segment]

    @property
    def length(self) -> int:
        return sum(seg.count for seg in self.segments)

    def elementary(self, sys: RotationSystem):
        """Yield (step, power, source, target), one jump at a time."""
        z = self.start
        for seg in self.segments:
            delta = sys.steps[seg.step] * seg.power
            for _ in range(seg.count):
                w = (z + delta) % self.n
                yield seg.step, seg.power, z, w
                z = w


def connection_path(sys: RotationSystem, full_step: str, restricted_step: str,
                    arc: Arc, x: int) -> Path:
    """Rebuild a restricted jump from x using full jumps on either side.

    Rides the full step m times into the arc, applies the restricted step
    once, then rides the full step back: 2m+1 jumps landing on x + s_b.  The
    endpoint identity and the arc membership of the restricted jump's source
    are both checked before returning.
    """
    for name in (full_step, restricted_step):
        if name not in sys.steps:
            raise ModelError(f"no step named {name!r}")
    if full_step == restricted_step:
        raise ModelError("the restricted step must differ from the full step")
    if not 0 <= x < sys.n:
        raise ModelError(f"atom {x} outside 0..{sys.n - 1}")
    sa = sys.steps[full_step]
    sb = sys.steps[restricted_step]
    m = first_hitting_time(sys.n, sa, x, arc)
    segments = []
    if m:
        segments.append(Segment(full_step, 1, m))
    segments.append(Segment(restricted_step, 1, 1))
    if m:
        segments.append(Segment(full_step, -1, m))
    z = x  # walk the segments to get the endpoint the long way
    for seg in segments:
        z = (z + sys.steps[seg.step] * seg.power * seg.count) % sys.n
    hit = (x + m * sa) % sys.n
    if z != (x + sb) % sys.n:
        raise AssertionError("rotation arithmetic broke the endpoint identity")
    if not arc.contains(hit, sys.n):
        raise AssertionError("hitting time left the restricted jump outside its arc")
    return Path(sys.n, x, z, hit, segments)


@dataclass(frozen=True)
class CurveRow:
    eps: Fraction
    arc_len: int
    cost: Fraction
    generates: bool


@dataclass
class CostCurve:
    rows: list[CurveRow]
    infimum: Fraction | None


def _exact_eps(value) -> Fraction:
    if isinstance(value, float):
        raise ModelError(
            f"eps {value!r} is a float; pass a ratio string or Fraction instead")
    try:
        eps = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ModelError(f"cannot read {value!r} as an exact ratio") from None
    if not 0 < eps <= 1:
        raise ModelError(f"eps must lie in (0, 1], got {eps}")
    return eps


def cost_epsilon_curve(sys: RotationSystem, full_step: str, eps_values) -> CostCurve:
    """Cost of the restricted family as the arc shrinks.

    One row per eps value: the arc is the first ceil(eps * n) atoms, the cost
    column is exact, and the generates column re-derives the orbit partition
    from scratch.  When the full step is coprime to n the infimum value 1 is
    reported; otherwise no infimum is claimed.
    """
    if len(sys.steps) < 2:
        raise ModelError("need at least two steps to restrict against a full one")
    if full_step not in sys.steps:
        raise ModelError(f"no step named {full_step!r}")
    expected = expected_relation(sys)
    rows = []
    for value in eps_values:
        eps = _exact_eps(value)
        arc_len = -(-eps.numerator * sys.n // eps.denominator)  # ceil(eps * n)
        g = epsilon_graphing(sys, full_step, Arc(0, arc_len))
        rows.append(CurveRow(eps, arc_len, cost(g), generates(g, expected)))
    infimum = Fraction(1) if math.gcd(sys.steps[full_step], sys.n) == 1 else None
    return CostCurve(rows, infimum)

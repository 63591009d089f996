"""Finite abelian groups as products of cyclic factors.

Elements are coordinate tuples with componentwise modular arithmetic.
Characters are indexed by group elements through the standard pairing

    chi_b(g) = exp(-2*pi*i * sum_t b[t]*g[t]/d[t]),

so the dual group is identified with the group itself once and for all.
The sign convention (negative exponent) makes ``character_table(Z_n)``
coincide with the usual DFT matrix.  Values whose phase is a multiple of
a quarter turn are snapped to exact ``1, -1, i, -i`` so that tables of
exponent-2 and exponent-4 groups come out bit-exact.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, InvalidParameterError

# Materializing all elements (or the full character table) is only
# supported up to this order; single character values stay available
# for anything larger.
MAX_MATERIALIZED_ORDER = 10**6

_QUARTER_ROOTS = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)


@dataclass(frozen=True)
class AbelianGroup:
    """Direct sum of cyclic groups Z_{d_1} + ... + Z_{d_r}."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise InvalidParameterError("group needs at least one cyclic factor")
        for d in self.factors:
            if d < 2:
                raise InvalidParameterError(f"cyclic factor {d} < 2")
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent_lcm(self) -> int:
        return math.lcm(*self.factors)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.factors))

    def elements(self) -> tuple["GroupElement", ...]:
        """All elements in lexicographic coordinate order."""
        if self.order > MAX_MATERIALIZED_ORDER:
            raise CapacityError(
                f"group of order {self.order} exceeds the materialization cap"
            )
        return tuple(
            GroupElement(self, coords)
            for coords in itertools.product(*(range(d) for d in self.factors))
        )

    def character(self, label: Sequence[int] | "GroupElement") -> "Character":
        if isinstance(label, GroupElement):
            if label.group != self:
                raise DomainError("character label belongs to a different group")
            return Character(label)
        return Character(self.element(label))

    def characters(self) -> tuple["Character", ...]:
        """All characters, ordered by their labels (lexicographic)."""
        return tuple(Character(g) for g in self.elements())

    def __repr__(self) -> str:
        return "Z" + "xZ".join(str(d) for d in self.factors)


@dataclass(frozen=True)
class GroupElement:
    """Element of an :class:`AbelianGroup`, stored as reduced coordinates."""

    group: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        factors = self.group.factors
        if len(self.coords) != len(factors):
            raise DomainError(
                f"expected {len(factors)} coordinates, got {len(self.coords)}"
            )
        object.__setattr__(
            self, "coords", tuple(int(c) % d for c, d in zip(self.coords, factors))
        )

    def _check_same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise DomainError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check_same_group(other)
        return GroupElement(
            self.group, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-c for c in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check_same_group(other)
        return GroupElement(
            self.group, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __lt__(self, other: "GroupElement") -> bool:
        self._check_same_group(other)
        return self.coords < other.coords

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _phase_numerator(label: GroupElement, g: GroupElement) -> tuple[int, int]:
    """Exact character phase as (numerator, L) with phase = num/L mod 1."""
    group = label.group
    L = group.exponent_lcm
    num = 0
    for b, c, d in zip(label.coords, g.coords, group.factors):
        num += b * c * (L // d)
    return num % L, L


def _root_of_unity(num: int, L: int) -> complex:
    """exp(-2*pi*i*num/L) with exact values on quarter turns."""
    if (4 * num) % L == 0:
        return _QUARTER_ROOTS[(4 * num) // L]
    angle = -2.0 * math.pi * (num / L)
    return complex(math.cos(angle), math.sin(angle))


@dataclass(frozen=True)
class Character:
    """Character of a finite abelian group, indexed by a group element."""

    label: GroupElement

    @property
    def group(self) -> AbelianGroup:
        return self.label.group

    def is_principal(self) -> bool:
        return self.label.is_identity()

    def phase(self, g: GroupElement) -> Fraction:
        """Exact phase in [0, 1): the character value is exp(-2*pi*i*phase)."""
        if g.group != self.group:
            raise DomainError("character and element belong to different groups")
        num, L = _phase_numerator(self.label, g)
        return Fraction(num, L)

    def __call__(self, g: GroupElement) -> complex:
        if g.group != self.group:
            raise DomainError("character and element belong to different groups")
        return _root_of_unity(*_phase_numerator(self.label, g))

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.label + other.label)

    def value_on_set(self, subset: Iterable[GroupElement]) -> complex:
        """Sum of character values over a subset."""
        return sum((self(g) for g in subset), 0.0 + 0.0j)

    def __repr__(self) -> str:
        return f"chi{self.label!r}"


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by its full (sorted) element list."""

    parent: AbelianGroup
    elements: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "elements", tuple(sorted(set(self.elements), key=lambda e: e.coords))
        )
        elems = set(self.elements)
        if not elems:
            raise DomainError("subgroup cannot be empty")
        for e in self.elements:
            if e.group != self.parent:
                raise DomainError("subgroup element outside the parent group")
        if self.parent.identity() not in elems:
            raise DomainError("subgroup must contain the identity")
        for a in self.elements:
            if -a not in elems:
                raise DomainError("subgroup not closed under negation")
            for b in self.elements:
                if a + b not in elems:
                    raise DomainError("subgroup not closed under addition")
        if self.parent.order % len(self.elements) != 0:
            raise DomainError("subgroup size does not divide the group order")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self.elements)


def make_group(factors: Sequence[int]) -> AbelianGroup:
    """Build the direct sum of cyclic groups with the given orders."""
    return AbelianGroup(tuple(factors))


def char_value(chi: Character, g: GroupElement) -> complex:
    """Value of a character at a group element (unit modulus)."""
    return chi(g)


def character_table(G: AbelianGroup) -> np.ndarray:
    """Square table of character values.

    Rows are indexed by group elements in lexicographic order, columns by
    character labels in the same order, so entry (g, b) is chi_b(g).  The
    table divided by sqrt(|G|) is unitary.
    """
    n = G.order
    if n > MAX_MATERIALIZED_ORDER:
        raise CapacityError(f"group of order {n} exceeds the table cap")
    L = G.exponent_lcm
    coords = np.array(
        list(itertools.product(*(range(d) for d in G.factors))), dtype=np.int64
    )
    weights = np.array([L // d for d in G.factors], dtype=np.int64)
    phase_num = (coords @ (coords * weights).T) % L
    table = np.exp((-2j * np.pi / L) * phase_num)
    quarter = (4 * phase_num) % L == 0
    if quarter.any():
        idx = (4 * phase_num[quarter]) // L
        table[quarter] = np.asarray(_QUARTER_ROOTS, dtype=complex)[idx]
    return table


def subgroup_generated(G: AbelianGroup, gens: Iterable[GroupElement]) -> Subgroup:
    """Closure of the given generators under addition."""
    gens = list(gens)
    for g in gens:
        if g.group != G:
            raise DomainError("generator outside the group")
    closure = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        current = frontier.pop()
        for g in gens:
            nxt = current + g
            if nxt not in closure:
                closure.add(nxt)
                frontier.append(nxt)
    return Subgroup(G, tuple(closure))


def annihilator(G: AbelianGroup, N: Subgroup) -> Subgroup:
    """Character labels whose characters are exactly 1 on all of N.

    The result is returned as a subgroup of label elements; its size is
    always |G| / |N|.
    """
    if N.parent != G:
        raise DomainError("subgroup belongs to a different group")
    labels = []
    for b in G.elements():
        if all(_phase_numerator(b, h)[0] == 0 for h in N.elements):
            labels.append(b)
    result = Subgroup(G, tuple(labels))
    if result.order * N.order != G.order:
        raise AssertionError("annihilator size mismatch")  # pragma: no cover
    return result


def coset_reps(G: AbelianGroup, N: Subgroup) -> tuple[GroupElement, ...]:
    """Smallest-lexicographic coset representatives of G/N, identity first."""
    if N.parent != G:
        raise DomainError("subgroup belongs to a different group")
    seen: set[GroupElement] = set()
    reps = []
    for g in G.elements():
        if g in seen:
            continue
        reps.append(g)
        for h in N.elements:
            seen.add(g + h)
    return tuple(reps)


# --- JSON wire formats -------------------------------------------------

def group_to_json(G: AbelianGroup) -> dict:
    return {"factors": list(G.factors)}


def group_from_json(doc: dict) -> AbelianGroup:
    return make_group(doc["factors"])


def element_to_json(g: GroupElement) -> list[int]:
    return list(g.coords)


def element_from_json(G: AbelianGroup, doc: Sequence[int]) -> GroupElement:
    return G.element(doc)


def subgroup_to_json(N: Subgroup) -> dict:
    return {"generators": [element_to_json(e) for e in N.elements]}


def subgroup_from_json(G: AbelianGroup, doc: dict) -> Subgroup:
    gens = [element_from_json(G, c) for c in doc["generators"]]
    return subgroup_generated(G, gens)

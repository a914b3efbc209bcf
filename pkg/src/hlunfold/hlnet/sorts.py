"""Finite color domains.

Values are kept in their raw form for speed: a scalar value is its 0-based
index in the sort enumeration, a product value is a tuple of component
values. A value is only meaningful together with the sort that types it,
and that sort is always known statically from the expression annotation.
"""

import enum
import functools
import itertools
import math
from dataclasses import dataclass, field

from hlunfold.errors import UndefinedSuccessor


class SortKind(str, enum.Enum):
    DOT = "dot"
    FINITE_ENUM = "finite-enum"
    CYCLIC_ENUM = "cyclic-enum"
    INT_RANGE = "int-range"
    PRODUCT = "product"
    PARTITION = "partition-view"


@dataclass(frozen=True)
class PartitionElement:
    id: str
    name: str
    index: int
    members: tuple  # indices into the base sort


@dataclass(frozen=True)
class Sort:
    """A finite, totally ordered color domain.

    ``constants`` holds display names for enumerations, ``bounds`` the
    inclusive integer range for int ranges, ``components`` the factors of a
    product (or the single base sort of a partition view). Equality is
    structural, so two parses of one document yield equal sorts.
    """

    id: str
    kind: SortKind
    constants: tuple = ()
    bounds: tuple = None
    components: tuple = ()
    elements: tuple = ()
    _element_of: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind is SortKind.INT_RANGE:
            lo, hi = self.bounds
            if lo > hi:
                raise ValueError(f"empty integer range {lo}..{hi}")
        if self.kind in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM) and not self.constants:
            raise ValueError(f"enumeration {self.id!r} has no constants")
        if self.kind is SortKind.PARTITION:
            lookup = {}
            for elem in self.elements:
                for m in elem.members:
                    lookup[m] = elem.index
            object.__setattr__(self, "_element_of", lookup)

    def __repr__(self):
        return f"Sort({self.id!r}, {self.kind.value})"

    def __hash__(self):
        return hash((self.id, self.kind))

    @property
    def base(self):
        """The sort whose values this sort carries (itself unless partition)."""
        return self.components[0] if self.kind is SortKind.PARTITION else self

    @property
    def is_scalar(self):
        return self.kind is not SortKind.PRODUCT

    @property
    def is_ordered(self):
        return self.base.kind in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM, SortKind.INT_RANGE)

    @functools.cached_property
    def size(self):
        k = self.kind
        if k is SortKind.DOT:
            return 1
        if k in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM):
            return len(self.constants)
        if k is SortKind.INT_RANGE:
            return self.bounds[1] - self.bounds[0] + 1
        if k is SortKind.PRODUCT:
            return math.prod(c.size for c in self.components)
        return self.components[0].size

    @functools.cached_property
    def values(self):
        """Every value of the sort, in canonical order."""
        if self.kind is SortKind.PRODUCT:
            return tuple(itertools.product(*(c.values for c in self.components)))
        if self.kind is SortKind.PARTITION:
            return self.components[0].values
        return tuple(range(self.size))

    def contains(self, v):
        if self.kind is SortKind.PRODUCT:
            return (isinstance(v, tuple) and len(v) == len(self.components)
                    and all(c.contains(x) for c, x in zip(self.components, v)))
        return isinstance(v, int) and 0 <= v < self.size

    def face(self, v):
        """Display fragments of ``v``, one per scalar component (dot has none)."""
        k = self.kind
        if k is SortKind.DOT:
            return []
        if k in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM):
            return [self.constants[v]]
        if k is SortKind.INT_RANGE:
            return [str(self.bounds[0] + v)]
        if k is SortKind.PRODUCT:
            return [f for c, x in zip(self.components, v) for f in c.face(x)]
        return self.components[0].face(v)

    def display(self, v):
        if self.kind is SortKind.DOT:
            return "dot"
        if self.kind is SortKind.PRODUCT:
            return "(" + ", ".join(c.display(x) for c, x in zip(self.components, v)) + ")"
        return self.face(v)[0]

    def numeric(self, v):
        """Face value of an int-range value."""
        return self.base.bounds[0] + v

    def successor(self, v):
        base = self.base
        if base.kind is SortKind.CYCLIC_ENUM:
            return (v + 1) % base.size
        if v + 1 >= base.size:
            raise UndefinedSuccessor(f"no successor of {base.display(v)} in {base.id}")
        return v + 1

    def predecessor(self, v):
        base = self.base
        if base.kind is SortKind.CYCLIC_ENUM:
            return (v - 1) % base.size
        if v == 0:
            raise UndefinedSuccessor(f"no predecessor of {base.display(v)} in {base.id}")
        return v - 1

    def element_of(self, v):
        """Index of the partition element containing ``v``."""
        return self._element_of[v]


DOT = Sort("dot", SortKind.DOT)


def sort_size(s):
    return s.size


def enumerate_sort(s):
    return list(s.values)


def successor(s, v):
    return s.successor(v)


def predecessor(s, v):
    return s.predecessor(v)


def compatible(a, b):
    """Type compatibility: same declaration, or structurally equal anonymous shapes."""
    if a is b or a.base == b.base:
        return True
    if a.kind is not b.kind:
        return False
    if a.kind is SortKind.DOT:
        return True
    if a.kind is SortKind.INT_RANGE:
        return tuple(a.bounds) == tuple(b.bounds)
    if a.kind is SortKind.PRODUCT:
        return (len(a.components) == len(b.components)
                and all(compatible(x, y) for x, y in zip(a.components, b.components)))
    return False


def cyclic_enum(id, names):
    return Sort(id, SortKind.CYCLIC_ENUM, constants=tuple(names))


def finite_enum(id, names):
    return Sort(id, SortKind.FINITE_ENUM, constants=tuple(names))


def int_range(id, lo, hi):
    return Sort(id, SortKind.INT_RANGE, bounds=(lo, hi))


def product(id, components):
    return Sort(id, SortKind.PRODUCT, components=tuple(components))


def partition(id, base, elements):
    """``elements`` is a sequence of ``(id, name, member indices)``."""
    elems = tuple(PartitionElement(eid, name, i, tuple(members))
                  for i, (eid, name, members) in enumerate(elements))
    return Sort(id, SortKind.PARTITION, components=(base,), elements=elems)

"""Place/transition nets produced by unfolding."""

import re
from dataclasses import dataclass, field

CONSUME = "consume"
PRODUCE = "produce"


@dataclass
class CorePlace:
    name: str
    marking: int = 0
    origin: tuple = field(default=None, compare=False)  # (hl place id, value)


@dataclass
class CoreTransition:
    name: str
    inputs: list = field(default_factory=list)   # (place index, weight)
    outputs: list = field(default_factory=list)
    origin: tuple = field(default=None, compare=False)  # (hl transition id, binding)


@dataclass
class CoreNet:
    name: str
    places: list = field(default_factory=list)
    transitions: list = field(default_factory=list)

    @property
    def arcs(self):
        """Flat arc list ``(transition index, place index, direction, weight)``."""
        out = []
        for i, t in enumerate(self.transitions):
            out.extend((i, p, CONSUME, w) for p, w in t.inputs)
            out.extend((i, p, PRODUCE, w) for p, w in t.outputs)
        return out

    def marking(self):
        return tuple(p.marking for p in self.places)

    def validate(self):
        """Raise ValueError unless the structural invariants hold."""
        names = set()
        for node in (*self.places, *self.transitions):
            if node.name in names:
                raise ValueError(f"duplicate identifier {node.name!r}")
            names.add(node.name)
        for p in self.places:
            if p.marking < 0:
                raise ValueError(f"negative marking on {p.name!r}")
        for t in self.transitions:
            for p, w in (*t.inputs, *t.outputs):
                if not 0 <= p < len(self.places):
                    raise ValueError(f"arc of {t.name!r} references place index {p}")
                if w < 1:
                    raise ValueError(f"non-positive weight on {t.name!r}")


_UNSAFE = re.compile(r"[^A-Za-z0-9_]")


def sanitize(text):
    return _UNSAFE.sub("_", text)


class Mangler:
    """Hands out unique identifiers within one net.

    A name is the base id followed by the value fragments, joined with
    ``_`` and sanitized; a name already handed out gets a numeric suffix.
    """

    def __init__(self):
        self.used = set()

    def __call__(self, base, fragments=()):
        name = sanitize("_".join([base, *fragments]))
        if name in self.used:
            k = 1
            while f"{name}_{k}" in self.used:
                k += 1
            name = f"{name}_{k}"
        self.used.add(name)
        return name

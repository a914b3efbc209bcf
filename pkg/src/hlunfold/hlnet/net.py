"""The typed high-level net."""

from dataclasses import dataclass, field

from hlunfold.hlnet import expr as X
from hlunfold.hlnet.expr import TRUE, eval_expression, variables
from hlunfold.hlnet.multiset import Multiset


@dataclass(frozen=True)
class Variable:
    id: str
    name: str
    sort: object


@dataclass
class SortTable:
    """Resolved declarations, keyed by PNML id. Insertion order is declaration order."""

    sorts: dict = field(default_factory=dict)
    variables: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)  # id -> (Sort, index)
    partition_elements: dict = field(default_factory=dict)  # id -> (Sort, PartitionElement)

    def sort(self, id):
        return self.sorts[id]


@dataclass(frozen=True)
class Place:
    id: str
    sort: object
    marking: object = None  # ground expression, None for empty
    label: str = None


@dataclass(frozen=True)
class Transition:
    id: str
    guard: object = TRUE
    label: str = None


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    inscription: object
    id: str = None


@dataclass(eq=True)
class HLNet:
    name: str
    places: tuple
    transitions: tuple
    arcs: tuple
    declarations: SortTable = field(default_factory=SortTable)

    def __post_init__(self):
        self.places = tuple(self.places)
        self.transitions = tuple(self.transitions)
        self.arcs = tuple(self.arcs)
        self._places = {p.id: p for p in self.places}
        self._transitions = {t.id: t for t in self.transitions}
        self._inputs = {t.id: [] for t in self.transitions}
        self._outputs = {t.id: [] for t in self.transitions}
        for arc in self.arcs:
            if arc.source in self._places and arc.target in self._inputs:
                self._inputs[arc.target].append(arc)
            elif arc.source in self._outputs and arc.target in self._places:
                self._outputs[arc.source].append(arc)
            else:
                raise ValueError(f"arc {arc.source}->{arc.target} must join a place and a transition")

    def __eq__(self, other):
        if not isinstance(other, HLNet):
            return NotImplemented
        return (self.name, self.places, self.transitions, self.arcs, self.declarations) == \
            (other.name, other.places, other.transitions, other.arcs, other.declarations)

    def place(self, id):
        return self._places[id]

    def transition(self, id):
        return self._transitions[id]

    def inputs(self, t):
        """Arcs from places into transition ``t`` (an id), in document order."""
        return self._inputs[t]

    def outputs(self, t):
        return self._outputs[t]

    def arcs_of(self, t):
        return self._inputs[t] + self._outputs[t]

    def initial_marking(self, p):
        place = self._places[p]
        if place.marking is None:
            return Multiset()
        return eval_expression(place.marking, {})


def environment(net, t):
    """Variables a binding of transition ``t`` must fix, in declaration order."""
    tr = net.transition(t)
    found = {}
    for arc in net.arcs_of(t):
        for v in variables(arc.inscription):
            found.setdefault(v, None)
    for v in variables(tr.guard):
        found.setdefault(v, None)
    declared = [v for v in net.declarations.variables if v in found]
    rest = [v for v in found if v not in net.declarations.variables]
    return declared + rest


def variable_sorts(net, t):
    """Map each environment variable of ``t`` to its sort, read off the expressions."""
    sorts = {}

    def walk(e):
        if isinstance(e, X.Var):
            sorts.setdefault(e.name, e.sort)
        elif isinstance(e, X.Compare):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, (X.And, X.Or)):
            for a in e.args:
                walk(a)
        else:
            for c in X.children(e):
                walk(c)

    for arc in net.arcs_of(t):
        walk(arc.inscription)
    walk(net.transition(t).guard)
    return sorts

"""Multiset expressions, guards, and their evaluation."""

import enum
import functools
from dataclasses import dataclass

from hlunfold.errors import UndefinedSuccessor
from hlunfold.hlnet.multiset import Multiset
from hlunfold.hlnet.sorts import Sort, SortKind, PartitionElement


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort


@dataclass(frozen=True)
class Const:
    value: object
    sort: Sort


@dataclass(frozen=True)
class Successor:
    arg: object
    sort: Sort


@dataclass(frozen=True)
class Predecessor:
    arg: object
    sort: Sort


@dataclass(frozen=True)
class Tuple:
    args: tuple
    sort: Sort


@dataclass(frozen=True)
class All:
    sort: Sort


@dataclass(frozen=True)
class Add:
    args: tuple
    sort: Sort


@dataclass(frozen=True)
class Subtract:
    left: object
    right: object
    sort: Sort


@dataclass(frozen=True)
class NumberOf:
    count: int
    arg: object
    sort: Sort


@dataclass(frozen=True)
class PartElem:
    """Reference to a partition element; ``sort`` is the partition sort."""
    element: PartitionElement
    sort: Sort


SCALAR_TERMS = (Var, Const, Successor, Predecessor, Tuple)


def children(e):
    if isinstance(e, (Successor, Predecessor, NumberOf)):
        return (e.arg,)
    if isinstance(e, (Tuple, Add)):
        return e.args
    if isinstance(e, Subtract):
        return (e.left, e.right)
    return ()


@functools.lru_cache(maxsize=None)
def variables(e):
    """Variables of an expression or guard, in order of first occurrence."""
    if isinstance(e, Var):
        return (e.name,)
    if isinstance(e, Compare):
        subs = (e.left, e.right)
    elif isinstance(e, (And, Or)):
        subs = e.args
    else:
        subs = children(e)
    seen = {}
    for c in subs:
        for v in variables(c):
            seen.setdefault(v, None)
    return tuple(seen)


def eval_scalar(e, b):
    """Evaluate a singleton-valued term to its raw value."""
    t = type(e)
    if t is Var:
        return b[e.name]
    if t is Const:
        return e.value
    if t is Successor:
        return e.sort.successor(eval_scalar(e.arg, b))
    if t is Predecessor:
        return e.sort.predecessor(eval_scalar(e.arg, b))
    if t is Tuple:
        return tuple(eval_scalar(a, b) for a in e.args)
    raise TypeError(f"{t.__name__} is not a scalar term")


def eval_expression(e, b):
    """Evaluate ``e`` under binding ``b`` to a Multiset.

    Raises UndefinedSuccessor or NegativeMultiset when a partial operation
    fails; callers decide whether that excludes a binding or is fatal.
    """
    t = type(e)
    if t in SCALAR_TERMS:
        return Multiset({eval_scalar(e, b): 1})
    if t is NumberOf:
        return eval_expression(e.arg, b).scale(e.count)
    if t is Add:
        out = Multiset()
        for a in e.args:
            for v, k in eval_expression(a, b).items():
                out[v] = out.get(v, 0) + k
        return out
    if t is Subtract:
        return eval_expression(e.left, b) - eval_expression(e.right, b)
    if t is All:
        return Multiset.fromkeys(e.sort.values, 1)
    if t is PartElem:
        return Multiset.fromkeys(e.element.members, 1)
    raise TypeError(f"cannot evaluate {e!r}")


# -- guards ------------------------------------------------------------------

@dataclass(frozen=True)
class TrueGuard:
    pass


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Compare:
    op: str  # one of COMPARISONS
    left: object
    right: object


COMPARISONS = ("equality", "inequality", "lessthan", "greaterthan",
               "greaterthanorequal", "lessthanorequal")

TRUE = TrueGuard()


class Tri(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


def _rank(e, b, partition):
    """Ordering key of a comparison operand; coarse when a partition is involved."""
    if isinstance(e, PartElem):
        return e.element.index
    v = eval_scalar(e, b)
    return partition.element_of(v) if partition is not None else v


def compare(op, left, right, b):
    """Two-valued comparison under a binding covering both operands."""
    partition = left.sort if isinstance(left, PartElem) else \
        right.sort if isinstance(right, PartElem) else None
    x = _rank(left, b, partition)
    y = _rank(right, b, partition)
    if op == "equality":
        return x == y
    if op == "inequality":
        return x != y
    if op == "lessthan":
        return x < y
    if op == "greaterthan":
        return x > y
    if op == "greaterthanorequal":
        return x >= y
    if op == "lessthanorequal":
        return x <= y
    raise ValueError(op)


def eval_guard(g, b):
    """Tri-state guard evaluation under a possibly partial binding."""
    t = type(g)
    if t is Compare:
        for v in variables(g):
            if v not in b:
                return Tri.UNDETERMINED
        try:
            ok = compare(g.op, g.left, g.right, b)
        except UndefinedSuccessor:
            return Tri.FALSIFIED
        return Tri.SATISFIED if ok else Tri.FALSIFIED
    if t is And:
        result = Tri.SATISFIED
        for a in g.args:
            r = eval_guard(a, b)
            if r is Tri.FALSIFIED:
                return r
            if r is Tri.UNDETERMINED:
                result = r
        return result
    if t is Or:
        result = Tri.FALSIFIED
        for a in g.args:
            r = eval_guard(a, b)
            if r is Tri.SATISFIED:
                return r
            if r is Tri.UNDETERMINED:
                result = r
        return result
    if t is TrueGuard:
        return Tri.SATISFIED
    raise TypeError(f"cannot evaluate guard {g!r}")


def conjuncts(g):
    """Top-level conjuncts of a guard, nested ``and`` flattened."""
    if isinstance(g, And):
        return [c for a in g.args for c in conjuncts(a)]
    if isinstance(g, TrueGuard):
        return []
    return [g]


# -- pretty printing ---------------------------------------------------------

_SYMBOLS = {"equality": "=", "inequality": "!=", "lessthan": "<", "greaterthan": ">",
            "greaterthanorequal": ">=", "lessthanorequal": "<="}


def render(e):
    """Human-readable text of an expression or guard."""
    t = type(e)
    if t is Var:
        return e.name
    if t is Const:
        return e.sort.display(e.value)
    if t is Successor:
        return _atom(e.arg) + "++"
    if t is Predecessor:
        return _atom(e.arg) + "--"
    if t is Tuple:
        return "(" + ", ".join(render(a) for a in e.args) + ")"
    if t is All:
        return f"{e.sort.id}.all"
    if t is Add:
        return " + ".join(render(a) for a in e.args)
    if t is Subtract:
        return f"{_atom(e.left)} - {_atom(e.right)}"
    if t is NumberOf:
        return f"{e.count}'{_atom(e.arg)}"
    if t is PartElem:
        return e.element.name
    if t is TrueGuard:
        return "true"
    if t is And:
        return " and ".join(_atom(a) for a in e.args)
    if t is Or:
        return " or ".join(_atom(a) for a in e.args)
    if t is Compare:
        return f"{render(e.left)} {_SYMBOLS[e.op]} {render(e.right)}"
    raise TypeError(f"cannot render {e!r}")


def _atom(e):
    text = render(e)
    if isinstance(e, (Add, Subtract, And, Or, Compare)):
        return f"({text})"
    return text

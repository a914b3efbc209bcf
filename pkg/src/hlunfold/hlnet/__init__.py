"""Typed intermediate representation of high-level nets."""

from hlunfold.hlnet.expr import (
    TRUE, Add, All, And, Compare, Const, NumberOf, Or, PartElem, Predecessor,
    Subtract, Successor, Tri, TrueGuard, Tuple, Var, eval_expression,
    eval_guard, render, variables,
)
from hlunfold.hlnet.multiset import Multiset
from hlunfold.hlnet.net import Arc, HLNet, Place, SortTable, Transition, Variable, environment
from hlunfold.hlnet.sorts import (
    DOT, Sort, SortKind, compatible, cyclic_enum, enumerate_sort, finite_enum,
    int_range, partition, predecessor, product, sort_size, successor,
)

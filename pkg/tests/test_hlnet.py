import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hlunfold.errors import NegativeMultiset, UndefinedSuccessor
from hlunfold.hlnet import expr as X
from hlunfold.hlnet import sorts as S
from hlunfold.hlnet.expr import Tri, eval_expression, eval_guard
from hlunfold.hlnet.multiset import Multiset

C3 = S.cyclic_enum("C", ["c0", "c1", "c2"])
AB = S.finite_enum("AB", ["a", "b"])
R05 = S.int_range("R", 0, 5)


def test_sort_sizes():
    assert S.sort_size(S.DOT) == 1
    assert S.sort_size(S.int_range("r", 3, 7)) == 5
    c5 = S.cyclic_enum("C5", [f"c{i}" for i in range(5)])
    assert S.sort_size(S.product("G", [c5, c5])) == 25


def test_enumeration_order():
    assert [C3.display(v) for v in S.enumerate_sort(C3)] == ["c0", "c1", "c2"]
    p = S.product("P", [AB, S.int_range("b", 0, 1)])
    assert [p.display(v) for v in S.enumerate_sort(p)] == ["(a, 0)", "(a, 1)", "(b, 0)", "(b, 1)"]


def test_partition_view_enumerates_base():
    part = S.partition("P", C3, [("A", "A", [0, 1]), ("B", "B", [2])])
    assert list(S.enumerate_sort(part)) == list(S.enumerate_sort(C3))
    assert part.element_of(1) == 0 and part.element_of(2) == 1


def test_successor_wraps_on_cyclic_only():
    assert S.successor(C3, 2) == 0
    assert S.predecessor(C3, 0) == 2
    with pytest.raises(UndefinedSuccessor):
        S.successor(R05, 5)
    with pytest.raises(UndefinedSuccessor):
        S.predecessor(AB, 0)


@given(st.integers(1, 30), st.data())
def test_pred_succ_inverse_on_cyclic(n, data):
    c = S.cyclic_enum("Cn", [f"c{i}" for i in range(n)])
    v = data.draw(st.integers(0, n - 1))
    assert S.predecessor(c, S.successor(c, v)) == v


@given(st.sampled_from([S.DOT, C3, AB, R05, S.product("P", [C3, AB]),
                        S.product("Q", [R05, C3, AB])]))
def test_enumeration_length_is_size(s):
    vals = S.enumerate_sort(s)
    assert len(vals) == S.sort_size(s) == len(set(vals))


def test_eval_examples():
    assert eval_expression(X.All(C3), {}) == {0: 1, 1: 1, 2: 1}
    two_c0 = X.NumberOf(2, X.Const(0, C3), C3)
    assert eval_expression(X.Add((two_c0, X.Const(1, C3)), C3), {}) == {0: 2, 1: 1}
    x = X.Var("x", C3)
    assert eval_expression(X.Subtract(X.All(C3), x, C3), {"x": 1}) == {0: 1, 2: 1}
    with pytest.raises(NegativeMultiset):
        eval_expression(X.Subtract(x, X.All(C3), C3), {"x": 1})


def test_tuple_and_scaling():
    p = S.product("P", [C3, R05])
    t = X.Tuple((X.Var("x", C3), X.Successor(X.Const(2, R05), R05)), p)
    assert eval_expression(X.NumberOf(3, t, p), {"x": 1}) == {(1, 3): 3}


multisets = st.dictionaries(st.integers(0, 4), st.integers(1, 5)).map(Multiset)


@given(multisets, multisets, multisets)
def test_add_commutative_associative(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@given(multisets, multisets)
def test_subtract_inverts_add(m, n):
    assert (m + n) - n == m


@given(multisets)
def test_no_zero_entries(m):
    assert all(k >= 1 for k in (m - m).values()) and not (m - m)


def test_guard_examples():
    x, y = X.Var("x", C3), X.Var("y", C3)
    p = X.Compare("equality", X.Var("z", C3), X.Const(0, C3))
    g = X.And((X.Compare("lessthan", x, y), p))
    assert eval_guard(g, {"x": 2, "y": 0}) is Tri.FALSIFIED
    assert eval_guard(X.Compare("equality", x, x), {"x": 1}) is Tri.SATISFIED
    g = X.Or((X.Compare("equality", x, X.Const(0, C3)), p))
    assert eval_guard(g, {"x": 0}) is Tri.SATISFIED
    assert eval_guard(g, {"x": 1}) is Tri.UNDETERMINED


def test_undefined_successor_falsifies_comparison():
    x = X.Var("x", R05)
    g = X.Compare("equality", X.Successor(x, R05), X.Const(0, R05))
    assert eval_guard(g, {"x": 5}) is Tri.FALSIFIED


def test_partition_comparisons_are_coarse():
    part = S.partition("P", C3, [("A", "A", [0, 1]), ("B", "B", [2])])
    a, b = part.elements
    x = X.Var("x", C3)
    assert eval_guard(X.Compare("equality", x, X.PartElem(a, part)), {"x": 1}) is Tri.SATISFIED
    assert eval_guard(X.Compare("lessthan", x, X.PartElem(b, part)), {"x": 0}) is Tri.SATISFIED
    assert eval_guard(X.Compare("lessthan", x, X.PartElem(b, part)), {"x": 2}) is Tri.FALSIFIED


# random guards over three variables of a small sort, for tri-state soundness

D4 = S.int_range("D4", 0, 3)
VARS = ["a", "b", "c"]
OPS = list(X.COMPARISONS)


def _operand():
    leaf = st.one_of(st.sampled_from(VARS).map(lambda v: X.Var(v, D4)),
                     st.integers(0, 3).map(lambda k: X.Const(k, D4)))
    return st.one_of(leaf, leaf.map(lambda e: X.Successor(e, D4)),
                     leaf.map(lambda e: X.Predecessor(e, D4)))


compares = st.builds(X.Compare, st.sampled_from(OPS), _operand(), _operand())
guards = st.recursive(compares, lambda kids: st.one_of(
    st.lists(kids, min_size=1, max_size=3).map(lambda a: X.And(tuple(a))),
    st.lists(kids, min_size=1, max_size=3).map(lambda a: X.Or(tuple(a)))), max_leaves=6)


@settings(max_examples=300)
@given(guards, st.dictionaries(st.sampled_from(VARS), st.integers(0, 3)))
def test_tristate_soundness(g, partial):
    verdict = eval_guard(g, partial)
    free = [v for v in VARS if v not in partial]
    outcomes = set()
    for combo in itertools.product(range(4), repeat=len(free)):
        b = dict(partial, **dict(zip(free, combo)))
        outcomes.add(eval_guard(g, b))
    assert outcomes <= {Tri.SATISFIED, Tri.FALSIFIED}
    if verdict is Tri.SATISFIED:
        assert outcomes == {Tri.SATISFIED}
    elif verdict is Tri.FALSIFIED:
        assert outcomes == {Tri.FALSIFIED}


@given(guards, st.fixed_dictionaries({v: st.integers(0, 3) for v in VARS}))
def test_guard_evaluation_deterministic(g, b):
    assert eval_guard(g, b) is eval_guard(g, dict(b))


def test_render_conventions():
    x = X.Var("x", C3)
    assert X.render(X.Predecessor(x, C3)) == "x--"
    assert X.render(X.Successor(x, C3)) == "x++"
    assert X.render(X.Add((x, X.Const(1, C3)), C3)) == "x + c1"

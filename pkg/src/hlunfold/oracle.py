"""Slow reference semantics used by the test suite.

Nothing here calls the evaluator in ``hlunfold.hlnet.expr`` or the search in
``hlunfold.unfolder``: terms, guards and bindings are interpreted afresh from
the IR nodes, so a bug in the fast path cannot hide behind the oracle.
"""

import itertools
from collections import Counter, deque

from hlunfold.corenet import CoreNet, CorePlace, CoreTransition, Mangler
from hlunfold.errors import BoundExceeded
from hlunfold.hlnet import expr as X
from hlunfold.hlnet.sorts import SortKind


class _Undefined(Exception):
    """A term has no value under the binding."""


class Saturated:
    """Returned by the explorers when the state budget runs out."""

    def __repr__(self):
        return "SATURATED"


SATURATED = Saturated()


# -- values ------------------------------------------------------------------

def values(sort):
    k = sort.kind
    if k is SortKind.DOT:
        return [0]
    if k in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM):
        return list(range(len(sort.constants)))
    if k is SortKind.INT_RANGE:
        lo, hi = sort.bounds
        return list(range(hi - lo + 1))
    if k is SortKind.PRODUCT:
        return list(itertools.product(*(values(c) for c in sort.components)))
    return values(sort.components[0])


def _root(sort):
    while sort.kind is SortKind.PARTITION:
        sort = sort.components[0]
    return sort


def _step(sort, v, delta):
    base = _root(sort)
    n = len(values(base))
    w = v + delta
    if base.kind is SortKind.CYCLIC_ENUM:
        return w % n
    if not 0 <= w < n:
        raise _Undefined
    return w


def scalar(e, b):
    if isinstance(e, X.Var):
        return b[e.name]
    if isinstance(e, X.Const):
        return e.value
    if isinstance(e, X.Successor):
        return _step(e.sort, scalar(e.arg, b), 1)
    if isinstance(e, X.Predecessor):
        return _step(e.sort, scalar(e.arg, b), -1)
    if isinstance(e, X.Tuple):
        return tuple(scalar(a, b) for a in e.args)
    raise TypeError(f"not a single color: {e!r}")


def evaluate(e, b):
    """Counter of colors denoted by term ``e`` under binding ``b``."""
    if isinstance(e, X.All):
        return Counter({v: 1 for v in values(e.sort)})
    if isinstance(e, X.PartElem):
        return Counter({v: 1 for v in e.element.members})
    if isinstance(e, X.Add):
        out = Counter()
        for a in e.args:
            for v, k in evaluate(a, b).items():
                out[v] += k
        return out
    if isinstance(e, X.Subtract):
        left, right = evaluate(e.left, b), evaluate(e.right, b)
        for v, k in right.items():
            if left[v] < k:
                raise _Undefined
        return Counter({v: left[v] - right[v] for v in left if left[v] - right[v] > 0})
    if isinstance(e, X.NumberOf):
        inner = evaluate(e.arg, b)
        return Counter({v: k * e.count for v, k in inner.items() if k * e.count})
    return Counter({scalar(e, b): 1})


def _element_index(sort, v):
    for e in sort.elements:
        if v in e.members:
            return e.index
    raise _Undefined


def _operand(e, b, coarse, sort):
    if isinstance(e, X.PartElem):
        return e.element.index
    v = scalar(e, b)
    if coarse:
        return _element_index(sort, v)
    return v


_OPS = {
    "equality": lambda a, c: a == c,
    "inequality": lambda a, c: a != c,
    "lessthan": lambda a, c: a < c,
    "greaterthan": lambda a, c: a > c,
    "lessthanorequal": lambda a, c: a <= c,
    "greaterthanorequal": lambda a, c: a >= c,
}


def holds(g, b):
    """Two-valued guard semantics under a total binding."""
    if isinstance(g, X.TrueGuard):
        return True
    if isinstance(g, X.And):
        return all(holds(a, b) for a in g.args)
    if isinstance(g, X.Or):
        return any(holds(a, b) for a in g.args)
    coarse = isinstance(g.left, X.PartElem) or isinstance(g.right, X.PartElem)
    psort = g.left.sort if isinstance(g.left, X.PartElem) else g.right.sort
    try:
        left = _operand(g.left, b, coarse, psort)
        right = _operand(g.right, b, coarse, psort)
    except _Undefined:
        return False
    return _OPS[g.op](left, right)


# -- bindings ----------------------------------------------------------------

def _walk_vars(e, out):
    if isinstance(e, X.Var):
        out.setdefault(e.name, e.sort)
    elif isinstance(e, X.Compare):
        _walk_vars(e.left, out)
        _walk_vars(e.right, out)
    elif isinstance(e, (X.And, X.Or, X.Add, X.Tuple)):
        for a in e.args:
            _walk_vars(a, out)
    elif isinstance(e, X.Subtract):
        _walk_vars(e.left, out)
        _walk_vars(e.right, out)
    elif isinstance(e, (X.Successor, X.Predecessor, X.NumberOf)):
        _walk_vars(e.arg, out)


def transition_variables(net, t):
    """``[(name, sort)]`` of a transition, declared variables first."""
    found = {}
    for a in net.arcs:
        if t in (a.source, a.target):
            _walk_vars(a.inscription, found)
    _walk_vars(net.transition(t).guard, found)
    declared = [v for v in net.declarations.variables if v in found]
    declared += [v for v in found if v not in declared]
    return [(v, found[v]) for v in declared]


def all_bindings(net, t):
    env = transition_variables(net, t)
    names = [v for v, _ in env]
    for combo in itertools.product(*(values(s) for _, s in env)):
        yield dict(zip(names, combo))


def _space(net, t):
    size = 1
    for _, s in transition_variables(net, t):
        size *= len(values(s))
    return size


def _ground(e):
    return evaluate(e, {}) if e is not None else Counter()


# -- naive unfolding ---------------------------------------------------------

def naive_unfold(net, bound=10**6, stable=None):
    """Unfold by trying every valuation of every transition.

    ``stable`` optionally names places whose initial marking must contain
    every input inscription; this is an after-the-fact filter that mirrors
    the dead instances the optimized unfolder never generates.
    """
    total = sum(_space(net, t.id) for t in net.transitions)
    if total > bound:
        raise BoundExceeded(f"{total} valuations exceed the bound {bound}")
    mangler = Mangler()
    places, index = [], {}
    for p in net.places:
        m = _ground(p.marking)
        for v in values(p.sort):
            index[(p.id, v)] = len(places)
            places.append(CorePlace(mangler(p.id, p.sort.face(v)), m.get(v, 0), (p.id, v)))
    fixed = {pid: _ground(net.place(pid).marking) for pid in (stable or ())}
    out = CoreNet(net.name, places)
    arcs = {t.id: [a for a in net.arcs if t.id in (a.source, a.target)] for t in net.transitions}
    for t in net.transitions:
        env = transition_variables(net, t.id)
        for b in all_bindings(net, t.id):
            if not holds(t.guard, b):
                continue
            try:
                evaluated = [(a, evaluate(a.inscription, b)) for a in arcs[t.id]]
            except _Undefined:
                continue
            if any(a.source in fixed and any(fixed[a.source][v] < k for v, k in m.items())
                   for a, m in evaluated):
                continue
            ins, outs = [], []
            for a, m in evaluated:
                if a.target == t.id:
                    ins.extend((index[(a.source, v)], m[v]) for v in sorted(m))
                else:
                    outs.extend((index[(a.target, v)], m[v]) for v in sorted(m))
            # inputs first, each side in arc declaration order
            frags = [f for v, s in env for f in s.face(b[v])]
            out.transitions.append(CoreTransition(mangler(t.id, frags), ins, outs, (t.id, b)))
    return out


# -- state spaces ------------------------------------------------------------

def _bfs(initial, successors, max_states):
    seen = {initial}
    todo = deque([initial])
    while todo:
        m = todo.popleft()
        for m2 in successors(m):
            if m2 not in seen:
                if len(seen) + 1 >= max_states:
                    return SATURATED
                seen.add(m2)
                todo.append(m2)
    return len(seen) if len(seen) < max_states else SATURATED


def _hl_key(marking):
    return tuple(tuple(sorted((v, k) for v, k in m.items() if k)) for m in marking)


def explore_hlpn(net, max_states=10**4):
    """Reachable marking count of ``net`` under colored firing, or SATURATED."""
    pids = [p.id for p in net.places]
    pos = {pid: i for i, pid in enumerate(pids)}
    rules = []
    for t in net.transitions:
        arcs = [a for a in net.arcs if t.id in (a.source, a.target)]
        for b in all_bindings(net, t.id):
            if not holds(t.guard, b):
                continue
            try:
                pre = [(pos[a.source], evaluate(a.inscription, b)) for a in arcs if a.target == t.id]
                post = [(pos[a.target], evaluate(a.inscription, b)) for a in arcs if a.source == t.id]
            except _Undefined:
                continue
            rules.append((pre, post))

    def successors(key):
        for pre, post in rules:
            m = [Counter(dict(p)) for p in key]
            ok = True
            for i, need in pre:
                for v, k in need.items():
                    if m[i][v] < k:
                        ok = False
                        break
                    m[i][v] -= k
                if not ok:
                    break
            if not ok:
                continue
            for i, give in post:
                for v, k in give.items():
                    m[i][v] += k
            yield _hl_key(m)

    initial = _hl_key([_ground(p.marking) for p in net.places])
    return _bfs(initial, successors, max_states)


def _pt_successors(net):
    rules = []
    for t in net.transitions:
        delta = Counter()
        need = Counter()
        for p, w in t.inputs:
            need[p] += w
            delta[p] -= w
        for p, w in t.outputs:
            delta[p] += w
        rules.append((sorted(need.items()), sorted(delta.items())))

    def successors(m):
        for need, delta in rules:
            if all(m[p] >= w for p, w in need):
                m2 = list(m)
                for p, d in delta:
                    m2[p] += d
                yield tuple(m2)
    return successors


def explore_pt(net, max_states=10**4):
    """Reachable marking count of a CoreNet, or SATURATED."""
    initial = tuple(p.marking for p in net.places)
    return _bfs(initial, _pt_successors(net), max_states)


def reachable_markings(net, max_states=10**4):
    """Every reachable marking of a CoreNet; raises BoundExceeded past the budget."""
    initial = tuple(p.marking for p in net.places)
    successors = _pt_successors(net)
    seen = {initial}
    todo = deque([initial])
    while todo:
        m = todo.popleft()
        yield m
        for m2 in successors(m):
            if m2 not in seen:
                if len(seen) >= max_states:
                    raise BoundExceeded(f"more than {max_states} reachable markings")
                seen.add(m2)
                todo.append(m2)

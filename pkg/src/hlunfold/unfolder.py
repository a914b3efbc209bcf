"""Unfolding of a high-level net into a P/T net.

Places are instantiated once per color. Transition instances come from a
depth-first search over the transition environment: after every variable
assignment the guard is evaluated on the partial binding, inscriptions that
just became ground are checked for evaluation failures, and inscriptions on
arcs from stable places are checked for inclusion in the fixed marking.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field

from hlunfold.corenet import CoreNet, CorePlace, CoreTransition, Mangler
from hlunfold.errors import EvaluationError, MarkingError, ResourceLimitError
from hlunfold.hlnet import expr as X
from hlunfold.hlnet.expr import Tri, conjuncts, eval_expression, eval_guard, variables
from hlunfold.hlnet.net import environment, variable_sorts

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 50_000_000


@dataclass
class StableSet:
    places: set = field(default_factory=set)
    markings: dict = field(default_factory=dict)  # hl place id -> Multiset

    def __contains__(self, pid):
        return pid in self.places

    def __len__(self):
        return len(self.places)


def mangle_name(base, values, sorts=None, mangler=None):
    """Identifier for ``base`` instantiated at ``values``.

    ``values`` is a list of raw values with their ``sorts``, or a binding
    dict keyed by variable (then ``sorts`` maps variables to sorts and the
    binding's own order is used). Without ``sorts`` the values are taken
    as ready-made text fragments.
    """
    if isinstance(values, dict):
        items = [(sorts[v], values[v]) if sorts else (None, values[v]) for v in values]
    else:
        items = list(zip(sorts, values)) if sorts else [(None, v) for v in values]
    frags = []
    for sort, v in items:
        frags.extend(sort.face(v) if sort is not None else [str(v)])
    return (mangler or Mangler())(base, frags)


# -- places ------------------------------------------------------------------

def ground_marking(net, pid):
    """Evaluated initial marking of ``pid``; evaluation failures are input errors."""
    try:
        return net.initial_marking(pid)
    except EvaluationError as exc:
        raise MarkingError(f"initial marking of place {pid!r}: {exc}") from exc


def unfold_places(net, mangler=None):
    """One P/T place per (place, color), with its initial token count.

    Returns ``(places, index)`` where ``index`` maps (hl place id, value)
    to the position in ``places``.
    """
    mangler = mangler or Mangler()
    places, index = [], {}
    for p in net.places:
        marking = ground_marking(net, p.id)
        sort = p.sort
        for v in sort.values:
            index[(p.id, v)] = len(places)
            places.append(CorePlace(mangler(p.id, sort.face(v)), marking.get(v, 0), (p.id, v)))
    return places, index


# -- stable places -----------------------------------------------------------

def normal_form(e):
    """Counter of atomic terms: nested adds flattened, multiplicities folded."""
    if isinstance(e, X.NumberOf):
        inner = normal_form(e.arg)
        return Counter({k: n * e.count for k, n in inner.items() if n * e.count})
    if isinstance(e, X.Add):
        out = Counter()
        for a in e.args:
            out.update(normal_form(a))
        return out
    if isinstance(e, X.Subtract):
        key = ("subtract", frozenset(normal_form(e.left).items()), frozenset(normal_form(e.right).items()))
        return Counter({key: 1})
    return Counter({e: 1})


def _side(arcs):
    total = Counter()
    for a in arcs:
        total.update(normal_form(a.inscription))
    return total


def detect_stable_places(net):
    """Places every transition gives back exactly what it takes, syntactically."""
    stable = StableSet()
    for p in net.places:
        ok = True
        for t in net.transitions:
            ins = [a for a in net.inputs(t.id) if a.source == p.id]
            outs = [a for a in net.outputs(t.id) if a.target == p.id]
            if (ins or outs) and _side(ins) != _side(outs):
                ok = False
                break
        if ok:
            stable.places.add(p.id)
            stable.markings[p.id] = ground_marking(net, p.id)
    return stable


# -- valuations --------------------------------------------------------------

def variable_order(net, t, stable):
    """Greedy search order: most constrained variable first, ties by declaration."""
    env = environment(net, t)
    constraints = [frozenset(variables(c)) for c in conjuncts(net.transition(t).guard)]
    constraints += [frozenset(variables(a.inscription)) for a in net.inputs(t) if a.source in stable]
    order, bound = [], set()
    remaining = list(env)
    while remaining:
        def weight(v):
            return sum(1 for c in constraints if v in c and not c <= bound)
        best = max(remaining, key=lambda v: (weight(v), -env.index(v)))
        order.append(best)
        bound.add(best)
        remaining.remove(best)
    return order


@dataclass
class _Plan:
    order: list
    domains: list
    guard: object
    checks: list  # per depth: list of (expr, fixed marking or None)
    upfront: list


def _plan(net, t, stable):
    order = variable_order(net, t, stable)
    sorts = variable_sorts(net, t)
    depth_of = {v: i for i, v in enumerate(order)}
    checks = [[] for _ in order]
    upfront = []
    for arc in net.arcs_of(t):
        vs = variables(arc.inscription)
        fixed = None
        if arc.target == t and arc.source in stable:
            fixed = stable.markings[arc.source]
        slot = upfront if not vs else checks[max(depth_of[v] for v in vs)]
        slot.append((arc.inscription, fixed))
    guard = net.transition(t).guard
    return _Plan(order, [sorts[v].values for v in order], guard, checks, upfront)


def _passes(checks, b):
    for e, fixed in checks:
        try:
            m = eval_expression(e, b)
        except EvaluationError:
            return False
        if fixed is not None and not m.included_in(fixed):
            return False
    return True


def enumerate_valuations(net, t, stable=None):
    """Yield every total binding of ``t`` that can produce a transition instance."""
    stable = stable if stable is not None else StableSet()
    plan = _plan(net, t, stable)
    trivial_guard = isinstance(plan.guard, X.TrueGuard)
    b = {}
    if not _passes(plan.upfront, b):
        return
    if not trivial_guard and eval_guard(plan.guard, b) is Tri.FALSIFIED:
        return
    n = len(plan.order)
    if n == 0:
        if trivial_guard or eval_guard(plan.guard, b) is Tri.SATISFIED:
            yield {}
        return

    def search(depth):
        var, checks = plan.order[depth], plan.checks[depth]
        last = depth == n - 1
        for v in plan.domains[depth]:
            b[var] = v
            if not trivial_guard:
                r = eval_guard(plan.guard, b)
                if r is Tri.FALSIFIED or (last and r is not Tri.SATISFIED):
                    continue
            if checks and not _passes(checks, b):
                continue
            if last:
                yield dict(b)
            else:
                yield from search(depth + 1)
        del b[var]

    yield from search(0)


# -- transitions -------------------------------------------------------------

def unfold_transition(net, t, b, index, name=None):
    """The P/T transition for binding ``b`` of ``t``, arcs in HL arc order."""
    inputs, outputs = [], []
    for arc in net.inputs(t):
        m = eval_expression(arc.inscription, b)
        inputs.extend((index[(arc.source, v)], k) for v, k in sorted(m.items()))
    for arc in net.outputs(t):
        m = eval_expression(arc.inscription, b)
        outputs.extend((index[(arc.target, v)], k) for v, k in sorted(m.items()))
    return CoreTransition(name or t, inputs, outputs, (t, b))


def sorted_bindings(net, t, bindings):
    """Bindings in lexicographic order over the declaration-ordered environment."""
    env = environment(net, t)
    return sorted(bindings, key=lambda b: tuple(b[v] for v in env))


def instantiate(net, t, bindings, index, mangler):
    env = environment(net, t)
    sorts = variable_sorts(net, t)
    for b in bindings:
        frags = [f for v in env for f in sorts[v].face(b[v])]
        ordered = {v: b[v] for v in env}
        yield unfold_transition(net, t, ordered, index, mangler(t, frags))


def unfold(net, limit=DEFAULT_LIMIT, use_stable=True):
    """Unfold ``net`` into a CoreNet.

    ``limit`` caps the number of transition instances. With ``use_stable``
    off, stable places are not used to prune bindings.
    """
    mangler = Mangler()
    places, index = unfold_places(net, mangler)
    stable = detect_stable_places(net) if use_stable else StableSet()
    out = CoreNet(net.name, places)
    for tr in net.transitions:
        bindings = []
        for b in enumerate_valuations(net, tr.id, stable):
            bindings.append(b)
            if len(out.transitions) + len(bindings) > limit:
                raise ResourceLimitError(f"more than {limit} transition instances")
        out.transitions.extend(instantiate(net, tr.id, sorted_bindings(net, tr.id, bindings),
                                           index, mangler))
    log.debug("unfolded %s: %d places, %d transitions", net.name, len(out.places), len(out.transitions))
    return out

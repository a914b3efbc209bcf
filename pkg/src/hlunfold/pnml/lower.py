"""Type-check a raw document and lower it to an HLNet."""

from hlunfold.errors import ErrorKind, ParseError
from hlunfold.hlnet import expr as X
from hlunfold.hlnet import sorts as S
from hlunfold.hlnet.net import Arc, HLNet, Place, Transition

COMPARISON_TAGS = frozenset(X.COMPARISONS)
OPERAND_TERMS = (X.Var, X.Const, X.Successor, X.Predecessor, X.PartElem)


def _mismatch(node, message):
    return ParseError(ErrorKind.TYPE_MISMATCH, node.pos, message)


class _Lowerer:
    def __init__(self, table):
        self.table = table

    # sorts

    def sort(self, node):
        tag = node.tag
        if tag == "usersort":
            sid = node.attrs["declaration"]
            if sid not in self.table.sorts:
                raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, node.pos, f"unknown sort {sid!r}")
            return self.table.sorts[sid]
        if tag == "dot":
            return S.DOT
        if tag == "finiteintrange":
            lo, hi = int(node.attrs["start"]), int(node.attrs["end"])
            return self._named_range(lo, hi) or S.int_range(f"{lo}..{hi}", lo, hi)
        if tag == "productsort":
            comps = [self.sort(c) for c in node.children]
            return self._named_product(comps) or S.product("x".join(c.id for c in comps), comps)
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos, f"inline <{tag}> sorts are not supported")

    def _named_range(self, lo, hi):
        for s in self.table.sorts.values():
            if s.kind is S.SortKind.INT_RANGE and s.bounds == (lo, hi):
                return s
        return None

    def _named_product(self, comps):
        probe = S.product("", comps)
        for s in self.table.sorts.values():
            if s.kind is S.SortKind.PRODUCT and S.compatible(s, probe):
                return s
        return None

    # terms

    def term(self, node, expected=None):
        while node.tag == "subterm":
            node = node.children[0]
        tag = node.tag
        if tag == "variable":
            vid = node.attrs["refvariable"]
            var = self.table.variables.get(vid)
            if var is None:
                raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, node.pos, f"unknown variable {vid!r}")
            return X.Var(vid, var.sort)
        if tag == "useroperator":
            cid = node.attrs["declaration"]
            if cid in self.table.constants:
                sort, idx = self.table.constants[cid]
                return X.Const(idx, sort)
            if cid in self.table.partition_elements:
                sort, elem = self.table.partition_elements[cid]
                return X.PartElem(elem, sort)
            raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, node.pos, f"unknown constant {cid!r}")
        if tag == "dotconstant":
            return X.Const(0, S.DOT)
        if tag == "finiteintrangeconstant":
            return self._int_constant(node, expected)
        if tag in ("successor", "predecessor"):
            if len(node.children) != 1:
                raise _mismatch(node, f"<{tag}> takes exactly one argument")
            arg = self.term(node.children[0], expected)
            if not isinstance(arg, OPERAND_TERMS[:4]) or not arg.sort.is_ordered:
                raise _mismatch(node, f"<{tag}> needs a scalar term of an ordered sort")
            cls = X.Successor if tag == "successor" else X.Predecessor
            return cls(arg, arg.sort)
        if tag == "tuple":
            return self._tuple(node, expected)
        if tag == "all":
            return X.All(self.sort(node.children[0]))
        if tag == "add":
            args = tuple(self.term(c, expected) for c in node.children)
            if not args:
                raise _mismatch(node, "<add> without operands")
            self._same_sort(node, args)
            return X.Add(args, args[0].sort)
        if tag == "subtract":
            if len(node.children) != 2:
                raise _mismatch(node, "<subtract> takes exactly two operands")
            left = self.term(node.children[0], expected)
            right = self.term(node.children[1], left.sort)
            self._same_sort(node, (left, right))
            return X.Subtract(left, right, left.sort)
        if tag == "numberof":
            return self._numberof(node, expected)
        raise _mismatch(node, f"<{tag}> cannot be used as a multiset term")

    def _int_constant(self, node, expected):
        raw = node.attrs["value"]
        rng = node.child("finiteintrange")
        try:
            value, lo, hi = int(raw), int(rng.attrs["start"]), int(rng.attrs["end"])
        except ValueError:
            raise _mismatch(node, "non-integer bound or value") from None
        if not lo <= value <= hi:
            raise _mismatch(node, f"{value} lies outside {lo}..{hi}")
        sort = None
        if expected is not None and expected.base.kind is S.SortKind.INT_RANGE \
                and expected.base.bounds == (lo, hi):
            sort = expected
        sort = sort or self._named_range(lo, hi) or S.int_range(f"{lo}..{hi}", lo, hi)
        return X.Const(value - lo, sort)

    def _tuple(self, node, expected):
        comps = None
        if expected is not None and expected.kind is S.SortKind.PRODUCT \
                and len(expected.components) == len(node.children):
            comps = expected.components
        args = []
        for i, c in enumerate(node.children):
            arg = self.term(c, comps[i] if comps else None)
            if not isinstance(arg, X.SCALAR_TERMS):
                raise _mismatch(c, "tuple components must be single colors")
            args.append(arg)
        if not args:
            raise _mismatch(node, "empty tuple")
        probe = S.product("", [a.sort for a in args])
        if expected is not None and S.compatible(expected, probe):
            sort = expected
        else:
            sort = self._named_product(probe.components) or \
                S.product("x".join(a.sort.id for a in args), probe.components)
        return X.Tuple(tuple(args), sort)

    def _numberof(self, node, expected):
        kids = [c for c in node.children]
        while kids and kids[0].tag == "subterm" and kids[0].children and kids[0].children[0].tag == "numberconstant":
            kids[0] = kids[0].children[0]
        count = 1
        if kids and kids[0].tag == "numberconstant":
            try:
                count = int(kids[0].attrs["value"])
            except ValueError:
                raise _mismatch(kids[0], "multiplicity is not an integer") from None
            if count < 0:
                raise _mismatch(kids[0], "negative multiplicity")
            kids = kids[1:]
        if len(kids) != 1:
            raise _mismatch(node, "<numberof> needs exactly one multiset term")
        arg = self.term(kids[0], expected)
        return X.NumberOf(count, arg, arg.sort)

    def _same_sort(self, node, args):
        first = args[0].sort
        for a in args[1:]:
            if not S.compatible(first, a.sort):
                raise _mismatch(node, f"operands of sorts {first.id} and {a.sort.id} cannot be combined")

    # conditions

    def condition(self, node):
        while node.tag == "subterm":
            node = node.children[0]
        tag = node.tag
        if tag in ("and", "or"):
            args = tuple(self.condition(c) for c in node.children)
            if not args:
                raise _mismatch(node, f"<{tag}> without operands")
            return X.And(args) if tag == "and" else X.Or(args)
        if tag in COMPARISON_TAGS:
            if len(node.children) != 2:
                raise _mismatch(node, f"<{tag}> takes exactly two operands")
            lnode, rnode = node.children
            if _is_literal(lnode) and not _is_literal(rnode):
                right = self.term(rnode)
                left = self.term(lnode, right.sort)
            else:
                left = self.term(lnode)
                right = self.term(rnode, left.sort)
            for side, n in ((left, lnode), (right, rnode)):
                if not isinstance(side, OPERAND_TERMS) or not side.sort.is_scalar:
                    raise _mismatch(n, f"<{tag}> compares single scalar colors only")
            if not S.compatible(left.sort, right.sort):
                raise _mismatch(node, f"cannot compare {left.sort.id} with {right.sort.id}")
            return X.Compare(tag, left, right)
        raise _mismatch(node, f"<{tag}> is not a condition")


def _is_literal(node):
    while node.tag == "subterm" and node.children:
        node = node.children[0]
    return node.tag in ("finiteintrangeconstant", "useroperator", "dotconstant")


def lower_to_ir(doc, table):
    """Lower the first net of ``doc`` to a typed HLNet."""
    raw = doc.nets[0]
    lw = _Lowerer(table)
    ids = {}

    def claim(id, node):
        if id in ids:
            raise ParseError(ErrorKind.DUPLICATE_ID, node.pos, f"id {id!r} is used twice")
        ids[id] = node

    places = []
    place_sorts = {}
    for rp in raw.places:
        claim(rp.id, rp)
        sort = lw.sort(rp.type) if rp.type is not None else S.DOT
        marking = None
        if rp.marking is not None:
            marking = lw.term(rp.marking, sort)
            if X.variables(marking):
                raise _mismatch(rp.marking, f"initial marking of {rp.id!r} mentions variables")
            if not S.compatible(marking.sort, sort):
                raise _mismatch(rp.marking, f"marking of sort {marking.sort.id} in place of sort {sort.id}")
        elif rp.pt_marking is not None:
            if sort.kind is not S.SortKind.DOT:
                raise _mismatch(rp, f"integer marking on colored place {rp.id!r}")
            marking = X.NumberOf(rp.pt_marking, X.Const(0, S.DOT), S.DOT) if rp.pt_marking else None
        place_sorts[rp.id] = sort
        places.append(Place(rp.id, sort, marking, rp.label))

    transitions = []
    for rt in raw.transitions:
        claim(rt.id, rt)
        guard = lw.condition(rt.condition) if rt.condition is not None else X.TRUE
        transitions.append(Transition(rt.id, guard, rt.label))
    trans_ids = {t.id for t in transitions}

    arcs = []
    for ra in raw.arcs:
        claim(ra.id, ra)
        for end in (ra.source, ra.target):
            if end not in place_sorts and end not in trans_ids:
                raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, ra.pos, f"arc end {end!r} is not a node")
        if ra.source in place_sorts and ra.target in trans_ids:
            pid = ra.source
        elif ra.source in trans_ids and ra.target in place_sorts:
            pid = ra.target
        else:
            raise _mismatch(ra, f"arc {ra.id!r} must join a place and a transition")
        sort = place_sorts[pid]
        if ra.inscription is not None:
            ins = lw.term(ra.inscription, sort)
            if not S.compatible(ins.sort, sort):
                raise _mismatch(ra.inscription,
                                f"inscription of sort {ins.sort.id} on place {pid!r} of sort {sort.id}")
        elif sort.kind is S.SortKind.DOT:
            w = 1 if ra.pt_weight is None else ra.pt_weight
            ins = X.Const(0, S.DOT) if w == 1 else X.NumberOf(w, X.Const(0, S.DOT), S.DOT)
        else:
            raise _mismatch(ra, f"arc {ra.id!r} on colored place {pid!r} lacks an inscription")
        arcs.append(Arc(ra.source, ra.target, ins, ra.id))

    return HLNet(raw.id, places, transitions, arcs, table)

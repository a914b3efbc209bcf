"""Materialize sort, variable and partition declarations."""

from hlunfold.errors import ErrorKind, ParseError
from hlunfold.hlnet import sorts as S
from hlunfold.hlnet.net import SortTable, Variable


class _Resolver:
    def __init__(self, decls):
        self.nodes = {}
        self.table = SortTable()
        self.pending = set()
        seen = {}
        for d in decls:
            self._claim(seen, d.attrs["id"], d)
            if d.tag in ("namedsort", "partition"):
                self.nodes[d.attrs["id"]] = d
            if d.tag == "namedsort":
                for c in d.children[0].children:
                    if c.tag == "feconstant":
                        self._claim(seen, c.attrs["id"], c)
            if d.tag == "partition":
                for c in d.children[1:]:
                    self._claim(seen, c.attrs["id"], c)
        self.decls = decls

    @staticmethod
    def _claim(seen, id, node):
        if id in seen:
            line, col = seen[id].pos
            raise ParseError(ErrorKind.DUPLICATE_ID, node.pos,
                             f"id {id!r} already declared at {line}:{col}")
        seen[id] = node

    def named(self, id, pos):
        if id in self.table.sorts:
            return self.table.sorts[id]
        node = self.nodes.get(id)
        if node is None:
            raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, pos, f"unknown sort {id!r}")
        if id in self.pending:
            raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos, f"sort {id!r} is defined in terms of itself")
        self.pending.add(id)
        sort = self.partition(node) if node.tag == "partition" else self.sort(node.children[0], id)
        self.pending.discard(id)
        self.table.sorts[id] = sort
        return sort

    def sort(self, node, id=None):
        """Build the sort described by a sort element; ``id`` names it if declared."""
        tag = node.tag
        if tag == "usersort":
            return self.named(node.attrs["declaration"], node.pos)
        if tag == "dot":
            return S.DOT
        if tag in ("cyclicenumeration", "finiteenumeration"):
            consts = node.all("feconstant")
            if not consts:
                raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos, "enumeration without constants")
            names = tuple(c.attrs.get("name") or c.attrs["id"] for c in consts)
            make = S.cyclic_enum if tag == "cyclicenumeration" else S.finite_enum
            sort = make(id or f"<{tag}@{node.pos[0]}>", names)
            for i, c in enumerate(consts):
                self.table.constants[c.attrs["id"]] = (sort, i)
            return sort
        if tag == "finiteintrange":
            lo, hi = _int(node, "start"), _int(node, "end")
            if lo > hi:
                raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos, f"empty range {lo}..{hi}")
            return S.int_range(id or f"{lo}..{hi}", lo, hi)
        if tag == "productsort":
            comps = [self.sort(c) for c in node.children]
            if not comps:
                raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos, "product sort without components")
            return S.product(id or "x".join(c.id for c in comps), comps)
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos, f"unsupported sort <{tag}>")

    def partition(self, node):
        base_node = node.children[0]
        base = self.sort(base_node)
        if not base.is_scalar or base.kind is S.SortKind.PARTITION:
            raise ParseError(ErrorKind.TYPE_MISMATCH, base_node.pos,
                             "partitions must refine a scalar enumeration")
        owner = {}
        elements = []
        for elem in node.children[1:]:
            members = []
            for ref in elem.children:
                cid = ref.attrs["declaration"]
                if cid not in self.table.constants:
                    raise ParseError(ErrorKind.UNRESOLVED_REFERENCE, ref.pos, f"unknown constant {cid!r}")
                csort, idx = self.table.constants[cid]
                if not S.compatible(csort, base):
                    raise ParseError(ErrorKind.TYPE_MISMATCH, ref.pos,
                                     f"constant {cid!r} does not belong to {base.id}")
                if idx in owner:
                    raise ParseError(ErrorKind.TYPE_MISMATCH, ref.pos,
                                     f"constant {cid!r} already belongs to element {owner[idx]!r}")
                owner[idx] = elem.attrs["id"]
                members.append(idx)
            if not members:
                raise ParseError(ErrorKind.TYPE_MISMATCH, elem.pos, "empty partition element")
            elements.append((elem.attrs["id"], elem.attrs.get("name") or elem.attrs["id"], members))
        if len(owner) != base.size:
            raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos,
                             f"partition {node.attrs['id']!r} does not cover {base.id}")
        sort = S.partition(node.attrs["id"], base, elements)
        for e in sort.elements:
            self.table.partition_elements[e.id] = (sort, e)
        return sort

    def run(self):
        for d in self.decls:
            if d.tag in ("namedsort", "partition"):
                self.named(d.attrs["id"], d.pos)
        for d in self.decls:
            if d.tag == "variabledecl":
                sort = self.sort(d.children[0])
                vid = d.attrs["id"]
                self.table.variables[vid] = Variable(vid, d.attrs.get("name") or vid, sort)
        return self.table


def _int(node, attr):
    raw = node.require(attr)
    try:
        return int(raw)
    except ValueError:
        raise ParseError(ErrorKind.TYPE_MISMATCH, node.pos, f"{attr}={raw!r} is not an integer") from None


def resolve_declarations(doc):
    """Build the SortTable of the first net of ``doc``."""
    return _Resolver(doc.nets[0].declarations).run()

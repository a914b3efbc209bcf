"""XML decoding of PNML documents into a positioned raw syntax tree.

The raw tree is the unvalidated, XML-level view of a document: every node
keeps its tag, attributes, text and the (line, column) where it starts.
Graphics and tool-specific blocks are dropped while reading.
"""

import io
import logging
from dataclasses import dataclass, field
from xml.parsers import expat

from hlunfold.errors import ErrorKind, ParseError

log = logging.getLogger(__name__)

BOM = b"\xef\xbb\xbf"

SKIPPED = frozenset({"graphics", "toolspecific"})

SORT_TAGS = frozenset({"dot", "cyclicenumeration", "finiteenumeration", "finiteintrange",
                       "productsort", "usersort"})
TERM_TAGS = frozenset({"variable", "useroperator", "dotconstant", "finiteintrangeconstant",
                       "successor", "predecessor", "tuple", "all", "add", "subtract",
                       "numberof", "numberconstant"})
CONDITION_TAGS = frozenset({"or", "and", "equality", "inequality", "lessthan", "greaterthan",
                            "greaterthanorequal", "lessthanorequal"})
DECLARATION_TAGS = frozenset({"namedsort", "variabledecl", "partition"})


@dataclass
class RawNode:
    tag: str
    attrs: dict
    pos: tuple
    children: list = field(default_factory=list)
    text: str = ""

    def child(self, tag):
        for c in self.children:
            if c.tag == tag:
                return c
        return None

    def all(self, tag):
        return [c for c in self.children if c.tag == tag]

    def require(self, attr):
        try:
            return self.attrs[attr]
        except KeyError:
            raise ParseError(ErrorKind.MISSING_ATTRIBUTE, self.pos,
                             f"<{self.tag}> lacks attribute {attr!r}") from None


@dataclass
class RawPlace:
    id: str
    pos: tuple
    label: str = None
    type: RawNode = None
    marking: RawNode = None
    pt_marking: int = None


@dataclass
class RawTransition:
    id: str
    pos: tuple
    label: str = None
    condition: RawNode = None


@dataclass
class RawArc:
    id: str
    source: str
    target: str
    pos: tuple
    inscription: RawNode = None
    pt_weight: int = None


@dataclass
class RawPage:
    id: str
    pos: tuple
    places: list = field(default_factory=list)
    transitions: list = field(default_factory=list)
    arcs: list = field(default_factory=list)


@dataclass
class RawNet:
    id: str
    pos: tuple
    type: str = None
    label: str = None
    declarations: list = field(default_factory=list)
    pages: list = field(default_factory=list)

    @property
    def places(self):
        return [p for page in self.pages for p in page.places]

    @property
    def transitions(self):
        return [t for page in self.pages for t in page.transitions]

    @property
    def arcs(self):
        return [a for page in self.pages for a in page.arcs]


@dataclass
class RawDocument:
    nets: list


# -- XML layer ---------------------------------------------------------------

def _local(name):
    return name.rsplit(":", 1)[-1]


class _TreeBuilder:
    def __init__(self, parser):
        self.parser = parser
        self.root = None
        self.stack = []
        self.text = []
        self.skip = 0

    def pos(self):
        return (self.parser.CurrentLineNumber, self.parser.CurrentColumnNumber + 1)

    def start(self, name, attrs):
        tag = _local(name)
        if self.skip or tag in SKIPPED:
            self.skip += 1
            return
        node = RawNode(tag, {_local(k): v for k, v in attrs.items()}, self.pos())
        if self.stack:
            self.stack[-1].children.append(node)
        else:
            self.root = node
        self.stack.append(node)
        self.text.append([])

    def end(self, name):
        if self.skip:
            self.skip -= 1
            return
        node = self.stack.pop()
        node.text = "".join(self.text.pop()).strip()

    def chars(self, data):
        if not self.skip and self.text:
            self.text[-1].append(data)


def _clamp(data, line, col):
    lines = data.split(b"\n")
    line = max(1, min(line, len(lines)))
    col = max(1, min(col, len(lines[line - 1]) + 1))
    return (line, col)


def read_xml(data):
    """Parse UTF-8 bytes into a RawNode tree."""
    if data.startswith(BOM):
        data = data[len(BOM):]
    parser = expat.ParserCreate("UTF-8")
    builder = _TreeBuilder(parser)
    parser.StartElementHandler = builder.start
    parser.EndElementHandler = builder.end
    parser.CharacterDataHandler = builder.chars
    parser.buffer_text = True
    try:
        parser.Parse(data, True)
    except expat.ExpatError as exc:
        raise ParseError(ErrorKind.MALFORMED_XML, _clamp(data, exc.lineno, exc.offset + 1),
                         expat.ErrorString(exc.code)) from None
    if builder.root is None:
        raise ParseError(ErrorKind.MALFORMED_XML, (1, 1), "no root element")
    return builder.root


# -- PNML structure ----------------------------------------------------------

def _label(node):
    name = node.child("name")
    if name is not None:
        text = name.child("text")
        if text is not None:
            return text.text
    return None


def _structure(label):
    """The single semantic child of an hl label (``<structure>`` wrapper)."""
    st = label.child("structure")
    if st is None:
        return None
    if len(st.children) != 1:
        raise ParseError(ErrorKind.UNKNOWN_ELEMENT, st.pos,
                         f"<structure> must hold exactly one element, found {len(st.children)}")
    return st.children[0]


def _pt_int(label):
    text = label.child("text")
    raw = text.text if text is not None else label.text
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(ErrorKind.TYPE_MISMATCH, label.pos,
                         f"expected an integer in <{label.tag}>, found {raw!r}") from None
    if value < 0:
        raise ParseError(ErrorKind.TYPE_MISMATCH, label.pos, "negative value")
    return value


def _check_sort(node):
    if node.tag == "partition":
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos,
                         "partition declarations belong in <declarations>")
    if node.tag not in SORT_TAGS:
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos, f"unsupported sort <{node.tag}>")
    if node.tag == "usersort":
        node.require("declaration")
    elif node.tag == "finiteintrange":
        node.require("start")
        node.require("end")
    elif node.tag in ("cyclicenumeration", "finiteenumeration"):
        for c in node.children:
            if c.tag != "feconstant":
                raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos,
                                 f"unexpected <{c.tag}> in enumeration")
            c.require("id")
    elif node.tag == "productsort":
        for c in node.children:
            _check_sort(c)


def _check_term(node, condition=False):
    tag = node.tag
    if tag == "subterm":
        if len(node.children) != 1:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, node.pos, "<subterm> must hold one element")
        return _check_term(node.children[0], condition)
    if condition and tag in CONDITION_TAGS:
        for c in node.children:
            _check_term(c, condition=True)
        return
    if tag not in TERM_TAGS:
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos,
                         f"operator <{tag}> is not supported")
    if tag == "variable":
        node.require("refvariable")
    elif tag == "useroperator":
        node.require("declaration")
    elif tag == "finiteintrangeconstant":
        node.require("value")
        rng = node.child("finiteintrange")
        if rng is None:
            raise ParseError(ErrorKind.MISSING_ATTRIBUTE, node.pos,
                             "<finiteintrangeconstant> lacks its <finiteintrange>")
        _check_sort(rng)
    elif tag == "numberconstant":
        node.require("value")
    elif tag == "all":
        if len(node.children) != 1:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, node.pos, "<all> must name one sort")
        _check_sort(node.children[0])
    elif tag == "dotconstant":
        pass
    else:
        for c in node.children:
            _check_term(c, condition)


def _check_declaration(node):
    if node.tag not in DECLARATION_TAGS:
        raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, node.pos,
                         f"declaration <{node.tag}> is not supported")
    node.require("id")
    if node.tag == "partition":
        if not node.children or node.children[0].tag != "usersort":
            raise ParseError(ErrorKind.MISSING_ATTRIBUTE, node.pos, "partition lacks its base sort")
        _check_sort(node.children[0])
        for c in node.children[1:]:
            if c.tag != "partitionelement":
                raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos,
                                 f"unexpected <{c.tag}> in partition")
            c.require("id")
            for m in c.children:
                if m.tag != "useroperator":
                    raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, m.pos,
                                     f"unexpected <{m.tag}> in partition element")
                m.require("declaration")
    else:
        if len(node.children) != 1:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, node.pos,
                             f"<{node.tag}> must hold exactly one sort")
        _check_sort(node.children[0])


def _place(node):
    p = RawPlace(node.require("id"), node.pos, label=_label(node))
    for c in node.children:
        if c.tag == "name":
            continue
        if c.tag == "type":
            p.type = _structure(c)
            if p.type is not None:
                _check_sort(p.type)
        elif c.tag == "hlinitialMarking":
            p.marking = _structure(c)
            if p.marking is not None:
                _check_term(p.marking)
        elif c.tag == "initialMarking":
            p.pt_marking = _pt_int(c)
        else:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in place")
    return p


def _transition(node):
    t = RawTransition(node.require("id"), node.pos, label=_label(node))
    for c in node.children:
        if c.tag == "name":
            continue
        if c.tag == "condition":
            t.condition = _structure(c)
            if t.condition is not None:
                _check_term(t.condition, condition=True)
        else:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in transition")
    return t


def _arc(node):
    a = RawArc(node.require("id"), node.require("source"), node.require("target"), node.pos)
    for c in node.children:
        if c.tag == "name":
            continue
        if c.tag == "hlinscription":
            a.inscription = _structure(c)
            if a.inscription is not None:
                _check_term(a.inscription)
        elif c.tag == "inscription":
            a.pt_weight = _pt_int(c)
        else:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in arc")
    return a


def _page(node, net):
    page = RawPage(node.attrs.get("id", ""), node.pos)
    net.pages.append(page)
    for c in node.children:
        if c.tag == "place":
            page.places.append(_place(c))
        elif c.tag == "transition":
            page.transitions.append(_transition(c))
        elif c.tag == "arc":
            page.arcs.append(_arc(c))
        elif c.tag == "page":
            _page(c, net)
        elif c.tag == "name":
            continue
        elif c.tag in ("referencePlace", "referenceTransition"):
            raise ParseError(ErrorKind.UNSUPPORTED_CONSTRUCT, c.pos, f"<{c.tag}> is not supported")
        else:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in page")


def _net(node):
    net = RawNet(node.require("id"), node.pos, type=node.attrs.get("type"), label=_label(node))
    for c in node.children:
        if c.tag == "page":
            _page(c, net)
        elif c.tag == "declaration":
            st = c.child("structure")
            decls = st.child("declarations") if st is not None else None
            if decls is None:
                continue
            for d in decls.children:
                _check_declaration(d)
                net.declarations.append(d)
        elif c.tag == "name":
            continue
        else:
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in net")
    return net


def parse_document(source):
    """Decode a PNML document.

    ``source`` is a binary stream or a bytes object, read as UTF-8.
    Only the first ``<net>`` is decoded; further nets are reported on the
    log and ignored.
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    if isinstance(data, str):
        raise TypeError("parse_document expects bytes, not str")
    root = read_xml(bytes(data))
    if root.tag != "pnml":
        raise ParseError(ErrorKind.UNKNOWN_ELEMENT, root.pos, f"root element is <{root.tag}>, not <pnml>")
    nets = root.all("net")
    for c in root.children:
        if c.tag != "net":
            raise ParseError(ErrorKind.UNKNOWN_ELEMENT, c.pos, f"unexpected <{c.tag}> in pnml")
    if not nets:
        raise ParseError(ErrorKind.MISSING_ATTRIBUTE, root.pos, "document contains no <net>")
    if len(nets) > 1:
        line, col = nets[1].pos
        log.warning("%d:%d: ignoring %d additional net(s)", line, col, len(nets) - 1)
    return RawDocument([_net(nets[0])])


def parse_file(path):
    with open(path, "rb") as fh:
        return parse_document(fh)


def parse_string(text):
    return parse_document(io.BytesIO(text.encode("utf-8")))

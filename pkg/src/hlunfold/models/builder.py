"""Tiny PNML writer for high-level nets, used to produce the bundled models.

Terms are plain XML fragments; the helpers below assemble them.
"""

from xml.sax.saxutils import escape, quoteattr

NS = "http://www.pnml.org/version-2009/grammar/pnml"
SYMNET = "http://www.pnml.org/version-2009/grammar/symmetricnet"


def _sub(*terms):
    return "".join(f"<subterm>{t}</subterm>" for t in terms)


def var(name):
    return f"<variable refvariable={quoteattr(name)}/>"


def const(id):
    return f"<useroperator declaration={quoteattr(id)}/>"


def dot():
    return "<dotconstant/>"


def intc(value, lo, hi):
    return (f'<finiteintrangeconstant value="{value}">'
            f'<finiteintrange start="{lo}" end="{hi}"/></finiteintrangeconstant>')


def succ(t):
    return f"<successor>{_sub(t)}</successor>"


def pred(t):
    return f"<predecessor>{_sub(t)}</predecessor>"


def tup(*ts):
    return f"<tuple>{_sub(*ts)}</tuple>"


def all_(sort):
    return f"<all><usersort declaration={quoteattr(sort)}/></all>"


def add(*ts):
    return f"<add>{_sub(*ts)}</add>"


def sub(a, b):
    return f"<subtract>{_sub(a, b)}</subtract>"


def num(k, t):
    return (f'<numberof><subterm><numberconstant value="{k}"><positive/></numberconstant>'
            f"</subterm>{_sub(t)}</numberof>")


def num1(t):
    """``numberof`` without a multiplicity child."""
    return f"<numberof>{_sub(t)}</numberof>"


def _cond(tag):
    def make(*ts):
        return f"<{tag}>{_sub(*ts)}</{tag}>"
    make.__name__ = tag
    return make


and_ = _cond("and")
or_ = _cond("or")
eq = _cond("equality")
ne = _cond("inequality")
lt = _cond("lessthan")
gt = _cond("greaterthan")
ge = _cond("greaterthanorequal")
le = _cond("lessthanorequal")


class NetBuilder:
    """Accumulates declarations and nodes, then renders one PNML document."""

    def __init__(self, net_id):
        self.net_id = net_id
        self.decls = []
        self.nodes = []
        self._arcs = 0

    def cyclic(self, id, names, ids=None):
        self._enum("cyclicenumeration", id, names, ids)

    def finite(self, id, names, ids=None):
        self._enum("finiteenumeration", id, names, ids)

    def _enum(self, tag, id, names, ids):
        ids = ids or names
        consts = "".join(f"<feconstant id={quoteattr(i)} name={quoteattr(n)}/>"
                         for i, n in zip(ids, names))
        self.decls.append(f'<namedsort id={quoteattr(id)} name={quoteattr(id)}><{tag}>{consts}</{tag}></namedsort>')

    def intrange(self, id, lo, hi):
        self.decls.append(f'<namedsort id={quoteattr(id)} name={quoteattr(id)}>'
                          f'<finiteintrange start="{lo}" end="{hi}"/></namedsort>')

    def dotsort(self, id):
        self.decls.append(f'<namedsort id={quoteattr(id)} name={quoteattr(id)}><dot/></namedsort>')

    def product(self, id, comps):
        inner = "".join(f"<usersort declaration={quoteattr(c)}/>" for c in comps)
        self.decls.append(f'<namedsort id={quoteattr(id)} name={quoteattr(id)}>'
                          f"<productsort>{inner}</productsort></namedsort>")

    def partition(self, id, base, elements):
        """``elements`` maps element id -> list of constant ids."""
        inner = "".join(
            f"<partitionelement id={quoteattr(e)} name={quoteattr(e)}>"
            + "".join(const(c) for c in members) + "</partitionelement>"
            for e, members in elements.items())
        self.decls.append(f'<partition id={quoteattr(id)} name={quoteattr(id)}>'
                          f"<usersort declaration={quoteattr(base)}/>{inner}</partition>")

    def variable(self, id, sort):
        self.decls.append(f'<variabledecl id={quoteattr(id)} name={quoteattr(id)}>'
                          f"<usersort declaration={quoteattr(sort)}/></variabledecl>")

    def place(self, id, sort, marking=None):
        m = f"<hlinitialMarking><structure>{marking}</structure></hlinitialMarking>" if marking else ""
        self.nodes.append(f'<place id={quoteattr(id)}><name><text>{escape(id)}</text></name>'
                          f"<type><structure><usersort declaration={quoteattr(sort)}/></structure></type>"
                          f"{m}</place>")

    def transition(self, id, condition=None):
        c = f"<condition><structure>{condition}</structure></condition>" if condition else ""
        self.nodes.append(f'<transition id={quoteattr(id)}><name><text>{escape(id)}</text></name>{c}</transition>')

    def arc(self, source, target, inscription):
        self._arcs += 1
        self.nodes.append(f'<arc id="arc{self._arcs}" source={quoteattr(source)} target={quoteattr(target)}>'
                          f"<hlinscription><structure>{inscription}</structure></hlinscription></arc>")

    def render(self):
        lines = ['<?xml version="1.0" encoding="UTF-8"?>',
                 f'<pnml xmlns="{NS}">',
                 f'<net id={quoteattr(self.net_id)} type="{SYMNET}">',
                 f"<name><text>{escape(self.net_id)}</text></name>",
                 "<declaration><structure><declarations>"]
        lines += self.decls
        lines.append("</declarations></structure></declaration>")
        lines.append('<page id="page0">')
        lines += self.nodes
        lines += ["</page>", "</net>", "</pnml>", ""]
        return "\n".join(lines)

    def to_bytes(self):
        return self.render().encode("utf-8")

"""Serializers for CoreNets, ring scripts and the debug view of an HLNet.

Every writer takes a binary sink, writes UTF-8 with ``\\n`` newlines and
returns the number of bytes written. Output is produced in chunks so large
nets never sit in memory as one document.

TINA ``.net`` identifiers outside ``[A-Za-z0-9_]`` are wrapped in braces with
``\\``, ``{`` and ``}`` escaped by a backslash; labels and note texts use the
same brace quoting.
"""

import dataclasses
import re
from xml.sax.saxutils import escape, quoteattr

from hlunfold.composer import format_script
from hlunfold.corenet import CoreNet, CorePlace, CoreTransition, sanitize
from hlunfold.errors import InvalidIdentifier
from hlunfold.hlnet import expr as X
from hlunfold.hlnet.sorts import SortKind

PTNET_TYPE = "http://www.pnml.org/version-2009/grammar/ptnet"
PNML_NS = "http://www.pnml.org/version-2009/grammar/pnml"
EXTENSIONS = {"net": ".net", "lola": ".lola", "pnml": ".pnml", "ring": ".ring", "debug": ".net"}

_PLAIN = re.compile(r"[A-Za-z0-9_]+")
LOLA_KEYWORDS = frozenset({
    "PLACE", "MARKING", "TRANSITION", "CONSUME", "PRODUCE", "SAFE", "FAIR",
    "STRONG", "WEAK", "ANALYSE", "FORMULA",
})


class _Sink:
    """Buffered UTF-8 writer that counts bytes."""

    def __init__(self, raw, chunk=1 << 16):
        self.raw = raw
        self.parts = []
        self.pending = 0
        self.chunk = chunk
        self.count = 0

    def write(self, text):
        self.parts.append(text)
        self.pending += len(text)
        if self.pending >= self.chunk:
            self.flush()

    def flush(self):
        if self.parts:
            data = "".join(self.parts).encode("utf-8")
            self.raw.write(data)
            self.count += len(data)
            self.parts.clear()
            self.pending = 0
        return self.count


def _brace(text):
    return "{" + text.replace("\\", "\\\\").replace("{", "\\{").replace("}", "\\}") + "}"


def tina_id(name):
    return name if _PLAIN.fullmatch(name) else _brace(name)


# -- TINA .net ---------------------------------------------------------------

def _items(net, arcs):
    out = []
    for p, w in arcs:
        pid = tina_id(net.places[p].name)
        out.append(pid if w == 1 else f"{pid}*{w}")
    return out


def write_net(net, sink, name=None):
    out = _Sink(sink)
    out.write(f"net {tina_id(name or net.name)}\n")
    for p in net.places:
        if p.marking:
            out.write(f"pl {tina_id(p.name)} ({p.marking})\n")
    for t in net.transitions:
        words = ["tr", tina_id(t.name), *_items(net, t.inputs), "->", *_items(net, t.outputs)]
        out.write(" ".join(words) + "\n")
    return out.flush()


# -- LoLA --------------------------------------------------------------------

def lola_ids(net):
    """LoLA identifier of every place and transition, in net order."""
    ids, seen = [], set()
    for node in (*net.places, *net.transitions):
        name = sanitize(node.name)
        if not name or name in LOLA_KEYWORDS or name in seen:
            raise InvalidIdentifier(f"{node.name!r} has no distinct LoLA identifier")
        seen.add(name)
        ids.append(name)
    return ids


def write_lola(net, sink, name=None):
    ids = lola_ids(net)
    pids, tids = ids[:len(net.places)], ids[len(net.places):]
    out = _Sink(sink)
    if pids:
        out.write("PLACE\n")
        for i, pid in enumerate(pids):
            out.write(f"  {pid}{';' if i == len(pids) - 1 else ','}\n")
    else:
        out.write("PLACE ;\n")
    marked = [(pid, p.marking) for pid, p in zip(pids, net.places) if p.marking]
    if marked:
        out.write("MARKING\n")
        for i, (pid, k) in enumerate(marked):
            out.write(f"  {pid}: {k}{';' if i == len(marked) - 1 else ','}\n")
    else:
        out.write("MARKING ;\n")
    for tid, t in zip(tids, net.transitions):
        out.write(f"\nTRANSITION {tid}\n")
        for key, arcs in (("CONSUME", t.inputs), ("PRODUCE", t.outputs)):
            body = ", ".join(f"{pids[p]}: {w}" for p, w in arcs)
            out.write(f"  {key} {body};\n" if body else f"  {key} ;\n")
    return out.flush()


# -- P/T PNML ----------------------------------------------------------------

def write_ptnet_pnml(net, sink, name=None):
    """P/T PNML in the indented layout of the PNML reference tooling.

    Every node carries a ``<name>`` label equal to its id.
    """
    out = _Sink(sink)
    names = {node.name for node in (*net.places, *net.transitions)}
    title = name or net.name
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<pnml xmlns="{PNML_NS}">\n')
    out.write(f'  <net id={quoteattr(title)} type="{PTNET_TYPE}">\n')
    out.write(f"    <name>\n      <text>{escape(title)}</text>\n    </name>\n")
    out.write('    <page id="page0">\n')
    for p in net.places:
        out.write(f"      <place id={quoteattr(p.name)}>\n"
                  f"        <name>\n          <text>{escape(p.name)}</text>\n        </name>\n")
        if p.marking:
            out.write(f"        <initialMarking>\n          <text>{p.marking}</text>\n"
                      "        </initialMarking>\n")
        out.write("      </place>\n")
    for t in net.transitions:
        out.write(f"      <transition id={quoteattr(t.name)}>\n"
                  f"        <name>\n          <text>{escape(t.name)}</text>\n        </name>\n"
                  "      </transition>\n")
    k = 0
    for t in net.transitions:
        tid = quoteattr(t.name)
        for arcs, consume in ((t.inputs, True), (t.outputs, False)):
            for p, w in arcs:
                k += 1
                aid = f"a{k}"
                while aid in names:
                    aid += "_"
                pid = quoteattr(net.places[p].name)
                ends = f"source={pid} target={tid}" if consume else f"source={tid} target={pid}"
                if w == 1:
                    out.write(f'      <arc id="{aid}" {ends}/>\n')
                else:
                    out.write(f'      <arc id="{aid}" {ends}>\n        <inscription>\n'
                              f"          <text>{w}</text>\n        </inscription>\n      </arc>\n")
    out.write("    </page>\n  </net>\n</pnml>\n")
    return out.flush()


def read_ptnet_pnml(source):
    """Rebuild a CoreNet from P/T PNML bytes (test read-back path)."""
    from hlunfold.pnml.decoder import parse_document

    raw = parse_document(source).nets[0]
    places = [CorePlace(p.id, p.pt_marking or 0) for p in raw.places]
    index = {p.name: i for i, p in enumerate(places)}
    transitions = [CoreTransition(t.id) for t in raw.transitions]
    tindex = {t.name: t for t in transitions}
    for a in raw.arcs:
        w = 1 if a.pt_weight is None else a.pt_weight
        if a.target in tindex:
            tindex[a.target].inputs.append((index[a.source], w))
        else:
            tindex[a.source].outputs.append((index[a.target], w))
    return CoreNet(raw.id, places, transitions)


# -- ring scripts ------------------------------------------------------------

def write_ring(script, sink, name=None):
    if name:
        script = dataclasses.replace(script, name=name)
    data = format_script(script).encode("utf-8")
    sink.write(data)
    return len(data)


# -- debug view --------------------------------------------------------------

def _sort_text(s):
    k = s.kind
    if k is SortKind.DOT:
        return "dot"
    if k in (SortKind.FINITE_ENUM, SortKind.CYCLIC_ENUM):
        word = "cyclic" if k is SortKind.CYCLIC_ENUM else "finite"
        return f"{word} {{{', '.join(s.constants)}}}"
    if k is SortKind.INT_RANGE:
        return f"{s.bounds[0]}..{s.bounds[1]}"
    if k is SortKind.PRODUCT:
        return " x ".join(c.id for c in s.components)
    parts = "; ".join(f"{e.name}: {', '.join(s.base.display(v) for v in e.members)}" for e in s.elements)
    return f"partition of {s.base.id} {{{parts}}}"


def write_debug_view(net, sink, name=None):
    """The HLNet itself in TINA syntax: labels on nodes, notes for declarations.

    Arcs on dot-typed places carry no note; their inscription is a token count.
    """
    out = _Sink(sink)
    out.write(f"net {tina_id(name or net.name)}\n")
    for p in net.places:
        out.write(f"pl {tina_id(p.id)}\n")
        marking = X.render(p.marking) if p.marking is not None else ""
        out.write(f"lb {tina_id(p.id)} {_brace(marking)}\n")
    for t in net.transitions:
        ins = [tina_id(a.source) for a in net.inputs(t.id)]
        outs = [tina_id(a.target) for a in net.outputs(t.id)]
        out.write(" ".join(["tr", tina_id(t.id), *ins, "->", *outs]) + "\n")
        guard = "" if isinstance(t.guard, X.TrueGuard) else X.render(t.guard)
        out.write(f"lb {tina_id(t.id)} {_brace(guard)}\n")
    decl = net.declarations
    notes = 0
    for sid, s in decl.sorts.items():
        notes += 1
        out.write(f"nt n{notes} 1 {_brace(f'sort {sid} = {_sort_text(s)}')}\n")
    for vid, v in decl.variables.items():
        notes += 1
        out.write(f"nt n{notes} 1 {_brace(f'var {vid} : {v.sort.id}')}\n")
    for a in net.arcs:
        if a.inscription.sort.kind is SortKind.DOT:
            continue
        notes += 1
        out.write(f"nt n{notes} 1 {_brace(f'arc {a.source} -> {a.target} : {X.render(a.inscription)}')}\n")
    return out.flush()


WRITERS = {"net": write_net, "lola": write_lola, "pnml": write_ptnet_pnml,
           "ring": write_ring, "debug": write_debug_view}

"""Ring decomposition and the compact ``.ring`` composition script.

A net qualifies when every place has the same cyclic sort P of size n, every
transition depends on a single variable x of sort P, no transition has a
guard, every inscription is ``x``, ``x++`` or ``x--`` and every initial
marking puts the same number of tokens on each color. The unfolding is then
n copies of one component, copy i wired to copy i+1 or i-1.

Script grammar (one record per line, tokens separated by single spaces,
``#`` starts a comment line)::

    ring <name> <n>
    colors <prefix> <start>            copy i is named <prefix><start+i>
    names <face> ...                   or: n explicit copy names
    place <id> <tokens-per-copy>
    local <id> {consume|produce <place> <w>}*
    distant <id> <+1|-1> {consume|produce <place>[@neighbor] <w>}*

An empty prefix or face is written ``-``. Transitions are listed in net
order, and arcs in the order consume arcs then produce arcs, so that
expansion reproduces the unfolder's naming and arc order exactly.
"""

import re
from dataclasses import dataclass, field

from hlunfold.corenet import CoreNet, CorePlace, CoreTransition, Mangler, sanitize
from hlunfold.errors import EvaluationError
from hlunfold.hlnet import expr as X
from hlunfold.hlnet.sorts import SortKind
from hlunfold.hlnet.net import environment

NEIGHBOR = "@neighbor"
_TOKEN = re.compile(r"[^\s@#]+")


@dataclass
class RingTransition:
    id: str
    offset: int  # 0 for local transitions
    consume: list = field(default_factory=list)  # (place id, neighbor?, weight)
    produce: list = field(default_factory=list)

    @property
    def local(self):
        return self.offset == 0


@dataclass
class RingDecomposition:
    name: str
    sort: object
    places: list  # (place id, tokens per copy)
    transitions: list

    @property
    def n(self):
        return self.sort.size

    @property
    def local(self):
        return [t.id for t in self.transitions if t.local]

    @property
    def distant(self):
        return [(t.id, t.offset) for t in self.transitions if not t.local]


@dataclass
class CompositionScript:
    name: str
    n: int
    faces: list = None           # explicit sanitized copy names, or
    prefix: str = None           # copy i is prefix + str(start + i)
    start: int = 0
    places: list = field(default_factory=list)
    transitions: list = field(default_factory=list)

    def face(self, i):
        return self.faces[i] if self.faces is not None else f"{self.prefix}{self.start + i}"


# -- detection ---------------------------------------------------------------

def _offset(e, x):
    if isinstance(e, X.Var) and e.name == x:
        return 0
    if isinstance(e, (X.Successor, X.Predecessor)) and isinstance(e.arg, X.Var) and e.arg.name == x:
        return 1 if isinstance(e, X.Successor) else -1
    return None


def _uniform_symbolic(e, sort):
    if e is None:
        return 0
    if isinstance(e, X.All) and e.sort == sort:
        return 1
    if isinstance(e, X.NumberOf):
        k = _uniform_symbolic(e.arg, sort)
        return None if k is None else k * e.count
    if isinstance(e, X.Add):
        total = 0
        for a in e.args:
            k = _uniform_symbolic(a, sort)
            if k is None:
                return None
            total += k
        return total
    return None


def _uniform(net, place, sort):
    k = _uniform_symbolic(place.marking, sort)
    if k is not None:
        return k
    try:
        m = net.initial_marking(place.id)
    except EvaluationError:
        return None
    counts = {m.get(v, 0) for v in sort.values}
    return counts.pop() if len(counts) == 1 else None


def detect_ring(net):
    """A RingDecomposition of ``net``, or None when it is not a ring."""
    if not net.places or not net.transitions:
        return None
    sort = net.places[0].sort
    if sort.kind is not SortKind.CYCLIC_ENUM:
        return None
    ids = [net.name] + [p.id for p in net.places] + [t.id for t in net.transitions]
    if not all(_TOKEN.fullmatch(i) for i in ids):
        return None
    places = []
    for p in net.places:
        if p.sort != sort:
            return None
        k = _uniform(net, p, sort)
        if k is None:
            return None
        places.append((p.id, k))
    transitions = []
    for t in net.transitions:
        if not isinstance(t.guard, X.TrueGuard):
            return None
        env = environment(net, t.id)
        if len(env) != 1:
            return None
        x = env[0]
        rt = RingTransition(t.id, 0)
        offsets = set()
        for arc in net.arcs_of(t.id):
            off = _offset(arc.inscription, x)
            if off is None or arc.inscription.sort != sort:
                return None
            if off:
                offsets.add(off)
            if arc.target == t.id:
                rt.consume.append((arc.source, bool(off), 1))
            else:
                rt.produce.append((arc.target, bool(off), 1))
        if len(offsets) > 1:
            return None
        rt.offset = offsets.pop() if offsets else 0
        transitions.append(rt)
    return RingDecomposition(net.name, sort, places, transitions)


# -- scripts -----------------------------------------------------------------

_NUMBERED = re.compile(r"(.*?)(0|[1-9][0-9]*)")


def _naming(faces):
    """``(prefix, start)`` when faces read prefix+start, prefix+start+1, ..."""
    m = _NUMBERED.fullmatch(faces[0])
    if not m:
        return None
    prefix, start = m.group(1), int(m.group(2))
    for i, f in enumerate(faces):
        if f != f"{prefix}{start + i}":
            return None
    return prefix, start


def emit_script(d):
    faces = [sanitize(d.sort.face(v)[0]) for v in d.sort.values]
    s = CompositionScript(d.name, d.n, places=list(d.places), transitions=list(d.transitions))
    naming = _naming(faces)
    if naming:
        s.prefix, s.start = naming
    else:
        s.faces = faces
    return s


def _tok(text):
    return text or "-"


def _untok(text):
    return "" if text == "-" else text


def format_script(s):
    lines = [f"ring {s.name} {s.n}"]
    if s.faces is None:
        lines.append(f"colors {_tok(s.prefix)} {s.start}")
    else:
        lines.append("names " + " ".join(_tok(f) for f in s.faces))
    lines += [f"place {pid} {k}" for pid, k in s.places]
    for t in s.transitions:
        head = f"local {t.id}" if t.local else f"distant {t.id} {t.offset:+d}"
        arcs = [f"consume {p}{NEIGHBOR if nb else ''} {w}" for p, nb, w in t.consume]
        arcs += [f"produce {p}{NEIGHBOR if nb else ''} {w}" for p, nb, w in t.produce]
        lines.append(" ".join([head, *arcs]))
    return "\n".join(lines) + "\n"


def parse_script(text):
    """Inverse of format_script; raises ValueError on malformed input."""
    s = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        words = line.split()
        try:
            head = words[0]
            if head == "ring":
                s = CompositionScript(" ".join(words[1:-1]), int(words[-1]))
                continue
            if s is None:
                raise ValueError("missing ring header")
            if head == "colors":
                s.prefix, s.start = _untok(words[1]), int(words[2])
            elif head == "names":
                s.faces = [_untok(w) for w in words[1:]]
            elif head == "place":
                s.places.append((words[1], int(words[2])))
            elif head in ("local", "distant"):
                offset = 0 if head == "local" else int(words[2])
                rest = words[2:] if head == "local" else words[3:]
                if head == "distant" and offset not in (1, -1):
                    raise ValueError("offset must be +1 or -1")
                t = RingTransition(words[1], offset)
                if len(rest) % 3:
                    raise ValueError("arcs take three tokens each")
                for i in range(0, len(rest), 3):
                    kind, ref, w = rest[i:i + 3]
                    nb = ref.endswith(NEIGHBOR)
                    if nb and not offset:
                        raise ValueError("local transitions have no neighbor arcs")
                    arc = (ref[:-len(NEIGHBOR)] if nb else ref, nb, int(w))
                    if kind == "consume":
                        t.consume.append(arc)
                    elif kind == "produce":
                        t.produce.append(arc)
                    else:
                        raise ValueError(f"unknown arc kind {kind!r}")
                s.transitions.append(t)
            else:
                raise ValueError(f"unknown record {head!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc or 'truncated record'}") from None
    if s is None:
        raise ValueError("empty script")
    if s.faces is not None and len(s.faces) != s.n:
        raise ValueError(f"{len(s.faces)} names for {s.n} copies")
    if s.faces is None and s.prefix is None:
        raise ValueError("missing colors record")
    return s


def expand_script(s):
    """The CoreNet obtained by replicating the component ``s.n`` times."""
    n = s.n
    mangler = Mangler()
    faces = [s.face(i) for i in range(n)]
    base = {}
    places = []
    for pid, k in s.places:
        base[pid] = len(places)
        places.extend(CorePlace(mangler(pid, [faces[i]]), k, (pid, i)) for i in range(n))
    out = CoreNet(s.name, places)
    for t in s.transitions:
        for i in range(n):
            j = (i + t.offset) % n

            def wire(arcs):
                return [(base[p] + (j if nb else i), w) for p, nb, w in arcs]
            out.transitions.append(CoreTransition(mangler(t.id, [faces[i]]), wire(t.consume),
                                                  wire(t.produce), (t.id, i)))
    return out

"""Random well-typed PNML documents built from the grammar the front-end accepts.

``random_net(rng)`` returns PNML bytes. Sorts stay small (at most four
colors per scalar sort, at most four variables per net) so full valuation
spaces never exceed 4**4 per transition.
"""

import random

from hypothesis import strategies as st

from hlunfold.models import builder as B


class _Scalar:
    def __init__(self, id, kind, size, lo=0):
        self.id, self.kind, self.size, self.lo = id, kind, size, lo

    @property
    def ordered(self):
        return self.kind != "dot"

    def const(self, i):
        if self.kind == "dot":
            return B.dot()
        if self.kind == "range":
            return B.intc(self.lo + i, self.lo, self.lo + self.size - 1)
        return B.const(f"{self.id}_c{i}")


class _Product:
    kind = "product"

    def __init__(self, id, comps):
        self.id, self.comps = id, comps


class _Gen:
    def __init__(self, rng, allow_subtract=True):
        self.rng = rng
        self.allow_subtract = allow_subtract
        self.b = B.NetBuilder(f"G{rng.randrange(10**6)}")
        self.scalars = []
        self.products = []
        self.vars = []     # (name, scalar sort)
        self.parts = []    # (partition id, base sort, element ids)

    # declarations

    def declare(self):
        r = self.rng
        for i in range(r.randint(1, 3)):
            kind = r.choice(["cyclic", "finite", "range", "dot"])
            sid = f"S{i}"
            if kind == "dot":
                self.b.dotsort(sid)
                s = _Scalar(sid, "dot", 1)
            elif kind == "range":
                lo = r.randint(-2, 3)
                size = r.randint(1, 4)
                self.b.intrange(sid, lo, lo + size - 1)
                s = _Scalar(sid, "range", size, lo)
            else:
                size = r.randint(1, 4)
                names = [f"{sid}_c{k}" for k in range(size)]
                (self.b.cyclic if kind == "cyclic" else self.b.finite)(sid, names)
                s = _Scalar(sid, kind, size)
            self.scalars.append(s)
        if r.random() < 0.5:
            comps = [r.choice(self.scalars) for _ in range(2)]
            pid = "P0"
            self.b.product(pid, [c.id for c in comps])
            self.products.append(_Product(pid, comps))
        enums = [s for s in self.scalars if s.kind in ("cyclic", "finite") and s.size >= 2]
        if enums and r.random() < 0.3:
            base = r.choice(enums)
            cut = r.randint(1, base.size - 1)
            elems = {"E0": [f"{base.id}_c{k}" for k in range(cut)],
                     "E1": [f"{base.id}_c{k}" for k in range(cut, base.size)]}
            self.b.partition("Part", base.id, elems)
            self.parts.append(("Part", base, list(elems)))
        for i in range(r.randint(1, 4)):
            s = r.choice(self.scalars)
            self.b.variable(f"v{i}", s.id)
            self.vars.append((f"v{i}", s))

    # terms

    def scalar_term(self, s, ground=False, depth=0):
        r = self.rng
        if ground:
            return s.const(r.randrange(s.size))
        options = ["const"]
        mine = [v for v, vs in self.vars if vs is s]
        if mine:
            options += ["var", "var"]
        if s.ordered and depth < 2:
            options.append("step")
        pick = r.choice(options)
        if pick == "var":
            return B.var(r.choice(mine))
        if pick == "step":
            inner = self.scalar_term(s, ground, depth + 1)
            return (B.succ if r.random() < 0.5 else B.pred)(inner)
        return s.const(r.randrange(s.size))

    def color_term(self, sort, ground=False):
        if isinstance(sort, _Product):
            return B.tup(*(self.scalar_term(c, ground) for c in sort.comps))
        return self.scalar_term(sort, ground)

    def multiset_term(self, sort, ground=False, depth=0):
        r = self.rng
        x = r.random()
        if depth >= 2 or x < 0.45:
            return self.color_term(sort, ground)
        if x < 0.6:
            k = r.randint(0, 3)
            inner = self.multiset_term(sort, ground, depth + 1)
            return B.num(k, inner) if k != 1 or r.random() < 0.5 else B.num1(inner)
        if x < 0.75:
            return B.all_(sort.id)
        if x < 0.9 or not self.allow_subtract:
            return B.add(*(self.multiset_term(sort, ground, depth + 1) for _ in range(r.randint(1, 3))))
        return B.sub(self.multiset_term(sort, ground, depth + 1), self.multiset_term(sort, ground, depth + 1))

    def marking(self, sort):
        r = self.rng
        if r.random() < 0.25:
            return None
        if r.random() < 0.3:
            return B.all_(sort.id)
        return B.add(*(self.num_of_color(sort) for _ in range(r.randint(1, 3))))

    def num_of_color(self, sort):
        k = self.rng.randint(1, 2)
        return B.num(k, self.color_term(sort, ground=True))

    def guard(self, depth=0):
        r = self.rng
        if depth < 2 and r.random() < 0.35:
            kids = [self.guard(depth + 1) for _ in range(r.randint(1, 3))]
            return (B.and_ if r.random() < 0.6 else B.or_)(*kids)
        if self.parts and r.random() < 0.25:
            pid, base, elems = self.parts[0]
            op = r.choice([B.eq, B.ne, B.lt, B.le])
            return op(self.scalar_term(base), B.const(r.choice(elems)))
        s = r.choice(self.scalars)
        op = r.choice([B.eq, B.ne, B.lt, B.gt, B.le, B.ge])
        return op(self.scalar_term(s), self.scalar_term(s))

    # nodes

    def build(self):
        r = self.rng
        self.declare()
        sorts = self.scalars + self.products
        places = []
        for i in range(r.randint(1, 3)):
            s = r.choice(sorts)
            pid = f"p{i}"
            self.b.place(pid, s.id, self.marking(s))
            places.append((pid, s))
        for i in range(r.randint(1, 3)):
            tid = f"t{i}"
            self.b.transition(tid, self.guard() if r.random() < 0.6 else None)
            for _ in range(r.randint(0, 3)):
                pid, s = r.choice(places)
                ins = self.multiset_term(s)
                if r.random() < 0.5:
                    self.b.arc(pid, tid, ins)
                else:
                    self.b.arc(tid, pid, ins)
            if r.random() < 0.3:
                # a test arc, so that some places come out stable
                pid, s = r.choice(places)
                ins = self.color_term(s)
                self.b.arc(pid, tid, ins)
                self.b.arc(tid, pid, ins)
        return self.b.to_bytes()


def random_net(rng, allow_subtract=True):
    """PNML bytes of a random well-typed net."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    return _Gen(rng, allow_subtract).build()


nets = st.randoms(use_true_random=False).map(random_net)

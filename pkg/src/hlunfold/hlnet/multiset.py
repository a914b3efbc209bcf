"""Finite multisets of colors."""

from hlunfold.errors import NegativeMultiset


class Multiset(dict):
    """Mapping value -> positive multiplicity. Zero entries are never stored."""

    __slots__ = ()

    @classmethod
    def single(cls, v, k=1):
        return cls({v: k}) if k else cls()

    @classmethod
    def of(cls, values):
        m = cls()
        for v in values:
            m[v] = m.get(v, 0) + 1
        return m

    def cardinality(self):
        return sum(self.values())

    def __add__(self, other):
        out = Multiset(self)
        for v, k in other.items():
            out[v] = out.get(v, 0) + k
        return out

    def __sub__(self, other):
        out = Multiset(self)
        for v, k in other.items():
            have = out.get(v, 0)
            if have < k:
                raise NegativeMultiset(f"cannot remove {k} of {v!r}, only {have} present")
            if have == k:
                del out[v]
            else:
                out[v] = have - k
        return out

    def scale(self, k):
        if k == 0:
            return Multiset()
        return Multiset({v: n * k for v, n in self.items()})

    def included_in(self, other):
        return all(other.get(v, 0) >= k for v, k in self.items())

    def sorted_items(self):
        return sorted(self.items())

    def __repr__(self):
        return f"Multiset({dict(sorted(self.items()))!r})"

"""Parametric generators for the reference models, plus the bundled PNML files.

The bundled ``*.pnml`` files are exactly ``generate(name)`` for each entry of
``BUNDLED``; ``python -m hlunfold.models <dir>`` regenerates them.
"""

import argparse
from importlib import resources
from pathlib import Path

from hlunfold.models.builder import (
    NetBuilder, add, all_, and_, const, eq, gt, intc, le, lt, num, or_, pred,
    succ, tup, var,
)


def swap(n, prefix="r"):
    """Ring of ``n`` resources; each token hops from the previous resource."""
    b = NetBuilder(f"Swap-P{n:06d}")
    names = [f"{prefix}{i}" for i in range(n)]
    b.cyclic("Resource", names)
    b.variable("x", "Resource")
    b.place("Ready", "Resource", all_("Resource"))
    b.place("Swapped", "Resource")
    b.transition("t1")
    b.transition("t2")
    b.arc("Ready", "t1", pred(var("x")))
    b.arc("t1", "Swapped", var("x"))
    b.arc("Swapped", "t2", var("x"))
    b.arc("t2", "Ready", var("x"))
    return b.to_bytes()


def diffusion(n, tokens=None):
    """Tokens moving between orthogonally adjacent cells of an n x n grid."""
    b = NetBuilder(f"Diffusion-D{n:03d}")
    hi = n - 1
    b.intrange("CD", 0, hi)
    b.product("Cell", ["CD", "CD"])
    for v in ("x1", "y1", "x2", "y2"):
        b.variable(v, "CD")
    if tokens is None:
        tokens = [(0, 0), (hi, hi)]
    marking = add(*(tup(intc(x, 0, hi), intc(y, 0, hi)) for x, y in tokens))
    b.place("Grid", "Cell", marking)
    x1, y1, x2, y2 = (var(v) for v in ("x1", "y1", "x2", "y2"))
    guard = or_(
        and_(eq(x2, succ(x1)), eq(y2, y1)),
        and_(eq(x1, succ(x2)), eq(y2, y1)),
        and_(eq(x1, x2), eq(y2, succ(y1))),
        and_(eq(x1, x2), eq(y1, succ(y2))),
    )
    b.transition("t1", guard)
    b.arc("Grid", "t1", tup(x1, y1))
    b.arc("t1", "Grid", tup(x2, y2))
    return b.to_bytes()


STOP_DISTANCE = (0, 1, 3, 6, 10, 15)


def traintable():
    """Two trains whose safety distance is looked up in a speed/distance table."""
    b = NetBuilder("TrainTable")
    top = len(STOP_DISTANCE) - 1
    far = STOP_DISTANCE[-1]
    b.finite("Train", ["T0", "T1"])
    b.intrange("Speed", 0, top)
    b.intrange("Dist", 0, far)
    b.product("Stop", ["Speed", "Dist"])
    b.product("State", ["Train", "Speed", "Dist"])
    for v, s in (("t", "Train"), ("s", "Speed"), ("d", "Dist"), ("d2", "Dist")):
        b.variable(v, s)
    table = add(*(tup(intc(s, 0, top), intc(d, 0, far)) for s, d in enumerate(STOP_DISTANCE)))
    b.place("StopTable", "Stop", table)
    b.place("TrainState", "State", add(*(tup(const(t), intc(0, 0, top), intc(0, 0, far))
                                        for t in ("T0", "T1"))))
    t, s, d, d2 = var("t"), var("s"), var("d"), var("d2")
    for name, step in (("Acc", succ), ("Dec", pred)):
        b.transition(name)
        b.arc("TrainState", name, tup(t, s, d))
        b.arc("StopTable", name, tup(step(s), d2))
        b.arc(name, "StopTable", tup(step(s), d2))
        b.arc(name, "TrainState", tup(t, step(s), d2))
    return b.to_bytes()


TRACK = 60
STATION = 30


def traintable_dist(with_stop=False):
    """Two trains recording the distance travelled along a track.

    With ``with_stop`` a read-only table of admissible speeds is consulted
    whenever a train accelerates.
    """
    b = NetBuilder("TrainTable-Stop+Dist" if with_stop else "TrainTable-Dist")
    top, end = 5, TRACK - 1
    b.finite("Train", ["T0", "T1"])
    b.intrange("Speed", 0, top)
    b.intrange("Dist", 0, end)
    b.product("State", ["Train", "Speed", "Dist"])
    for v, srt in (("t", "Train"), ("s", "Speed"), ("d", "Dist")):
        b.variable(v, srt)
    b.place("TrainState", "State", add(*(tup(const(tr), intc(0, 0, top), intc(0, 0, end))
                                        for tr in ("T0", "T1"))))
    b.place("Done", "Train")
    if with_stop:
        b.place("StopTable", "Speed", all_("Speed"))
    t, s, d = var("t"), var("s"), var("d")
    station = intc(STATION, 0, end)
    b.transition("Acc", lt(d, station))
    b.arc("TrainState", "Acc", tup(t, s, d))
    b.arc("Acc", "TrainState", tup(t, succ(s), succ(d)))
    if with_stop:
        b.arc("StopTable", "Acc", succ(s))
        b.arc("Acc", "StopTable", succ(s))
    b.transition("Dec", and_(gt(d, intc(0, 0, end)), le(d, station)))
    b.arc("TrainState", "Dec", tup(t, s, d))
    b.arc("Dec", "TrainState", tup(t, pred(s), d))
    b.transition("Arrive")
    b.arc("TrainState", "Arrive", tup(t, intc(0, 0, top), station))
    b.arc("Arrive", "Done", t)
    return b.to_bytes()


BUNDLED = {
    "TrainTable": traintable,
    "TrainTable-Dist": lambda: traintable_dist(False),
    "TrainTable-Stop+Dist": lambda: traintable_dist(True),
    "Diffusion-D005": lambda: diffusion(5),
    "Swap-P000005": lambda: swap(5),
}


def generate(name):
    return BUNDLED[name]()


def path(name):
    """Filesystem path of a bundled model."""
    return resources.files(__name__).joinpath(f"{name}.pnml")


def read(name):
    return path(name).read_bytes()


def main(argv=None):
    parser = argparse.ArgumentParser(prog="python -m hlunfold.models",
                                     description="Regenerate the bundled PNML models.")
    parser.add_argument("directory", nargs="?", type=Path, default=Path(__file__).parent)
    out = parser.parse_args(argv).directory
    out.mkdir(parents=True, exist_ok=True)
    for name in BUNDLED:
        (out / f"{name}.pnml").write_bytes(generate(name))


import re

import pytest
from hypothesis import given, settings, strategies as st

from hlunfold import models, pnml
from hlunfold.composer import detect_ring, emit_script, expand_script, format_script, parse_script
from hlunfold.models import builder as B
from hlunfold.unfolder import unfold


def ring_net(n, mutate=None, marked=("Ready",), prefix="r"):
    """Swap-shaped builder with optional single mutations."""
    b = B.NetBuilder(f"Ring-{n:06d}")
    b.cyclic("R", [f"{prefix}{i}" for i in range(n)])
    b.variable("x", "R")
    b.variable("y", "R")
    for p in ("Ready", "Swapped"):
        m = B.all_("R") if p in marked else None
        if mutate == "skew" and p == "Ready":
            m = B.add(B.all_("R"), B.const(f"{prefix}0"))
        b.place(p, "R", m)
    guard = B.eq(B.var("x"), B.var("x")) if mutate == "guard" else None
    b.transition("t1", guard)
    b.transition("t2")
    swap_in = {
        "inscription": B.succ(B.succ(B.var("x"))),
        "second-var": B.var("y"),
        "constant": B.const(f"{prefix}0"),
        "both-sides": B.succ(B.var("x")),
        "scaled": B.num(2, B.var("x")),
    }.get(mutate, B.var("x"))
    b.arc("Ready", "t1", B.pred(B.var("x")))
    b.arc("t1", "Swapped", swap_in)
    b.arc("Swapped", "t2", B.var("x"))
    b.arc("t2", "Ready", B.var("x"))
    return pnml.load(b.to_bytes())


def test_swap_decomposition(bundled):
    d = detect_ring(bundled["Swap-P000005"])
    assert d is not None
    assert d.local == ["t2"]
    assert d.distant == [("t1", -1)]


def test_non_ring_models(bundled):
    for name in ("TrainTable", "TrainTable-Dist", "TrainTable-Stop+Dist", "Diffusion-D005"):
        assert detect_ring(bundled[name]) is None


@pytest.mark.parametrize("mutation", ["guard", "inscription", "skew", "second-var", "constant",
                                      "both-sides", "scaled"])
def test_single_mutation_disables_detection(mutation):
    assert detect_ring(ring_net(4)) is not None
    assert detect_ring(ring_net(4, mutation)) is None


@settings(max_examples=40)
@given(st.integers(1, 12), st.sampled_from(["guard", "inscription", "skew", "second-var"]))
def test_mutations_property(n, mutation):
    if mutation == "skew" and n == 1:
        # one color: an extra token on r0 is still uniform
        assert detect_ring(ring_net(n, mutation)) is not None
    else:
        assert detect_ring(ring_net(n, mutation)) is None


def test_mixed_sorts_rejected():
    b = B.NetBuilder("mixed")
    b.cyclic("R", ["a", "b", "c"])
    b.finite("F", ["u"])
    b.variable("x", "R")
    b.place("p", "R", B.all_("R"))
    b.place("q", "F")
    b.transition("t")
    b.arc("p", "t", B.var("x"))
    b.arc("t", "p", B.var("x"))
    assert detect_ring(pnml.load(b.to_bytes())) is None


@pytest.mark.parametrize("n", range(1, 13))
def test_expand_equals_unfold(n):
    net = pnml.load(models.swap(n))
    script = emit_script(detect_ring(net))
    assert expand_script(script) == unfold(net)
    assert expand_script(parse_script(format_script(script))) == unfold(net)


def test_small_scripts():
    s1 = emit_script(detect_ring(pnml.load(models.swap(1))))
    assert format_script(s1).startswith("ring Swap-P000001 1\n")
    c = expand_script(emit_script(detect_ring(pnml.load(models.swap(3)))))
    assert (len(c.places), len(c.transitions)) == (6, 6)


@pytest.mark.parametrize("prefix", ["r", "", "node_", "x9y"])
def test_naming_schemes(prefix):
    for marked in (("Ready",), ("Ready", "Swapped"), ()):
        net = ring_net(6, marked=marked, prefix=prefix)
        d = detect_ring(net)
        text = format_script(emit_script(d))
        assert expand_script(parse_script(text)) == unfold(net)


def test_explicit_names_when_unnumbered():
    b = B.NetBuilder("odd")
    b.cyclic("R", ["north", "east", "south", "west"])
    b.variable("x", "R")
    b.place("p", "R", B.num(2, B.all_("R")))
    b.transition("t")
    b.arc("p", "t", B.var("x"))
    b.arc("t", "p", B.succ(B.var("x")))
    net = pnml.load(b.to_bytes())
    text = format_script(emit_script(detect_ring(net)))
    assert "names north east south west" in text
    assert "place p 2" in text
    assert expand_script(parse_script(text)) == unfold(net)


def test_script_size_independent_of_n():
    sizes = []
    for n in (10, 10**4):
        text = format_script(emit_script(detect_ring(pnml.load(models.swap(n)))))
        sizes.append(len(re.sub(rf"\b{n}\b", "", text)))
    assert sizes[0] == sizes[1]


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_script("")
    with pytest.raises(ValueError):
        parse_script("ring a 3\ncolors r 0\ndistant t 2 consume p 1\n")
    with pytest.raises(ValueError):
        parse_script("ring a 3\nplace p 1\n")
    with pytest.raises(ValueError):
        parse_script("ring a 3\ncolors r 0\nlocal t consume p@neighbor 1\n")

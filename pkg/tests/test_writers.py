import io
import xml.etree.ElementTree as ET

import pytest
from hypothesis import HealthCheck, given, settings

from hlunfold import models, pnml
from hlunfold.composer import detect_ring, emit_script
from hlunfold.corenet import CoreNet, CorePlace, CoreTransition
from hlunfold.errors import InvalidIdentifier
from hlunfold.hlnet.net import HLNet, Place, SortTable
from hlunfold.hlnet.sorts import DOT
from hlunfold.unfolder import unfold
from hlunfold.writers import (
    read_ptnet_pnml, write_debug_view, write_lola, write_net, write_ptnet_pnml, write_ring,
)

from netgen import nets


def render(writer, obj, **kw):
    buf = io.BytesIO()
    n = writer(obj, buf, **kw)
    data = buf.getvalue()
    assert n == len(data)
    return data.decode("utf-8")


def minimal(weight=1):
    return CoreNet("x", [CorePlace("p", 2)], [CoreTransition("t", [(0, weight)], [])])


def test_net_minimal():
    assert render(write_net, minimal()) == "net x\npl p (2)\ntr t p ->\n"


def test_net_weight_suffix():
    assert "tr t p*3 ->" in render(write_net, minimal(3))


def test_net_braces_for_odd_ids():
    net = CoreNet("my net", [CorePlace("a-b", 1), CorePlace("c{d}", 0)],
                  [CoreTransition("t.1", [(0, 1)], [(1, 2)])])
    text = render(write_net, net)
    assert text == "net {my net}\npl {a-b} (1)\ntr {t.1} {a-b} -> {c\\{d\\}}*2\n"


def test_net_line_laws(bundled):
    core = unfold(bundled["TrainTable-Dist"])
    lines = render(write_net, core).splitlines()
    assert sum(line.startswith("tr ") for line in lines) == 602
    assert sum(line.startswith("pl ") for line in lines) == sum(1 for p in core.places if p.marking)


def test_lola_minimal():
    text = render(write_lola, minimal())
    assert " ".join(text.split()) == "PLACE p; MARKING p: 2; TRANSITION t CONSUME p: 1; PRODUCE ;"


def test_lola_empty_marking():
    net = CoreNet("x", [CorePlace("p"), CorePlace("q")], [])
    assert "MARKING ;" in render(write_lola, net)


def test_lola_swap_blocks():
    core = unfold(pnml.load(models.read("Swap-P000005")))
    assert render(write_lola, core).count("TRANSITION ") == 10


def test_lola_rejects_unrepresentable():
    with pytest.raises(InvalidIdentifier):
        write_lola(CoreNet("x", [CorePlace("a-b"), CorePlace("a_b")]), io.BytesIO())
    with pytest.raises(InvalidIdentifier):
        write_lola(CoreNet("x", [CorePlace("PLACE")]), io.BytesIO())


def test_pnml_minimal():
    root = ET.fromstring(render(write_ptnet_pnml, minimal()))
    ns = {"p": "http://www.pnml.org/version-2009/grammar/pnml"}
    nets = root.findall("p:net", ns)
    assert len(nets) == 1 and nets[0].get("type").endswith("ptnet")
    assert len(root.findall(".//p:page", ns)) == 1
    assert len(root.findall(".//p:place", ns)) == 1
    assert len(root.findall(".//p:transition", ns)) == 1
    assert len(root.findall(".//p:arc", ns)) == 1


def test_pnml_weight_inscription():
    text = render(write_ptnet_pnml, minimal(2))
    ns = {"p": "http://www.pnml.org/version-2009/grammar/pnml"}
    (arc,) = ET.fromstring(text).findall(".//p:arc", ns)
    assert arc.find("p:inscription/p:text", ns).text == "2"
    assert ET.fromstring(render(write_ptnet_pnml, minimal(1))).find(".//p:arc/p:inscription", ns) is None
    assert read_ptnet_pnml(text.encode()) == minimal(2)


def test_pnml_arc_ids_avoid_node_names():
    net = CoreNet("x", [CorePlace("a1", 1)], [CoreTransition("a2", [(0, 1)], [(0, 1)])])
    assert read_ptnet_pnml(render(write_ptnet_pnml, net).encode()) == net


def test_pnml_closure_on_bundled(bundled):
    for net in bundled.values():
        core = unfold(net)
        assert read_ptnet_pnml(render(write_ptnet_pnml, core).encode()) == core


@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow])
@given(nets)
def test_pnml_closure_on_generated(data):
    core = unfold(pnml.load(data))
    assert read_ptnet_pnml(render(write_ptnet_pnml, core).encode()) == core


class ChunkSink:
    def __init__(self):
        self.sizes = []

    def write(self, data):
        self.sizes.append(len(data))


def test_writers_stream_in_chunks():
    core = unfold(pnml.load(models.swap(3000)))
    for writer in (write_net, write_lola, write_ptnet_pnml):
        sink = ChunkSink()
        total = writer(core, sink)
        assert total == sum(sink.sizes)
        assert len(sink.sizes) > 2 and max(sink.sizes) < 1 << 18


def test_determinism(bundled):
    for net in bundled.values():
        core = unfold(net)
        for writer in (write_net, write_lola, write_ptnet_pnml):
            assert render(writer, core) == render(writer, unfold(net))
        assert render(write_debug_view, net) == render(write_debug_view, net)


def test_no_crlf_no_bom(bundled):
    text = render(write_net, unfold(bundled["TrainTable"]))
    assert "\r" not in text and not text.startswith("\ufeff")


def test_debug_view_traintable(bundled):
    text = render(write_debug_view, bundled["TrainTable"])
    lines = text.splitlines()
    assert sum(line.startswith("pl ") for line in lines) == 2
    assert sum(line.startswith("tr ") for line in lines) == 2
    stop = "(0, 0) + (1, 1) + (2, 3) + (3, 6) + (4, 10) + (5, 15)"
    assert f"lb StopTable {{{stop}}}" in lines
    notes = [line for line in lines if line.startswith("nt ")]
    # 5 sorts, 4 variables, 8 arcs
    assert len(notes) == 17
    assert lines.index("pl StopTable") + 1 == lines.index(f"lb StopTable {{{stop}}}")


def test_debug_view_without_declarations():
    net = HLNet("bare", [Place("p", DOT)], [], [], SortTable())
    text = render(write_debug_view, net)
    assert not [line for line in text.splitlines() if line.startswith("nt ")]


def test_debug_view_swap_patterns(bundled):
    text = render(write_debug_view, bundled["Swap-P000005"])
    assert ": x--}" in text and ": x}" in text


def test_ring_writer_with_name(bundled):
    script = emit_script(detect_ring(bundled["Swap-P000005"]))
    text = render(write_ring, script, name="Other")
    assert text.startswith("ring Other 5\n")
    assert script.name == "Swap-P000005"

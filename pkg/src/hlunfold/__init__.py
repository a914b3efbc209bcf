"""Unfolding of high-level Petri nets (PNML) into place/transition nets."""

from hlunfold.composer import detect_ring, emit_script, expand_script
from hlunfold.corenet import CoreNet
from hlunfold.pnml import load, load_file
from hlunfold.unfolder import detect_stable_places, unfold

__version__ = "0.1.0"

__all__ = [
    "CoreNet", "detect_ring", "detect_stable_places", "emit_script",
    "expand_script", "load", "load_file", "unfold",
]

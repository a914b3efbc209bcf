"""PNML front-end: XML decoding, declaration resolution, lowering to HLNet."""

from hlunfold.pnml.decoder import RawDocument, parse_document, parse_file, parse_string
from hlunfold.pnml.lower import lower_to_ir
from hlunfold.pnml.resolve import resolve_declarations


def load(source):
    """Read a PNML document (bytes or binary stream) into an HLNet."""
    doc = parse_document(source)
    return lower_to_ir(doc, resolve_declarations(doc))


def load_file(path):
    with open(path, "rb") as fh:
        return load(fh)

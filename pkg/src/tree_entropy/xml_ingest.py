"""Streaming XML to element-structure trees, and a small XML writer.

Only elements survive: text, attributes, comments, processing instructions
and CDATA are dropped.  Tags are kept verbatim (case and namespace prefix
included).  Parsing is done with expat in fixed-size chunks, so memory is
the output arena plus the stack of open elements.
"""

from __future__ import annotations

import gzip
import io
import os
import re
from array import array
from dataclasses import dataclass, field
from xml.parsers import expat

import numpy as np

from .tree_model import Alphabet, PadPolicy, SENTINEL, Tree

GZIP_MAGIC = b"\x1f\x8b"
CHUNK_SIZE = 1 << 20
PAD_ELEMENT = "_pad"  # element name used for the sentinel when writing XML

_NAME_RE = re.compile(r"^[A-Za-z_:][\w.\-:]*$")


class XMLStructureError(ValueError):
    """Malformed input; ``offset`` is the byte offset into the (decompressed) stream."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class IngestOptions:
    """Ingestion settings.

    The strip policy, tag case and namespace handling are fixed; only the
    pad attached to the resulting alphabet and the read chunk size vary.
    """

    pad: PadPolicy = field(default_factory=PadPolicy.sentinel)
    chunk_size: int = CHUNK_SIZE


class _Prefixed:
    """A stream with some already-consumed bytes pushed back in front."""

    def __init__(self, prefix: bytes, stream):
        self._prefix, self._stream = prefix, stream

    def read(self, n: int = -1) -> bytes:
        if self._prefix:
            out, self._prefix = self._prefix, b""
            rest = self._stream.read(-1 if n < 0 else max(0, n - len(out)))
            return out + rest
        return self._stream.read(n)


def _open_stream(source):
    """(stream to parse, underlying handle we own or None)."""
    owned = None
    if isinstance(source, (bytes, bytearray, memoryview)):
        raw = io.BytesIO(bytes(source))
    elif isinstance(source, (str, os.PathLike)):
        raw = owned = open(source, "rb")
    else:
        raw = source
    head = raw.read(2)
    body = _Prefixed(head, raw)
    if head == GZIP_MAGIC:
        return gzip.GzipFile(fileobj=body, mode="rb"), owned
    return body, owned


def parse_xml_structure(source, opts: IngestOptions | None = None) -> Tree:
    """Tree of the elements of an XML document, in document order.

    ``source`` is a path, a bytes object, or a binary file object.  Gzip input
    is recognized by its magic bytes.
    """
    opts = opts or IngestOptions()
    parent = array("q")
    labels = array("q")
    ids: dict[str, int] = {}
    symbols: list[str] = []
    stack: list[int] = []

    # expat itself rejects a second document element
    def start(name, _attrs):
        label = ids.get(name)
        if label is None:
            label = ids[name] = len(symbols)
            symbols.append(name)
        stack.append(len(parent))
        parent.append(stack[-2] if len(stack) > 1 else -1)
        labels.append(label)

    def end(_name):
        stack.pop()

    parser = expat.ParserCreate()
    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.SetParamEntityParsing(expat.XML_PARAM_ENTITY_PARSING_NEVER)

    stream, owned = _open_stream(source)
    try:
        while True:
            chunk = stream.read(opts.chunk_size)
            parser.Parse(chunk, not chunk)
            if not chunk:
                break
    except expat.ExpatError as exc:
        message = expat.errors.messages.get(exc.code, str(exc))
        if exc.code == expat.errors.codes[expat.errors.XML_ERROR_JUNK_AFTER_DOC_ELEMENT]:
            message = "content after the document element (multiple roots?)"
        raise XMLStructureError(f"malformed XML: {message}", parser.ErrorByteIndex) from None
    except (OSError, EOFError) as exc:
        raise XMLStructureError(f"unreadable input: {exc}") from None
    finally:
        if owned is not None:
            owned.close()
    if not parent:
        raise XMLStructureError("document has no element")
    alphabet = Alphabet(symbols, opts.pad)
    return Tree(np.frombuffer(parent, dtype=np.int64).copy(),
                np.frombuffer(labels, dtype=np.int64).copy(), alphabet, check=False)


def alphabet_of(t: Tree, pad: PadPolicy | None = None) -> Alphabet:
    """Labels occurring in ``t`` in first-occurrence (preorder) order."""
    _, first = np.unique(t.labels, return_index=True)
    names = t.label_texts()
    order = [names[i] for i in sorted(first.tolist())]
    return Alphabet([s for s in order if s is not SENTINEL], pad or PadPolicy.sentinel())


def _element_name(label) -> str:
    if label is SENTINEL:
        return PAD_ELEMENT
    name = str(label)
    if not _NAME_RE.match(name):
        raise ValueError(f"label {name!r} is not a valid XML element name")
    return name


def to_xml(t: Tree) -> str:
    """Serialize as nested empty elements; the sentinel pad becomes ``_pad``."""
    names = [_element_name(x) for x in t.label_texts()]
    out: list[str] = []
    open_: list[int] = []
    depths = t.depths
    degrees = t.degrees
    for v in range(t.size):
        while open_ and depths[open_[-1]] >= depths[v]:
            out.append(f"</{names[open_.pop()]}>")
        if degrees[v]:
            out.append(f"<{names[v]}>")
            open_.append(v)
        else:
            out.append(f"<{names[v]}/>")
    while open_:
        out.append(f"</{names[open_.pop()]}>")
    return "".join(out)

import gzip
import io
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings

from tree_entropy.families import comb
from tree_entropy.tree_model import PadPolicy, build_tree, fcns
from tree_entropy.xml_ingest import (IngestOptions, XMLStructureError, alphabet_of,
                                     parse_xml_structure, to_xml)

from conftest import trees


def element_count(data: bytes) -> int:
    return sum(1 for event, _ in ET.iterparse(io.BytesIO(data), events=("start",)))


def test_simple_document():
    t = parse_xml_structure(b"<a><b/><c/></a>")
    assert t.to_term() == "a(b c)" and t.size == 3


def test_text_attributes_comments_dropped():
    doc = (b"<?xml version='1.0'?><!DOCTYPE a><!-- c --><a>text<b att='1'>more</b>"
           b"<?pi x?><![CDATA[<fake/>]]></a>")
    assert parse_xml_structure(doc).to_term() == "a(b)"


def test_tag_case_and_prefix_kept():
    doc = b"<x:Root xmlns:x='urn:x'><x:Item/><item/></x:Root>"
    t = parse_xml_structure(doc)
    assert t.label_texts() == ["x:Root", "x:Item", "item"]


def test_gzip_detected_by_magic(tmp_path):
    path = tmp_path / "doc.xml.whatever"
    path.write_bytes(gzip.compress(b"<a><b><c/></b></a>"))
    assert parse_xml_structure(path).to_term() == "a(b(c))"
    assert parse_xml_structure(str(path)).size == 3


def test_file_object_and_small_chunks():
    doc = b"<r>" + b"<e><f/></e>" * 500 + b"</r>"
    t = parse_xml_structure(io.BytesIO(doc), IngestOptions(chunk_size=7))
    assert t.size == 1001 == element_count(doc)


def test_utf8_and_declared_encoding():
    t = parse_xml_structure("<ä><ö/></ä>".encode())
    assert t.label_texts() == ["ä", "ö"]
    latin = "<?xml version='1.0' encoding='ISO-8859-1'?><ä/>".encode("latin-1")
    assert parse_xml_structure(latin).label_texts() == ["ä"]


@pytest.mark.parametrize("doc, offset", [
    (b"<a><b></a>", 8), (b"<a/><b/>", 4), (b"", 0), (b"<a>", 3),
])
def test_malformed_with_offset(doc, offset):
    with pytest.raises(XMLStructureError) as info:
        parse_xml_structure(doc)
    assert info.value.offset == offset


def test_truncated_gzip():
    with pytest.raises(XMLStructureError):
        parse_xml_structure(gzip.compress(b"<a><b/></a>")[:-6])


def test_missing_file():
    with pytest.raises(OSError):
        parse_xml_structure("/nonexistent/file.xml")


def test_pad_option_attached():
    t = parse_xml_structure(b"<a/>", IngestOptions(pad=PadPolicy.in_alphabet("a")))
    assert t.alphabet.pad == PadPolicy.in_alphabet("a")
    assert parse_xml_structure(b"<a/>").alphabet.pad.is_sentinel


def test_alphabet_of_first_occurrence():
    assert alphabet_of(build_tree("a(b c)")).symbols == ["a", "b", "c"]
    assert alphabet_of(build_tree("c(a c b)")).symbols == ["c", "a", "b"]
    assert alphabet_of(comb(5)).sigma == 3
    assert alphabet_of(fcns(build_tree("a(b)"))).symbols == ["a", "b"]


def test_writer_pads_and_names():
    b = fcns(build_tree("a(b)"), PadPolicy.sentinel())
    assert to_xml(b) == "<a><b><_pad/><_pad/></b><_pad/></a>"
    with pytest.raises(ValueError):
        to_xml(build_tree("a(1x)"))


@settings(max_examples=100, deadline=None)
@given(t=trees())
def test_xml_round_trip_and_element_count(t):
    data = to_xml(t).encode()
    u = parse_xml_structure(data)
    assert u == t
    assert u.size == element_count(data)
    # document order of element opens equals preorder
    opens = [el.tag for _, el in ET.iterparse(io.BytesIO(data), events=("start",))]
    assert opens == u.label_texts()

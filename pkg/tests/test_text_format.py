import pytest

from diagrams.errors import TextFormatError
from diagrams.text_format import (
    format_family_text,
    parse_family_text,
    read_family_file,
    write_family_file,
)

from conftest import explicit


def test_parse():
    family = parse_family_text("elements: a,b,c\n\na,b\n{}\nc\n")
    assert family == explicit("abc", "ab", "", "c")


def test_format_is_sorted():
    text = format_family_text(explicit("abc", "bc", "a", ""))
    assert text == "elements: a,b,c\n{}\na\nb,c\n"


def test_empty_universe():
    assert parse_family_text("elements:\n{}\n") == explicit("", "")


@pytest.mark.parametrize("text", [
    "a,b\n",
    "elements: a,b\nc\n",
    "elements: a,b\na,a\n",
    "elements: a,b\na\na\n",
    "elements: a,a\n",
])
def test_malformed(text):
    with pytest.raises(TextFormatError):
        parse_family_text(text)


def test_file_round_trip(tmp_path):
    family = explicit("xyz", "xy", "z", "")
    path = write_family_file(tmp_path / "sub" / "f.fam", family)
    assert read_family_file(path) == family

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from grainstat.exceptions import PNMParseError
from grainstat.pnm import encode_pnm, parse_pnm, read_image, write_image

GOLDEN = np.array([[1, 0, 1], [0, 1, 1]], bool)


def test_minimal_plain_pbm():
    img = parse_pnm(b"P1 1 1 0")
    assert img.dtype == bool and img.shape == (1, 1) and not img[0, 0]


def test_golden_p4():
    assert encode_pnm(GOLDEN) == b"P4\n3 2\n\xa0\x60"


def test_golden_p1_and_back():
    text = encode_pnm(GOLDEN, "P1")
    assert text == b"P1\n3 2\n1 0 1\n0 1 1\n"
    np.testing.assert_array_equal(parse_pnm(text), GOLDEN)
    np.testing.assert_array_equal(parse_pnm(encode_pnm(GOLDEN)), GOLDEN)


def test_golden_pgm():
    g = np.array([[0, 7, 255], [128, 1, 2]], np.uint8)
    assert encode_pnm(g) == b"P5\n3 2\n255\n" + bytes([0, 7, 255, 128, 1, 2])
    assert encode_pnm(g, "P2") == b"P2\n3 2\n255\n0 7 255\n128 1 2\n"


def test_comments_and_packed_p1():
    data = b"P1\n# a comment\n3 2\n101011"
    np.testing.assert_array_equal(parse_pnm(data), GOLDEN)


@settings(max_examples=40, deadline=None)
@given(img=arrays(bool, st.tuples(st.integers(1, 19), st.integers(1, 19))),
       fmt=st.sampled_from(["P1", "P4"]))
def test_pbm_roundtrip(img, fmt):
    np.testing.assert_array_equal(parse_pnm(encode_pnm(img, fmt)), img)


@settings(max_examples=40, deadline=None)
@given(img=arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))),
       fmt=st.sampled_from(["P2", "P5"]))
def test_pgm_roundtrip(img, fmt):
    np.testing.assert_array_equal(parse_pnm(encode_pnm(img, fmt)), img)


def test_file_roundtrip(tmp_path):
    g = np.arange(30, dtype=np.uint8).reshape(5, 6)
    write_image(g, tmp_path / "g.pgm")
    np.testing.assert_array_equal(read_image(tmp_path / "g.pgm"), g)
    write_image(GOLDEN, tmp_path / "b.pbm", "P1")
    np.testing.assert_array_equal(read_image(tmp_path / "b.pbm"), GOLDEN)


def test_maxval_rejected():
    with pytest.raises(PNMParseError, match="unsupported maxval") as info:
        parse_pnm(b"P5\n1 1\n65535\n\x00\x00")
    assert info.value.offset == 7


@pytest.mark.parametrize("data,offset", [
    (b"P4\n3 2\n\xa0", 8),
    (b"P5\n2 2\n255\n\x01\x02", 13),
    (b"P1\n2 2\n1 0 1", 12),
    (b"P2\n2 1\n255\n7", 12),
    (b"P5\n2", 4),
])
def test_truncation_offsets(data, offset):
    with pytest.raises(PNMParseError, match="truncated") as info:
        parse_pnm(data)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


@pytest.mark.parametrize("data", [b"P3\n1 1\n255\n0 0 0", b"", b"P1\n1 x\n0", b"P1\n1 1\n2"])
def test_malformed(data):
    with pytest.raises(PNMParseError):
        parse_pnm(data)


def test_gray_as_pbm_is_type_error():
    with pytest.raises(TypeError):
        encode_pnm(np.zeros((2, 2), np.uint8), "P4")
    with pytest.raises(TypeError):
        encode_pnm(np.zeros((2, 2), bool), "P5")


def test_read_error_names_path(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n1 1\n16\n\x00")
    with pytest.raises(PNMParseError, match="bad.pgm"):
        read_image(bad)


def test_write_error_names_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        write_image(GOLDEN, tmp_path / "missing" / "x.pbm")

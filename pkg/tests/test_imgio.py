"""Codec and rendering tests, including palette round-trips."""

from io import BytesIO

import numpy as np
import pytest
from PIL import Image

from phaseseg.imgio import (
    LABEL_PALETTE,
    VOID,
    DecodeError,
    MaskFormatError,
    decode_image,
    encode_mask,
    encode_png,
    labelmap_from_png,
    load_mask,
    render_labelmap,
    to_gray,
)


def png_bytes(array, mode="RGB"):
    buf = BytesIO()
    Image.fromarray(array, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


# --------------------------------------------------------------- decode_image


def test_decode_1x1_white_png():
    img = decode_image(png_bytes(np.full((1, 1, 3), 255, dtype=np.uint8)))
    assert img.shape == (1, 1, 3)
    assert img.tolist() == [[[255, 255, 255]]]


def test_decode_checkerboard_row_major():
    board = np.array(
        [[[255, 0, 0], [0, 255, 0]], [[0, 0, 255], [255, 255, 255]]], dtype=np.uint8
    )
    img = decode_image(png_bytes(board))
    assert np.array_equal(img, board)


def test_decode_grayscale_expands_to_rgb():
    gray = np.array([[0, 128], [255, 64]], dtype=np.uint8)
    img = decode_image(png_bytes(gray, mode="L"))
    assert img.shape == (2, 2, 3)
    assert (img[0, 1] == 128).all()


def test_decode_jpeg_roundtrip_gradient():
    y, x = np.mgrid[0:64, 0:64]
    gradient = np.stack([x * 4, y * 4, (x + y) * 2], axis=2).astype(np.uint8)
    buf = BytesIO()
    # full-resolution chroma; 4:2:0 subsampling alone costs ~5 levels
    Image.fromarray(gradient, mode="RGB").save(
        buf, format="JPEG", quality=95, subsampling=0
    )
    img = decode_image(buf.getvalue(), format="jpeg")
    assert img.shape == gradient.shape
    error = np.abs(img.astype(int) - gradient.astype(int)).max()
    assert error <= 3


def test_decode_rejects_malformed_and_mismatched():
    with pytest.raises(DecodeError):
        decode_image(b"not an image")
    png = png_bytes(np.zeros((2, 2, 3), dtype=np.uint8))
    with pytest.raises(DecodeError):
        decode_image(png, format="jpeg")
    with pytest.raises(DecodeError):
        decode_image(png, format="tiff")
    with pytest.raises(DecodeError):
        decode_image(png[:20])


def test_decode_rejects_unsupported_container():
    buf = BytesIO()
    Image.fromarray(np.zeros((2, 2, 3), dtype=np.uint8), mode="RGB").save(buf, format="BMP")
    with pytest.raises(DecodeError):
        decode_image(buf.getvalue())


# -------------------------------------------------------------------- to_gray


def test_to_gray_white_is_exactly_one():
    gray = to_gray(np.full((1, 1, 3), 255, dtype=np.uint8))
    assert gray[0, 0] == 1.0


def test_to_gray_black_and_green():
    img = np.zeros((1, 2, 3), dtype=np.uint8)
    img[0, 1] = (0, 255, 0)
    gray = to_gray(img)
    assert gray[0, 0] == 0.0
    assert gray[0, 1] == pytest.approx(0.7154, abs=1e-12)


def test_to_gray_in_range_for_random_images():
    rng = np.random.default_rng(13)
    img = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    gray = to_gray(img)
    assert gray.min() >= 0.0 and gray.max() <= 1.0


# ------------------------------------------------------------------ load_mask


def test_load_mask_sentinels():
    mask = np.array([[0, 1], [VOID, 0]], dtype=np.uint8)
    out = load_mask(encode_mask(mask))
    assert np.array_equal(out, mask)


def test_load_mask_void_ring():
    mask = np.zeros((5, 5), dtype=np.uint8)
    mask[2, 2] = 1
    mask[1, 1:4] = VOID
    mask[3, 1:4] = VOID
    out = load_mask(encode_mask(mask))
    assert (out == VOID).sum() == 6


def test_load_mask_collapses_paletted_classes():
    indices = np.array([[0, 7], [255, 3]], dtype=np.uint8)
    img = Image.fromarray(indices, mode="P")
    img.putpalette(list(range(256)) * 3)
    buf = BytesIO()
    img.save(buf, format="PNG")
    out = load_mask(buf.getvalue())
    assert out.tolist() == [[0, 1], [VOID, 1]]


def test_load_mask_rejects_stray_values():
    bad = np.array([[0, 200]], dtype=np.uint8)
    with pytest.raises(MaskFormatError) as err:
        load_mask(png_bytes(bad, mode="L"))
    assert "200" in str(err.value)


def test_load_mask_rejects_rgb():
    with pytest.raises(MaskFormatError):
        load_mask(png_bytes(np.zeros((2, 2, 3), dtype=np.uint8)))


# ------------------------------------------------------------- label rendering


def test_render_constant_map_single_color():
    labels = np.full((4, 4), 5, dtype=np.uint8)
    arr = np.asarray(Image.open(BytesIO(render_labelmap(labels))).convert("RGB"))
    assert set(map(tuple, arr.reshape(-1, 3))) == {LABEL_PALETTE[5]}


def test_render_roundtrip_is_lossless():
    rng = np.random.default_rng(19)
    labels = rng.integers(0, 8, size=(9, 13)).astype(np.uint8)
    assert np.array_equal(labelmap_from_png(render_labelmap(labels)), labels)


def test_render_eight_label_test_card():
    labels = np.arange(8, dtype=np.uint8).reshape(2, 4)
    arr = np.asarray(Image.open(BytesIO(render_labelmap(labels))).convert("RGB"))
    colors = set(map(tuple, arr.reshape(-1, 3)))
    assert colors == set(LABEL_PALETTE)
    assert len(colors) == 8


def test_labelmap_from_rgb_render():
    labels = np.array([[0, 7], [4, 2]], dtype=np.uint8)
    rgb = np.asarray(Image.open(BytesIO(render_labelmap(labels))).convert("RGB"))
    assert np.array_equal(labelmap_from_png(png_bytes(rgb)), labels)


def test_labelmap_rejects_unknown_color():
    stray = np.full((2, 2, 3), 17, dtype=np.uint8)
    with pytest.raises(DecodeError):
        labelmap_from_png(png_bytes(stray))


def test_render_rejects_bad_labels():
    with pytest.raises(ValueError):
        render_labelmap(np.full((2, 2), 9, dtype=np.uint8))
    with pytest.raises(ValueError):
        render_labelmap(np.zeros((0, 2), dtype=np.uint8))


def test_palette_values_are_distinct():
    assert len(set(LABEL_PALETTE)) == 8

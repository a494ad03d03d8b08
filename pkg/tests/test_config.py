"""Pipeline config parsing and PGM/PNG ingestion."""

import numpy as np
import pytest
from PIL import Image

from vigileye.config import PipelineConfig, load_config, resolved_d0
from vigileye.errors import ImageFormatError, InvalidParameter
from vigileye.image import load_image, read_pgm, to_u8, validate_unit, write_pgm


class TestConfig:
    def test_defaults_resolve(self):
        cfg = PipelineConfig()
        assert resolved_d0(cfg, 96, 96) == 12.0
        assert cfg.e_max == 0.15
        assert cfg.template == 31

    def test_file_overrides(self, tmp_path):
        path = tmp_path / "pipe.cfg"
        path.write_text(
            "# tuning\n"
            "filter.d0 = 9\n"
            "filter.sigma=2.0\n"
            "pupil.template=15\n"
            "entropy.e_max = 0.2\n"
            "gabor.components=5\n"
        )
        cfg = load_config(path)
        assert cfg.d0 == 9.0
        assert cfg.sigma == 2.0
        assert cfg.template == 15
        assert cfg.e_max == 0.2
        assert cfg.components == 5
        assert resolved_d0(cfg, 96, 96) == 9.0

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "pipe.cfg"
        path.write_text("filter.order=4\n")
        with pytest.raises(InvalidParameter):
            load_config(path)

    def test_bad_value_rejected(self, tmp_path):
        path = tmp_path / "pipe.cfg"
        path.write_text("entropy.samples=many\n")
        with pytest.raises(InvalidParameter):
            load_config(path)


class TestImageIO:
    def test_pgm_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, size=(9, 13)).astype(np.float64) / 255.0
        path = tmp_path / "img.pgm"
        write_pgm(path, img)
        back = read_pgm(path)
        assert np.array_equal(to_u8(back), to_u8(img))

    def test_pgm_with_comments(self, tmp_path):
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5\n# a comment\n2 2\n255\n\x00\x40\x80\xff")
        img = read_pgm(path)
        assert img.shape == (2, 2)
        assert img[1, 1] == 1.0

    def test_truncated_pgm_rejected(self, tmp_path):
        path = tmp_path / "t.pgm"
        path.write_bytes(b"P5\n4 4\n255\n\x00\x01")
        with pytest.raises(ImageFormatError):
            read_pgm(path)

    def test_wrong_magic_rejected(self, tmp_path):
        path = tmp_path / "x.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 1 2 3")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_png_ingestion(self, tmp_path):
        rng = np.random.default_rng(2)
        raw = rng.integers(0, 256, size=(7, 5), dtype=np.uint8)
        path = tmp_path / "img.png"
        Image.fromarray(raw, mode="L").save(path)
        img = load_image(path)
        assert np.array_equal(to_u8(img), raw)

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\nnot really a png")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_unit_validation(self):
        with pytest.raises(InvalidParameter):
            validate_unit(np.array([[0.5, 1.5]]))
        with pytest.raises(InvalidParameter):
            validate_unit(np.array([[np.nan, 0.0]]))
        validate_unit(np.array([[0.0, 1.0]]))

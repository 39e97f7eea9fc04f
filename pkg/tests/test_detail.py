import numpy as np
import pytest

from vivo.detail import Band, band_mean, detail, dft_magnitude
from vivo.frames import Frame

from conftest import box_blur, frame_from_gray, uniform_frame
from oracles import naive_centered_dft_magnitude


def checkerboard_frame(size=16, lo=0.1, hi=0.6) -> Frame:
    y, x = np.mgrid[0:size, 0:size]
    gray = np.where((x + y) % 2 == 0, hi, lo)
    return frame_from_gray(gray.astype(float))


class TestDftMagnitude:
    def test_constant_frame_all_energy_at_dc(self):
        f = uniform_frame((0.3, 0.3, 0.3), 8, 6)
        spec = dft_magnitude(f)
        cy, cx = 3, 4
        assert spec[cy, cx] == pytest.approx(0.3, abs=1e-12)
        spec[cy, cx] = 0.0
        assert np.all(np.abs(spec) < 1e-12)

    def test_cosine_grating_two_peaks(self):
        w = h = 16
        k, amp = 3, 0.4
        x = np.arange(w)
        gray = 0.5 + amp * np.cos(2 * np.pi * k * x / w)
        f = frame_from_gray(np.tile(gray, (h, 1)))
        spec = dft_magnitude(f)
        cy, cx = h // 2, w // 2
        assert spec[cy, cx + k] == pytest.approx(amp / 2, abs=1e-9)
        assert spec[cy, cx - k] == pytest.approx(amp / 2, abs=1e-9)
        spec[cy, [cx - k, cx, cx + k]] = 0.0
        assert np.all(spec < 1e-9)

    def test_matches_direct_double_sum(self):
        rng = np.random.default_rng(31)
        f = Frame(8, 8, rng.random((8, 8, 3)))
        assert np.allclose(dft_magnitude(f),
                           naive_centered_dft_magnitude(f.gray), atol=1e-6)

    def test_point_symmetric_for_real_input(self):
        rng = np.random.default_rng(37)
        f = Frame(9, 7, rng.random((7, 9, 3)))
        spec = dft_magnitude(f)
        h, w = spec.shape
        cy, cx = h // 2, w // 2
        for i in range(h):
            for j in range(w):
                mi, mj = 2 * cy - i, 2 * cx - j
                if 0 <= mi < h and 0 <= mj < w:
                    assert spec[i, j] == pytest.approx(spec[mi, mj], abs=1e-6)

    def test_parseval(self):
        rng = np.random.default_rng(41)
        for _ in range(5):
            f = Frame(8, 8, rng.random((8, 8, 3)))
            spec = np.fft.fft2(f.gray) / 64.0
            assert (np.abs(spec) ** 2).sum() == pytest.approx(
                (f.gray ** 2).mean(), abs=1e-6)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError, match="frame too small"):
            dft_magnitude(uniform_frame((0, 0, 0), 1, 8))

    def test_grayscale_preserving_permutation_invariant(self):
        rng = np.random.default_rng(43)
        px = rng.random((8, 8, 3))
        f = Frame(8, 8, px)
        g = Frame(8, 8, px[:, :, (2, 0, 1)])
        assert np.allclose(dft_magnitude(f), dft_magnitude(g), atol=1e-12)


class TestBandMean:
    def test_constant_frame_zero_everywhere(self):
        f = uniform_frame((0.7, 0.7, 0.7), 8, 8)
        spec = dft_magnitude(f)
        for offset in (0.0, 0.25, 0.5):
            assert band_mean(spec, Band(offset, 0.25)) == pytest.approx(0.0, abs=1e-12)

    def test_band_covering_frequency_dominates(self):
        w = h = 16
        k = 4  # normalized distance 4/8 = 0.5
        x = np.arange(w)
        f = frame_from_gray(np.tile(0.5 + 0.4 * np.cos(2 * np.pi * k * x / w), (h, 1)))
        spec = dft_magnitude(f)
        covering = band_mean(spec, Band(0.45, 0.2))
        excluding = band_mean(spec, Band(0.7, 0.2))
        assert covering > excluding

    def test_full_band_equals_off_dc_mean(self):
        rng = np.random.default_rng(47)
        f = Frame(8, 8, rng.random((8, 8, 3)))
        spec = dft_magnitude(f)
        mask = np.ones_like(spec, dtype=bool)
        mask[4, 4] = False
        assert band_mean(spec, Band(0.0, 1.0)) == pytest.approx(
            spec[mask].mean(), abs=1e-12)

    def test_empty_band_rejected(self):
        spec = dft_magnitude(uniform_frame((0.5, 0.5, 0.5), 8, 8))
        # distances on an 8-wide axis are multiples of 0.25; nothing lies
        # in [0.30, 0.45)
        with pytest.raises(ValueError, match="empty band"):
            band_mean(spec, Band(0.30, 0.15))

    def test_band_validation(self):
        with pytest.raises(ValueError):
            Band(0.5, 0.6)
        with pytest.raises(ValueError):
            Band(0.5, 0.0)
        with pytest.raises(ValueError):
            Band(-0.1, 0.5)


class TestDetail:
    def test_constant_frame_zero(self):
        overall, per_band = detail(uniform_frame((0.4, 0.4, 0.4), 16, 16))
        assert overall == 0.0
        assert per_band == [0.0, 0.0, 0.0, 0.0]

    def test_blur_reduces_highest_band(self):
        f = checkerboard_frame()
        hi_band = [Band(0.75, 0.25)]
        _, [sharp] = detail(f, hi_band)
        _, [blurred] = detail(box_blur(f), hi_band)
        assert sharp >= blurred

    def test_single_band_overall_equals_band(self):
        rng = np.random.default_rng(53)
        f = Frame(16, 16, rng.random((16, 16, 3)))
        overall, per_band = detail(f, [Band(0.5, 0.25)], gain=0.1)
        assert per_band[0] < 1.0
        assert overall == pytest.approx(per_band[0])

    def test_exposure_invariance(self):
        # doubling is impossible within [0,1]; halving the gray level must
        # leave the DC-normalized factors unchanged
        y, x = np.mgrid[0:16, 0:16]
        gray = 0.4 + 0.2 * np.sin(2 * np.pi * 3 * x / 16)
        a, pa = detail(frame_from_gray(gray))
        b, pb = detail(frame_from_gray(gray / 2))
        assert pa == pytest.approx(pb, abs=1e-9)
        assert a == pytest.approx(b, abs=1e-9)

    def test_validation(self):
        f = uniform_frame((0.5, 0.5, 0.5), 8, 8)
        with pytest.raises(ValueError, match="band"):
            detail(f, [])
        with pytest.raises(ValueError, match="gain"):
            detail(f, [Band(0.0, 0.5)], gain=0.0)

    def test_blur_monotone_on_corpus(self, synthetic_corpus):
        hi_band = [Band(0.75, 0.25)]
        for f in synthetic_corpus:
            _, [orig] = detail(f, hi_band)
            _, [blurred] = detail(box_blur(f), hi_band)
            assert blurred <= orig + 1e-9

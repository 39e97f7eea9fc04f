import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vivo.frames import Frame
from vivo.motion import FlowField, FlowParams, horn_schunck, motion_stats

from conftest import gaussian_blob_frame, random_frame, uniform_frame


class TestHornSchunck:
    def test_identical_frames_give_exact_zero_field(self):
        rng = np.random.default_rng(3)
        f = random_frame(rng, 16, 12)
        g = Frame(16, 12, f.pixels.copy())
        field = horn_schunck(f, g)
        assert np.all(field.u == 0.0)
        assert np.all(field.v == 0.0)

    def test_uniform_brightness_change_gives_zero_field(self):
        a = uniform_frame((0.2, 0.2, 0.2), 12, 12)
        b = uniform_frame((0.8, 0.8, 0.8), 12, 12)
        field = horn_schunck(a, b)
        assert np.all(field.u == 0.0)
        assert np.all(field.v == 0.0)

    def test_rightward_blob_translation(self):
        a = gaussian_blob_frame(28.0, 32.0)
        b = gaussian_blob_frame(29.0, 32.0)
        field = horn_schunck(a, b)
        mean_u = field.u.mean()
        assert mean_u > 0.0
        assert abs(field.v.mean()) < 0.1 * mean_u

    def test_downward_blob_translation(self):
        a = gaussian_blob_frame(32.0, 28.0)
        b = gaussian_blob_frame(32.0, 29.0)
        field = horn_schunck(a, b)
        mean_v = field.v.mean()
        assert mean_v > 0.0
        assert abs(field.u.mean()) < 0.1 * mean_v

    def test_swap_negates_signed_means(self):
        a = gaussian_blob_frame(28.0, 30.0)
        b = gaussian_blob_frame(29.0, 30.0)
        fwd = horn_schunck(a, b)
        bwd = horn_schunck(b, a)
        assert bwd.u.mean() == pytest.approx(-fwd.u.mean(),
                                             rel=0.1, abs=1e-7)

    def test_magnitude_monotone_in_displacement(self):
        mags = []
        for disp in (0.0, 0.5, 1.0, 2.0):
            a = gaussian_blob_frame(28.0, 32.0)
            b = gaussian_blob_frame(28.0 + disp, 32.0)
            field = horn_schunck(a, b)
            mags.append(np.abs(field.u).mean())
        assert mags == sorted(mags)
        assert mags[0] == 0.0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="frame size mismatch"):
            horn_schunck(uniform_frame((0, 0, 0), 8, 8),
                         uniform_frame((0, 0, 0), 8, 9))

    def test_params_validated(self):
        with pytest.raises(ValueError):
            FlowParams(alpha=0.0)
        with pytest.raises(ValueError):
            FlowParams(iterations=0)


class TestMotionStats:
    def test_zero_field(self):
        field = FlowField(np.zeros((8, 8)), np.zeros((8, 8)))
        stats = motion_stats(field)
        assert stats.mean_h == 0.0
        assert stats.mean_v == 0.0
        assert stats.global_motion == 0.0
        assert stats.pan == (0.0, 0.0)
        assert stats.channel_weights == (0.25, 0.25, 0.25, 0.25)

    def test_constant_field_arithmetic(self):
        field = FlowField(np.full((8, 8), 2.5), np.zeros((8, 8)))
        stats = motion_stats(field, max_displacement=5.0)
        assert stats.mean_h == pytest.approx(0.5)
        assert stats.mean_v == 0.0
        assert stats.global_motion == pytest.approx(0.25)
        assert stats.pan == (pytest.approx(0.5), 0.0)

    def test_clipping_at_max_displacement(self):
        field = FlowField(np.full((4, 4), -50.0), np.full((4, 4), 50.0))
        stats = motion_stats(field, max_displacement=5.0)
        assert stats.mean_h == 1.0
        assert stats.mean_v == 1.0
        assert stats.pan == (-1.0, 1.0)
        # pan in the bottom-left corner: all weight on channel (-1, 1)
        assert stats.channel_weights == (0.0, 0.0, 1.0, 0.0)

    def test_global_is_mean_of_axes(self):
        rng = np.random.default_rng(5)
        field = FlowField(rng.normal(0, 2, (8, 8)), rng.normal(0, 2, (8, 8)))
        stats = motion_stats(field)
        assert stats.global_motion == pytest.approx(
            (stats.mean_h + stats.mean_v) / 2)

    def test_abs_mean_dominates_signed_mean(self):
        rng = np.random.default_rng(9)
        field = FlowField(rng.normal(0, 1, (8, 8)), rng.normal(0, 1, (8, 8)))
        assert np.abs(field.u).mean() >= abs(field.u.mean())

    @given(st.floats(-10, 10), st.floats(-10, 10))
    def test_channel_weights_partition_of_unity(self, u, v):
        field = FlowField(np.full((4, 4), u), np.full((4, 4), v))
        stats = motion_stats(field)
        assert sum(stats.channel_weights) == pytest.approx(1.0, abs=1e-9)
        assert all(w >= 0 for w in stats.channel_weights)

    def test_empty_field_rejected(self):
        with pytest.raises(ValueError, match="empty flow"):
            motion_stats(FlowField(np.zeros((0, 0)), np.zeros((0, 0))))

    def test_max_displacement_validated(self):
        field = FlowField(np.zeros((2, 2)), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            motion_stats(field, max_displacement=0.0)

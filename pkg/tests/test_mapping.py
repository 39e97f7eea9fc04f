import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from vivo.mapping import (
    InputParam,
    MappingState,
    OutputParam,
    Preset,
    RoutingMatrix,
    ScalerParams,
    ramp_progress,
    recall_preset,
    route,
    save_preset,
    scale,
    store_preset,
)


def simple_state(n_in=2, n_out=2, presets=()) -> MappingState:
    eye = tuple(tuple(1.0 if i == j else 0.0 for j in range(n_out))
                for i in range(n_in))
    return MappingState(
        inputs=tuple(InputParam(name="warmth", address=f"/vivo/in{i}")
                     for i in range(n_in)),
        outputs=tuple(OutputParam(name=f"out{j}", address=f"/synth/out{j}")
                      for j in range(n_out)),
        matrix=RoutingMatrix(gains=eye),
        presets=tuple(presets),
    )


class TestScale:
    def test_linear_midpoint(self):
        p = ScalerParams(in_min=0, in_max=1, out_min=0, out_max=100)
        assert scale(0.5, p) == 50.0

    def test_cubic_midpoint(self):
        p = ScalerParams(in_min=0, in_max=1, out_min=0, out_max=100, exponent=3)
        assert scale(0.5, p) == pytest.approx(12.5)

    def test_overshoot_not_clamped(self):
        p = ScalerParams(in_min=0, in_max=1, out_min=0, out_max=100)
        assert scale(1.2, p) == pytest.approx(120.0)

    @pytest.mark.parametrize("exponent", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("in_range,out_range", [
        ((0.0, 1.0), (0.0, 100.0)),
        ((-1.0, 1.0), (5.0, 200.0)),
        ((0.1, 0.3), (0.1, 0.3)),
        ((2.0, -3.0), (7.5, -1.25)),
    ])
    def test_endpoints_exact(self, exponent, in_range, out_range):
        p = ScalerParams(in_min=in_range[0], in_max=in_range[1],
                         out_min=out_range[0], out_max=out_range[1],
                         exponent=exponent)
        assert scale(in_range[0], p) == out_range[0]
        assert scale(in_range[1], p) == out_range[1]

    def test_negative_input_keeps_sign(self):
        p = ScalerParams(in_min=0, in_max=1, out_min=0, out_max=100, exponent=3)
        assert scale(-0.5, p) == pytest.approx(-12.5)

    @given(st.floats(-2, 3))
    def test_monotone_for_increasing_ranges(self, x):
        p = ScalerParams(in_min=0, in_max=1, out_min=0, out_max=10, exponent=2.0)
        assert scale(x, p) <= scale(x + 0.25, p) + 1e-12

    def test_validation(self):
        with pytest.raises(ValidationError):
            ScalerParams(in_min=1.0, in_max=1.0)
        with pytest.raises(ValidationError):
            ScalerParams(exponent=0.0)
        with pytest.raises(ValidationError):
            ScalerParams(exponent=-2.0)


class TestRoute:
    def test_identity(self):
        m = RoutingMatrix(gains=((1.0, 0.0), (0.0, 1.0)))
        assert route(m, [3.0, 4.0]) == [3.0, 4.0]

    def test_zero_matrix(self):
        m = RoutingMatrix(gains=((0.0, 0.0), (0.0, 0.0)))
        assert route(m, [3.0, 4.0]) == [0.0, 0.0]

    def test_fan_out(self):
        m = RoutingMatrix(gains=((1.0, 1.0),))
        assert route(m, [2.5]) == [2.5, 2.5]

    def test_linearity(self):
        rng = np.random.default_rng(17)
        m = RoutingMatrix(gains=tuple(tuple(rng.random(4)) for _ in range(3)))
        for _ in range(50):
            a = rng.normal(0, 1, 3)
            b = rng.normal(0, 1, 3)
            lhs = route(m, list(a + b))
            rhs = [x + y for x, y in zip(route(m, list(a)), route(m, list(b)))]
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_dimension_mismatch(self):
        m = RoutingMatrix(gains=((1.0, 0.0),))
        with pytest.raises(ValueError, match="dimension mismatch"):
            route(m, [1.0, 2.0])

    def test_gain_bounds_validated(self):
        with pytest.raises(ValidationError):
            RoutingMatrix(gains=((1.5,),))
        with pytest.raises(ValidationError):
            RoutingMatrix(gains=((-0.1,),))

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValidationError):
            RoutingMatrix(gains=((1.0, 0.0), (1.0,)))


class TestPresets:
    def test_recall_t0_is_identity(self):
        state = simple_state()
        target = Preset(id="p", matrix=RoutingMatrix(gains=((0.0, 1.0), (1.0, 0.0))),
                        scalers=(ScalerParams(out_max=5.0), ScalerParams()))
        assert recall_preset(state, target, 0.0) is state

    def test_recall_t1_lands_exactly_on_preset(self):
        state = simple_state()
        target = Preset(id="p", matrix=RoutingMatrix(gains=((0.25, 1.0), (0.5, 0.0))),
                        scalers=(ScalerParams(out_max=5.0, exponent=3.0),
                                 ScalerParams(in_min=-1.0)))
        result = recall_preset(state, target, 1.0)
        assert result.matrix == target.matrix
        assert tuple(o.scaler for o in result.outputs) == target.scalers

    def test_recall_midpoint(self):
        state = simple_state()
        target = Preset(id="p", matrix=RoutingMatrix(gains=((0.0, 1.0), (1.0, 1.0))),
                        scalers=(ScalerParams(), ScalerParams()))
        mid = recall_preset(state, target, 0.5)
        assert mid.matrix.gains == ((0.5, 0.5), (0.5, 1.0))

    def test_save_recall_round_trip_bit_identical(self):
        state = simple_state()
        edited = state.model_copy(update={
            "matrix": RoutingMatrix(gains=((0.3, 0.7), (0.1, 0.9))),
            "outputs": tuple(
                o.model_copy(update={"scaler": ScalerParams(
                    in_min=-0.123456789012345, out_max=173.4567890123456,
                    exponent=2.718281828459045)})
                for o in state.outputs),
        })
        preset = save_preset(edited, "snap")
        restored = recall_preset(state, preset, 1.0)
        assert restored.matrix.gains == edited.matrix.gains
        assert [o.scaler for o in restored.outputs] == [o.scaler for o in edited.outputs]

    def test_store_replaces_same_id(self):
        state = simple_state()
        p1 = save_preset(state, "a")
        state = store_preset(state, p1)
        state = store_preset(state, save_preset(state, "a"))
        assert len(state.presets) == 1

    def test_incompatible_preset_rejected(self):
        state = simple_state(n_in=2, n_out=2)
        bad = Preset(id="bad", matrix=RoutingMatrix(gains=((1.0,),)),
                     scalers=(ScalerParams(),))
        with pytest.raises(ValueError, match="incompatible preset"):
            recall_preset(state, bad, 0.5)
        with pytest.raises(ValueError, match="incompatible preset"):
            store_preset(state, bad)

    def test_ramp_progress(self):
        assert ramp_progress(0, 1000) == 0.0
        assert ramp_progress(500, 1000) == 0.5
        assert ramp_progress(2000, 1000) == 1.0
        assert ramp_progress(123, 0) == 1.0


class TestMappingState:
    def test_json_round_trip_byte_identical(self):
        state = simple_state(presets=[Preset(
            id="x", matrix=RoutingMatrix(gains=((0.1, 0.9), (0.2, 0.8))),
            scalers=(ScalerParams(exponent=3.0), ScalerParams()),
            created_at=1723100000000.123)])
        text = state.model_dump_json()
        back = MappingState.model_validate_json(text)
        assert back == state
        assert back.model_dump_json() == text

    def test_dimension_consistency_enforced(self):
        with pytest.raises(ValidationError):
            MappingState(
                inputs=(InputParam(name="warmth", address="/vivo/warmness"),),
                outputs=(OutputParam(name="o", address="/synth/o"),),
                matrix=RoutingMatrix(gains=((1.0, 0.0),)),
            )

    def test_addresses_validated(self):
        with pytest.raises(ValidationError):
            InputParam(name="warmth", address="no-slash")

    def test_apply_routes_and_scales(self):
        state = simple_state()
        state = state.model_copy(update={"outputs": (
            state.outputs[0].model_copy(update={"scaler": ScalerParams(
                in_min=0, in_max=1, out_min=0, out_max=100)}),
            state.outputs[1],
        )})
        pairs = state.apply([0.5, 0.25])
        assert pairs[0] == ("/synth/out0", 50.0)
        assert pairs[1] == ("/synth/out1", 0.25)

import json

import pytest

from src.common.errors import CalibrationError, NoFitError
from src.hw.config import HardwareConfig, hardware_from_dict, load_hardware
from src.hw.cores import (
    BASELINE,
    LITTLE_1,
    Backend,
    CoreConfig,
    LayerSizes,
    MemoryModel,
    backend_palette,
    custom_config,
    make_core_profile,
    mubrain_config,
)
from src.hw.cost import (
    CostModel,
    area,
    check_calibration,
    dynamic_energy,
    fit_config,
    spike_energy,
    static_power,
)


@pytest.fixture
def model():
    return CostModel.calibrated()


def test_baseline_calibration(model):
    assert BASELINE.neuron_capacity == 336
    assert BASELINE.synapse_capacity == 38_000
    assert static_power(BASELINE, model) == pytest.approx(40.3)
    assert area(BASELINE, model) == pytest.approx(1_000_000.0)
    check_calibration(model)


def test_recalibrated_model_is_rejected():
    with pytest.raises(CalibrationError):
        check_calibration(CostModel.calibrated(static_power_uw=50.0))
    with pytest.raises(CalibrationError):
        CostModel.calibrated(synapse_share=1.0)


def test_static_power_monotone(model):
    doubled = mubrain_config("doubled", 512, 128, 32)
    assert static_power(doubled, model) > static_power(BASELINE, model)
    assert static_power(LITTLE_1, model) == pytest.approx(40.3)


def test_dynamic_energy(model):
    assert dynamic_energy(0, model) == 0
    assert dynamic_energy(1, model) == pytest.approx(26.0)
    assert dynamic_energy(724_565, model) == pytest.approx(18_838_690.0)
    with pytest.raises(ValueError):
        dynamic_energy(-1, model)


@pytest.mark.parametrize(
    "sizes, expected",
    [
        (LayerSizes(l2=200, l1=50, l0=10), "little-1"),
        (LayerSizes(l2=257, l1=1, l0=1), "little-2"),
        (LayerSizes(l2=0, l1=0, l0=1), "little-1"),
    ],
)
def test_fit_config(hw, sizes, expected):
    assert fit_config(sizes, hw.palette("four"), hw.cost_model).name == expected


def test_fit_config_no_fit(hw):
    with pytest.raises(NoFitError, match="exceeds every core"):
        fit_config(LayerSizes(l2=20_000, l1=1, l0=1), hw.palette("four"), hw.cost_model)
    with pytest.raises(NoFitError):
        fit_config(LayerSizes(), ())


def test_backend_profiles(model):
    assert make_core_profile("mubrain").geometry == "256x64x16"
    dynaps = make_core_profile(Backend.DYNAPS)
    assert (dynaps.neuron_capacity, dynaps.synapse_capacity) == (256, 16_384)
    loihi = make_core_profile("loihi")
    assert (loihi.neuron_capacity, loihi.synapse_capacity) == (130_000, 130_000_000)
    assert loihi.memory_model is MemoryModel.OFFCHIP
    # off-chip synapses cost no static power but every spike fetches from memory
    assert static_power(loihi, model) == pytest.approx(130_000 * model.static_power_per_neuron)
    assert spike_energy(loihi, model) == pytest.approx(86.0)
    assert backend_palette("dynaps") == (dynaps,)


def test_two_layer_core_rules():
    with pytest.raises(ValueError):
        CoreConfig(name="bad", l2_capacity=4, l1_capacity=4, l0_capacity=4, layers=2)
    with pytest.raises(ValueError):
        CoreConfig(name="bad", l2_capacity=0, l1_capacity=4, l0_capacity=4)


def test_custom_config_holds_any_neighbourhood():
    c = custom_config(l1_max=9, l2_max=16)
    assert (c.l2_capacity, c.l1_capacity, c.l0_capacity) == (25, 9, 16)
    assert c.synapse_capacity >= 25 * 9 + 9 * 9 + 2 * 9
    wide = custom_config(l1_max=40, l2_max=3)
    assert wide.l2_capacity == 43
    assert wide.fits(LayerSizes(l2=43, l1=40, l0=1, synapses=43 * 40 + 40 * 40 + 2 * 40))


def test_palettes(hw):
    table = hw.palettes()
    assert [len(table[k]) for k in ("one", "two", "four", "eight")] == [1, 2, 4, 8]
    assert table["conservative"][0].name == "big-2"
    with pytest.raises(KeyError):
        hw.palette("sixteen")


def test_load_hardware(tmp_path):
    assert load_hardware(tmp_path / "missing.json") == HardwareConfig()
    path = tmp_path / "hw.json"
    data = {
        "palette": [
            {"name": "a", "l2": 256, "l1": 64, "l0": 16},
            {"name": "b", "l2": 512, "l1": 64, "l0": 16},
            {"name": "c", "l2": 1024, "l1": 64, "l0": 16},
            {"name": "d", "l2": 2048, "l1": 64, "l0": 16},
        ],
        "cost_model": {},
        "timing": {"alpha_ps_per_spike": 5},
        "interconnect": {"noc": {"router_latency_ps": 700}},
    }
    path.write_text(json.dumps(data))
    hw = load_hardware(path)
    assert [c.name for c in hw.presets] == ["a", "b", "c", "d"]
    assert hw.timing.alpha_ps_per_spike == 5
    assert hw.interconnect.noc.hop_latency_ps == 800


def test_hardware_schema_errors():
    with pytest.raises(CalibrationError, match="invalid hardware config"):
        hardware_from_dict({"palette": [], "cost_model": {}, "interconnect": {}})

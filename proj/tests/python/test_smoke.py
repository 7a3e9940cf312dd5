import math
import os
from pathlib import Path

import pytest

import spdc_rates as sr

ROOT = Path(os.environ.get("SPDC_SOURCE_DIR", Path(__file__).resolve().parents[2]))
CONFIG = ROOT / "configs" / "bbo_type2_noncollinear.json"
DB = ROOT / "data" / "materials.json"


def test_special_functions():
    assert sr.erf(1.0) == pytest.approx(0.8427007929, abs=1e-10)
    assert sr.sinc(0.0) == 1.0
    value, err, evals = sr.integrate(lambda u: u * u, 0.0, 3.0)
    assert value == pytest.approx(9.0, rel=1e-14)
    assert evals > 0


def test_overlap_functions():
    assert sr.phi_z(0.0, 0.0) == pytest.approx(1.0)
    assert sr.phi_z(1.0, 0.0) == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(1.0), abs=1e-10)
    assert sr.spectral_integral(0.0) == pytest.approx(math.pi, abs=1e-6)
    xi = 0.933
    parseval = math.pi ** 1.5 / (2 * math.sqrt(2) * xi) * math.erf(math.sqrt(2) * xi)
    assert sr.spectral_integral(xi) == pytest.approx(parseval, abs=1e-6)
    assert sr.walk_off(82e-6, math.radians(3.1), math.radians(3.1), 2e-3) == pytest.approx(0.933, rel=5e-3)


def test_gamma():
    assert sr.optimal_gamma() == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert sr.gamma_rate_factor(1.0) / sr.gamma_rate_factor(sr.optimal_gamma()) == pytest.approx(8 / 9)
    curve = sr.gamma_sweep(0.1, 3.0, 30)
    assert len(curve) == 30


def test_worked_example():
    cfg = sr.load_config(CONFIG, material_db=str(DB))
    assert cfg.angle_convention == "external"
    report = sr.total_rate(cfg, spectral_points=11)
    assert report.xi == pytest.approx(0.933, rel=5e-3)
    assert len(report.spectrum) == 11
    cmp = sr.compare_experiment(cfg)
    assert cmp["observable_rate_per_mw"] == pytest.approx(1100, rel=0.15)

    internal = sr.load_config(CONFIG, angle_convention="internal", material_db=str(DB))
    assert internal.angle_convention == "internal"
    assert sr.total_rate(internal, spectral_points=0).xi < report.xi


def test_errors_carry_codes():
    with pytest.raises(sr.SpdcError) as info:
        sr.load_config(CONFIG, overrides=["pump.waist_um=0"], material_db=str(DB))
    assert info.value.code == "ValidationError"
    assert info.value.exit_status == 2
    assert "pump.waist" in str(info.value)
    cfg = sr.load_config(CONFIG, overrides=["signal.waist_um=60"], material_db=str(DB))
    with pytest.raises(sr.SpdcError) as info:
        sr.total_rate(cfg)
    assert info.value.code == "UnequalWaists"

import math

import pytest

from app.core.constants import HBAR
from app.core.exceptions import ConfigError
from app.core.units import to_internal
from app.models.gain_model import Chi2Method
from app.models.scan_model import MaterialPreset, ScanConfig, ScanVariable
from app.services.scan_service import scan_service


def test_default_material_sits_on_resonance():
    mat = scan_service.build_material(ScanConfig())
    assert 2 * mat.E_F / HBAR == pytest.approx(to_internal(10.0, "um"))
    assert mat.gamma_pol == 1e12


def test_material_overrides():
    mat = scan_service.build_material(ScanConfig(material=MaterialPreset.TI, E_F_meV=100.0, n_layers=2, s_F=-1))
    assert mat.g == 2
    assert mat.E_F == pytest.approx(to_internal(100.0, "meV"))
    assert mat.n_layers == 2
    assert mat.s_F == -1

    custom = scan_service.build_material(ScanConfig(material=MaterialPreset.CUSTOM, v_F=8e7, g=2))
    assert (custom.v_F, custom.g) == (8e7, 2)


def test_geometry_and_detection_units():
    config = ScanConfig(theta_1i_deg=-30.0, I_p_GW=2.0, delta_f_THz=0.02)
    geom = scan_service.build_geometry(config)
    assert geom.theta_1i == pytest.approx(math.radians(-30.0))
    assert geom.I_p == pytest.approx(2e16)
    assert scan_service.build_detection(config).delta_omega == pytest.approx(2 * math.pi * 2e10)


def test_scan_values():
    config = ScanConfig(start=30.0, stop=-30.0, count=3)
    assert list(scan_service.scan_values(config, ScanVariable.THETA_1I, 0, 1, 5)) == [-30.0, 0.0, 30.0]
    log = scan_service.scan_values(ScanConfig(), ScanVariable.Q_S, 1e-3, 1e-1, 3, log=True)
    assert log[1] == pytest.approx(1e-2)
    with pytest.raises(ConfigError):
        scan_service.scan_values(ScanConfig(start=-1.0, stop=1.0), ScanVariable.Q_S, 1e-3, 1e-1, 3, log=True)


def test_degenerate_angle_row_is_flagged():
    table = scan_service.cmd_fig2(ScanConfig(start=20.0, stop=45.0, count=2))
    assert list(table["valid_flag"]) == [True, False]
    assert math.isnan(table["ReG"].iloc[1])


def test_interband_rate_scan_rematches():
    table = scan_service.cmd_fig3(ScanConfig(variable=ScanVariable.GAMMA, start=1e12, stop=2e12, count=2))
    assert list(table.columns) == ["gamma", "I_threshold"]
    assert table["I_threshold"].iloc[1] == pytest.approx(4 * table["I_threshold"].iloc[0], rel=1e-6)


def test_unknown_command():
    with pytest.raises(ConfigError):
        scan_service.run("plot", ScanConfig())


def test_fig2_reports_gain_variation():
    table = scan_service.cmd_fig2(ScanConfig(start=-60.0, stop=30.0, count=10))
    gains = table.loc[table["valid_flag"], "ReG"]
    assert table.attrs["ReG_max_over_min"] == pytest.approx(gains.max() / gains.min())
    assert 1.0 < table.attrs["ReG_max_over_min"] < 3.0


def test_gain_path_is_chosen_automatically():
    assert ScanConfig().method is None
    point = scan_service._operating_point(ScanConfig())
    assert point.method is Chi2Method.RESONANT


@pytest.mark.slow
def test_chi2_table_closed_and_numeric_agree():
    closed = scan_service.cmd_chi2(ScanConfig(method=Chi2Method.CLOSED, count=2))
    numeric = scan_service.cmd_chi2(ScanConfig(method=Chi2Method.NUMERIC, count=2))
    closed_sigma = closed["sigma_re"] + 1j * closed["sigma_im"]
    numeric_sigma = numeric["sigma_re"] + 1j * numeric["sigma_im"]
    assert all(abs(numeric_sigma - closed_sigma) / abs(closed_sigma) < 0.02)

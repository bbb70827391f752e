import pytest

from kkchain.figures import render_sweep_figure
from kkchain.sweep import CutKind, SweepSpec, run_sweep


def small_sweep(**overrides):
    base = dict(
        cut=CutKind.DIAGONAL,
        k_coupling=-1.0,
        temperatures=(0.05, 0.2),
        n_sites_list=(2,),
        range_lo=-1.0,
        range_hi=1.0,
        range_points=5,
    )
    base.update(overrides)
    return run_sweep(SweepSpec(**base))


class TestRenderSweepFigure:
    def test_multi_point_png(self, tmp_path):
        rows = small_sweep()
        path = tmp_path / "cut.png"
        render_sweep_figure(rows, str(path))
        assert path.stat().st_size > 1000

    def test_single_point_temperature_axis(self, tmp_path):
        rows = small_sweep(
            range_lo=-0.4, range_hi=-0.4, range_points=1,
            temperatures=(0.01, 0.05, 0.1, 0.5),
        )
        path = tmp_path / "tscan.svg"
        render_sweep_figure(rows, str(path))
        text = path.read_text()
        assert "temperature" in text

    def test_deterministic_output(self, tmp_path):
        rows = small_sweep()
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        render_sweep_figure(rows, str(a))
        render_sweep_figure(rows, str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_deterministic_svg(self, tmp_path):
        rows = small_sweep(range_points=3, temperatures=(0.1,))
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        render_sweep_figure(rows, str(a))
        render_sweep_figure(rows, str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_empty_rows_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="no data"):
            render_sweep_figure([], str(tmp_path / "x.png"))

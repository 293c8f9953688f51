import json

import numpy as np
import pytest
from PIL import Image

from linaug.core import ParameterError
from linaug.scene_io import (
    demo_scene,
    export_ratio_map,
    false_color,
    fill_polygon,
    load_scene,
    scene_from_dict,
)
from linaug.spectral import band_ratio_map, render_all_bands


def minimal_cfg(**overrides):
    grid31 = [1.0] * 61
    cfg = {
        "width": 8,
        "height": 6,
        "materials": [{"name": "m0", "reflectance": grid31}],
        "bands": [{"name": "X", "spd": grid31, "sensitivity": grid31}],
    }
    cfg.update(overrides)
    return cfg


class TestSceneFromDict:
    def test_minimal_scene(self):
        scene = scene_from_dict(minimal_cfg())
        assert scene.width == 8 and scene.height == 6
        assert np.all(scene.material_map == 0)
        assert np.all(scene.shading == 1.0)

    def test_missing_required_field(self):
        cfg = minimal_cfg()
        del cfg["bands"]
        with pytest.raises(ParameterError, match="bands"):
            scene_from_dict(cfg)

    def test_wrong_sample_count_names_field(self):
        cfg = minimal_cfg(materials=[{"name": "m0", "reflectance": [1.0, 2.0]}])
        with pytest.raises(ParameterError, match=r"materials\[0\].reflectance"):
            scene_from_dict(cfg)

    def test_rect_region_painted(self):
        cfg = minimal_cfg(
            materials=[
                {"name": "m0", "reflectance": [1.0] * 61},
                {"name": "m1", "reflectance": [0.5] * 61},
            ],
            regions=[{"material": "m1", "rect": [1, 2, 3, 2]}],
        )
        scene = scene_from_dict(cfg)
        assert scene.material_map[2:4, 1:4].min() == 1
        assert scene.material_map.sum() == 6

    def test_rect_outside_scene_rejected(self):
        cfg = minimal_cfg(regions=[{"material": 0, "rect": [6, 0, 4, 2]}])
        with pytest.raises(ParameterError, match=r"regions\[0\].rect"):
            scene_from_dict(cfg)

    def test_unknown_material_rejected(self):
        cfg = minimal_cfg(regions=[{"material": "mystery", "rect": [0, 0, 1, 1]}])
        with pytest.raises(ParameterError, match="mystery"):
            scene_from_dict(cfg)

    def test_curve_resampled_from_pairs(self):
        cfg = minimal_cfg()
        cfg["materials"][0]["reflectance"] = {
            "wavelengths_nm": [400.0, 1000.0],
            "values": [0.0, 1.0],
        }
        scene = scene_from_dict(cfg)
        values = scene.materials[0].values
        assert values[0] == 0.0 and values[-1] == 1.0
        assert abs(values[30] - 0.5) < 1e-12  # midpoint of the default grid

    def test_gradient_shading(self):
        cfg = minimal_cfg(shading={"gradient": {"top": 0.2, "bottom": 1.0}})
        scene = scene_from_dict(cfg)
        assert scene.shading[0, 0] == pytest.approx(0.2)
        assert scene.shading[-1, 0] == pytest.approx(1.0)
        assert np.all(np.diff(scene.shading[:, 3]) > 0)

    def test_json_syntax_error_reports_position(self, tmp_path):
        path = tmp_path / "scene.json"
        path.write_text("{\n  broken\n}")
        with pytest.raises(ParameterError, match=":2:3"):
            load_scene(path)


class TestFillPolygon:
    def test_square(self):
        mask = fill_polygon([[1, 1], [4, 1], [4, 4], [1, 4]], width=6, height=6)
        assert mask.sum() == 9  # pixel centers strictly inside [1,4)x[1,4)
        assert mask[2, 2] and not mask[0, 0] and not mask[5, 5]

    def test_triangle_half_of_square(self):
        square = fill_polygon([[0, 0], [8, 0], [8, 8], [0, 8]], 8, 8)
        triangle = fill_polygon([[0, 0], [8, 0], [8, 8]], 8, 8)
        assert square.sum() == 64
        assert 24 <= triangle.sum() <= 40

    def test_degenerate_rejected(self):
        with pytest.raises(ParameterError):
            fill_polygon([[0, 0], [1, 1]], 4, 4)


class TestDemoScene:
    def test_three_materials_four_bands(self):
        scene = demo_scene()
        assert len(scene.materials) == 3
        assert [b.name for b in scene.bands] == ["R", "G", "B", "N"]
        assert {int(m) for m in np.unique(scene.material_map)} == {0, 1, 2}

    def test_renders_within_unit_interval(self):
        rendered = render_all_bands(demo_scene())
        for img in rendered.values():
            assert img.min() >= 0.0 and img.max() <= 1.0


class TestFalseColorExport:
    def test_false_color_full_range(self):
        values = np.linspace(0, 1, 64).reshape(8, 8)
        rgb = false_color(values)
        assert rgb.shape == (8, 8, 3)
        assert tuple(rgb[0, 0]) == (68, 1, 84)
        assert tuple(rgb[-1, -1]) == (253, 231, 37)

    def test_masked_pixels_black(self):
        values = np.ones((4, 4))
        mask = np.zeros((4, 4), dtype=bool)
        mask[1, 1] = True
        rgb = false_color(values, mask)
        assert np.all(rgb[0, 0] == 0)
        assert np.any(rgb[1, 1] > 0)

    def test_export_writes_png_and_sidecar(self, tmp_path):
        scene = demo_scene()
        rendered = render_all_bands(scene)
        ratio = band_ratio_map(rendered["N"], rendered["G"])
        png_path, npz_path = export_ratio_map(ratio, tmp_path / "maps" / "ng")
        with Image.open(png_path) as im:
            assert im.mode == "RGB" and im.size == (scene.width, scene.height)
        sidecar = np.load(npz_path)
        np.testing.assert_array_equal(sidecar["values"], ratio.values)
        np.testing.assert_array_equal(sidecar["mask"], ratio.mask)

    def test_demo_scene_file_is_valid_json(self):
        from linaug.scene_io import demo_scene_path

        cfg = json.loads(demo_scene_path().read_text())
        assert cfg["width"] == 64 and cfg["height"] == 48

"""Tests for settings, helpers and validators."""

import logging
import math

import pytest

from config.settings import get_settings, reset_settings
from src.utils import logger as logger_module
from src.models.fields import BoundaryCondition, BoundaryField, MixedBVPSpec
from src.models.mesh import GAMMA1, SegmentLabel
from src.utils.helpers import format_table, format_theta, parse_theta, polar_angle
from src.utils.validators import validate_field_on_mesh, validate_mesh, validate_mixed_spec

G0 = SegmentLabel.GAMMA0
G11 = SegmentLabel.GAMMA1_1


@pytest.fixture
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


class TestSettings:
    def test_defaults_are_valid(self, fresh_settings, monkeypatch):
        for name in ("KMF_CG_TOLERANCE", "KMF_STOP_TOLERANCE", "KMF_MAX_ITERATIONS", "KMF_N_BOUNDARY"):
            monkeypatch.delenv(name, raising=False)
        settings = get_settings()
        assert settings.validate() == (True, None)
        assert settings.cg_tolerance == 1e-10
        assert settings.stop_tolerance == 1e-5
        assert settings.max_iterations == 1000

    def test_environment_override(self, fresh_settings, monkeypatch):
        monkeypatch.setenv("KMF_MAX_ITERATIONS", "25")
        assert get_settings().max_iterations == 25

    @pytest.mark.parametrize(
        "name, value",
        [("KMF_CG_TOLERANCE", "2"), ("KMF_STOP_TOLERANCE", "0"), ("KMF_N_BOUNDARY", "4"), ("KMF_SMOOTHING_SWEEPS", "-1")],
    )
    def test_invalid_values(self, fresh_settings, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        is_valid, error_msg = get_settings().validate()
        assert not is_valid
        assert name in error_msg

    def test_singleton(self, fresh_settings):
        assert get_settings() is get_settings()

    def test_settings_do_not_touch_the_log_directory(self, fresh_settings, monkeypatch, tmp_path):
        monkeypatch.setenv("LOG_FILE", str(tmp_path / "logs" / "run.log"))
        assert get_settings().log_file == tmp_path / "logs" / "run.log"
        assert not (tmp_path / "logs").exists()


class TestLogger:
    @pytest.fixture
    def fresh_logger(self, fresh_settings, monkeypatch):
        monkeypatch.setattr(logger_module, "_logger", None)
        created = []
        yield created
        for logger in created:
            for handler in list(logger.handlers):
                handler.close()
                logger.removeHandler(handler)

    def test_log_directory_is_created_with_the_file_handler(self, fresh_logger, monkeypatch, tmp_path):
        log_file = tmp_path / "nested" / "logs" / "run.log"
        monkeypatch.setenv("LOG_FILE", str(log_file))
        logger = logger_module.setup_logger("kmf_completion_dir_test")
        fresh_logger.append(logger)

        assert log_file.parent.is_dir()
        assert any(isinstance(handler, logging.FileHandler) for handler in logger.handlers)

    def test_unwritable_log_directory_keeps_console_logging(self, fresh_logger, monkeypatch, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        monkeypatch.setenv("LOG_FILE", str(blocker / "logs" / "run.log"))
        logger = logger_module.setup_logger("kmf_completion_fallback_test")
        fresh_logger.append(logger)

        assert logger.handlers
        assert not any(isinstance(handler, logging.FileHandler) for handler in logger.handlers)


class TestParseTheta:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("pi/6", math.pi / 6),
            ("pi/2", math.pi / 2),
            ("2pi/3", 2 * math.pi / 3),
            ("2*pi/3", 2 * math.pi / 3),
            (" PI/4 ", math.pi / 4),
            ("π/3", math.pi / 3),
            ("pi", math.pi),
            ("0.5236", 0.5236),
        ],
    )
    def test_valid(self, text, expected):
        assert parse_theta(text) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("text", ["quarter", "pi/0", "", "pi/"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_theta(text)


class TestFormatting:
    @pytest.mark.parametrize(
        "theta, expected",
        [(math.pi / 6, "pi/6"), (math.pi, "pi"), (3 * math.pi / 4, "3pi/4"), (1.0, "1"), (None, "-")],
    )
    def test_format_theta(self, theta, expected):
        assert format_theta(theta) == expected

    def test_table_has_header_and_one_line_per_row(self):
        text = format_table([{"name": "standard", "n": 12, "ok": True}, {"name": "alt", "n": 3, "ok": False}])
        lines = text.splitlines()
        assert len(lines) == 3
        assert lines[0].split() == ["name", "n", "ok"]
        assert lines[1].split() == ["standard", "12", "True"]
        assert lines[2].split() == ["alt", "3", "False"]

    def test_table_cells(self):
        text = format_table([{"a": None, "b": 0.000123456, "c": float("nan")}], ["b", "a", "c"])
        assert text.splitlines()[0].split() == ["b", "a", "c"]
        assert text.splitlines()[1].split() == ["0.0001235", "-", "-"]

    def test_missing_ratio_in_numeric_column(self):
        text = format_table([{"ratio": 0.5}, {"ratio": None}])
        assert [line.strip() for line in text.splitlines()] == ["ratio", "0.5", "-"]

    def test_empty_table(self):
        assert format_table([]) == ""

    def test_polar_angle_range(self):
        assert polar_angle(1.0, 0.0) == 0.0
        assert polar_angle(0.0, -1.0) == pytest.approx(1.5 * math.pi)
        assert polar_angle(-1.0, -1e-300) < 2 * math.pi


class TestValidators:
    def test_valid_meshes(self, unit_square, centred_square):
        assert validate_mesh(unit_square) == (True, None)
        assert validate_mesh(centred_square) == (True, None)

    def test_open_boundary_loop(self, unit_square):
        edges = unit_square.boundary_edges[[1, 0, 2, 3]]
        mesh = unit_square.model_copy(update={"boundary_edges": edges})
        is_valid, error_msg = validate_mesh(mesh)
        assert not is_valid
        assert "loop" in error_msg

    def test_missing_boundary_edge(self, unit_square):
        mesh = unit_square.model_copy(
            update={"boundary_edges": unit_square.boundary_edges[:3], "edge_labels": unit_square.edge_labels[:3]}
        )
        assert not validate_mesh(mesh)[0]

    def test_field_on_wrong_nodes(self, unit_square):
        field = BoundaryField(label=G11, node_ids=[1, 3], values=[0.0, 0.0])
        is_valid, error_msg = validate_field_on_mesh(unit_square, field)
        assert not is_valid
        assert "G11" in error_msg

    def test_mixed_spec_must_cover_every_segment(self, unit_square):
        spec = MixedBVPSpec(conditions=[
            BoundaryCondition.dirichlet(BoundaryField(label=G0, node_ids=[3, 0, 1], values=[0.0, 0.0, 0.0])),
        ])
        is_valid, error_msg = validate_mixed_spec(unit_square, spec)
        assert not is_valid
        assert "G11" in error_msg and "G12" in error_msg

    def test_complete_mixed_spec(self, unit_square):
        spec = MixedBVPSpec(conditions=[
            BoundaryCondition.dirichlet(BoundaryField(label=G0, node_ids=[3, 0, 1], values=[0.0, 0.0, 0.0])),
            BoundaryCondition.neumann(BoundaryField(label=GAMMA1, node_ids=[1, 2, 3], values=[0.0, 0.0, 0.0])),
        ])
        assert validate_mixed_spec(unit_square, spec) == (True, None)

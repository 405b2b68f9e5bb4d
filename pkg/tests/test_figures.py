"""Star-schema figure rendering (headless backend)."""

from disreqc.figures import render_star_figure, save_star_figures
from disreqc.schema_generator import build_star_schemas

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_save_writes_one_png_per_schema(retail_model, tmp_path):
    schemas = build_star_schemas(retail_model)
    written = save_star_figures(schemas, tmp_path)
    assert [p.name for p in written] == [
        "fact_campaign_tracking.png",
        "fact_sales_by_season.png",
        "fact_sales_by_store.png",
    ]
    for path in written:
        data = path.read_bytes()
        assert data[:8] == PNG_MAGIC
        assert len(data) > 1000


def test_save_empty_schema_list(tmp_path):
    assert save_star_figures([], tmp_path) == []


def test_render_single_schema(retail_model, tmp_path):
    schemas = build_star_schemas(retail_model)
    target = tmp_path / "one.png"
    returned = render_star_figure(schemas[0], target)
    assert returned == target
    assert target.read_bytes()[:8] == PNG_MAGIC


def test_render_deterministic(retail_model, tmp_path):
    schemas = build_star_schemas(retail_model)
    first = render_star_figure(schemas[0], tmp_path / "a.png").read_bytes()
    second = render_star_figure(schemas[0], tmp_path / "b.png").read_bytes()
    assert first == second

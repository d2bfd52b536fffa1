"""
Regression tests of the shipped problems against stored report sections.
"""

import json
from pathlib import Path

import pytest

from adjlab.config import Settings
from adjlab.services.pipeline_service import PipelineService

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def pipeline_service():
    """Create a pipeline service with default settings."""
    return PipelineService(Settings())


@pytest.mark.parametrize("name", ["cusp", "cone", "smooth"])
def test_exact_sections_match_golden(pipeline_service, name):
    """Test resolution, checks, multiplier and membership sections."""
    expected = json.loads((GOLDEN / f"{name}.json").read_text(encoding="utf-8"))
    report = pipeline_service.run_pipeline(name, shells="2:7", samples=2000).model_dump(mode="json")
    resolution = {key: report["resolution"][key] for key in expected["resolution"]}
    assert resolution == expected["resolution"]
    for section in ("checks", "multiplier", "membership"):
        assert report[section] == expected[section]


@pytest.mark.parametrize("name", ["cusp", "cone", "smooth"])
def test_every_verdict_agrees(pipeline_service, name):
    """Test that exact and numerical verdicts agree on the shipped problems."""
    report = pipeline_service.run_pipeline(name, shells="2:7", samples=2000)
    assert report.agreement
    assert all(entry.status == "agree" for entry in report.agreement)

"""
Service layer for the adjlab pipeline.
"""

from .pipeline_service import PipelineService, get_pipeline_service

__all__ = ["PipelineService", "get_pipeline_service"]

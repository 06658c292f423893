"""Utilities package initialization"""
from .exporters import exporter

# golden imports the pipeline; import it directly where needed

__all__ = ['exporter']

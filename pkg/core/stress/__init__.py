"""Stress-tensor traces assembled from surface impulse responses."""

from .trace import StressTrace, assemble_stress_trace, dump_trace, point_terms

__all__ = ["StressTrace", "assemble_stress_trace", "dump_trace", "point_terms"]

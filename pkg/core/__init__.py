"""
Time-domain Casimir force engine.

Geometry model, contour weights, the damped staggered-grid solver,
stress-trace assembly, force integration and the independent
imaginary-frequency oracles.
"""

"""Spun-normal surfaces in ideal triangulations: exact enumeration,
incompressibility certificates, and boundary slopes.

The package works over exact integer and rational arithmetic throughout.
See the module docstrings for the individual pieces: `gluing` (input
format), `linalg` (integer kernels and Hermite forms), `cones` (vertex
and Hilbert-basis enumeration), `criteria` (surface checks and slopes),
`firstorder` (degenerate limits of the gluing equations), `twofusion`
(a worked two-parameter family), and `cli` (the `spun` command).
"""

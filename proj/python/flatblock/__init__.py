"""Exact blocking and illumination queries on translation surfaces."""

from ._core import (
    FlatblockError,
    Surface,
    bc_report,
    builtin,
    builtin_names,
    cylinders,
    load_surface,
    parse_surface,
    purely_periodic,
    run_cli,
    segments,
    torus_cover,
    unfold,
    verify_blocking,
    weierstrass_points,
)

__all__ = [
    "FlatblockError",
    "Surface",
    "bc_report",
    "builtin",
    "builtin_names",
    "cylinders",
    "load_surface",
    "parse_surface",
    "purely_periodic",
    "run_cli",
    "segments",
    "torus_cover",
    "unfold",
    "verify_blocking",
    "weierstrass_points",
]

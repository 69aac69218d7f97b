"""Linear programming layer: container, simplex solver, LP writer, vertex oracle."""

from .lpfile import LpFileError, write_lp_file
from .program import EQ, GE, LE, LinearProgram, LpBuilder, LpError, LpSolution, Status
from .simplex import SolverOptions, solve
from .vertex import DimensionError, enumerate_vertices, lp_vertex_optimum, vertex_enumerate

__all__ = [
    "EQ", "GE", "LE",
    "DimensionError",
    "LinearProgram",
    "LpBuilder",
    "LpError",
    "LpFileError",
    "LpSolution",
    "SolverOptions",
    "Status",
    "enumerate_vertices",
    "lp_vertex_optimum",
    "solve",
    "vertex_enumerate",
    "write_lp_file",
]

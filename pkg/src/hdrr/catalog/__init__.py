"""Registered reductions; importing the package fills the catalog."""
from . import graphs, numbers, paths  # noqa: F401

from . import graphs, numbers, paths, sat  # noqa: F401  (registers families)

"""Small-world bias of correlation-based functional connectivity in random AR(1) systems."""

__version__ = "0.1.0"

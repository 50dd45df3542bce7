"""Micro-canonical gas statistics, finite ontological models, and a
desk-scale check of the overlap no-go argument."""

from . import continuum, ensemble, errors, ontology, pbr

__all__ = ["continuum", "ensemble", "errors", "ontology", "pbr"]
__version__ = "0.1.0"

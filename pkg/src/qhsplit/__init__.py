"""Exact computer algebra for disk potentials, Clifford branes, and the
quantum-cohomology splitting of point blowups."""

__version__ = "0.1.0"

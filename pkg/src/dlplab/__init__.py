"""Galerkin matrices of the Laplace double-layer operator on Lipschitz counterexample geometries."""

__version__ = "0.1.0"

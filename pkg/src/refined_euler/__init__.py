"""
Exact Euler characteristics of nearly perfect complexes of abelian groups.

The package computes ordinary, l-adic and refined (torsion) Euler
characteristics with exact integer and rational arithmetic.
"""

__version__ = "0.1.0"

"""Exact algebra for small quantum homology rings, a blow-up quotient ring,
Seidel-element bookkeeping, a formal Gromov-Witten calculus and finite
Frobenius algebras."""

__version__ = "0.1.0"

"""Generalized Cayley Omega-processes on M_n and the invariant-theory toolkit built on them."""

__version__ = "0.1.0"

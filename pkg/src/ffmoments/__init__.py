"""Exact moment computations for short-interval Dirichlet L-functions over F_q[T]."""

from __future__ import annotations

__version__ = "0.1.0"

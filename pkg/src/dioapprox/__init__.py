"""Exact-arithmetic experiments on rational and algebraic approximations
to analytic sets: heights, auxiliary polynomials, approximant counting,
and minimal sums of roots of unity."""

__version__ = "0.1.0"

from ._kernels import IMPL as KERNEL_IMPL  # noqa: F401

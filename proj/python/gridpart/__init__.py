"""Balanced contiguous min-cut partitioning of weighted grid graphs."""

from ._gridpart import *  # noqa: F401,F403
from ._gridpart import GridpartError, __doc__  # noqa: F401


def solve_dp(graph, k, eps, stripe_height=None, balance="two_sided"):
    """Snake ordering followed by the interval dynamic program."""
    if stripe_height is None:
        stripe_height = max(1, round((graph.rows * graph.cols / k) ** 0.5))
    order = snake_ordering(graph, stripe_height)  # noqa: F405
    return dynamic_partition(graph, order, k, eps, balance=balance)  # noqa: F405

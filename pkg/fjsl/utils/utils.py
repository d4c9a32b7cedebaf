"""Common utility functions."""

import time
from collections.abc import Callable
from typing import TypeVar

T = TypeVar("T")


def format_time_delta(delta: float) -> str:
    """Format a time delta in seconds to a string in the format HH:MM:SS.mmm.

    Args:
        delta (float): Time delta in seconds.

    Returns:
        str: Time delta formatted.
    """
    milliseconds = int(round((delta - int(delta)) * 1000))
    if milliseconds == 1000:
        delta, milliseconds = int(delta) + 1, 0
    return f"{time.strftime('%H:%M:%S', time.gmtime(int(delta)))}.{milliseconds:03d}"


def timed(
    function: Callable[..., T], *args: object, **kwargs: object
) -> tuple[T, float]:
    """Call a function and measure its wall-clock duration.

    Args:
        function (Callable[..., T]): Function to call.
        *args: Positional arguments of the function.
        **kwargs: Keyword arguments of the function.

    Returns:
        tuple[T, float]: Result of the call and duration in seconds.
    """
    start = time.perf_counter()
    result = function(*args, **kwargs)
    return result, time.perf_counter() - start

"""Bounded scalar maximization by golden-section search."""

from typing import Callable, Tuple, TypeVar

Key = TypeVar('Key')

_GOLDEN = (5 ** 0.5 - 1) / 2  # golden ratio conjugate (~0.618)


def golden_section_max(
    f: Callable[[float], Key],
    a: float,
    b: float,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> Tuple[float, Key]:
    """
    Maximize f on [a, b] by golden-section search.

    f may return any totally ordered value (a float or a tuple compared
    lexicographically). Both end points are compared with the interior
    estimate at the end, since maxima of a min of smooth terms often sit on
    the boundary.

    Args:
        f: Objective
        a, b: Search interval
        tol: Stop once the bracket is shorter than tol
        max_iter: Iteration cap

    Returns:
        Tuple[float, Key]: (x, f(x)) of the best point seen; ties keep the
                           smallest x
    """
    if b < a:
        raise ValueError(f"empty interval [{a}, {b}]")
    if b == a:
        return a, f(a)

    lo, hi = a, b
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)

    for _ in range(max_iter):
        if abs(hi - lo) < tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)

    candidates = sorted([(a, f(a)), (c, fc), (d, fd), (b, f(b))], key=lambda item: item[0])
    best_x, best_key = candidates[0]
    for x, key in candidates[1:]:
        if key > best_key:
            best_x, best_key = x, key
    return best_x, best_key

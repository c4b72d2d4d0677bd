"""Root bracketing shared by the temperature solvers."""

from __future__ import annotations

from typing import Callable


class ConvergenceError(RuntimeError):
    pass


def bisect_decreasing(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    max_iter: int = 200,
) -> float:
    """Root of a non-increasing ``f`` with ``f(lo) >= 0 >= f(hi)``.

    Runs until the bracket collapses to float resolution (or ``f`` hits an
    exact zero) rather than stopping at a residual threshold, so that flat
    stretches of ``f`` still yield an accurate abscissa.
    """
    flo, fhi = f(lo), f(hi)
    if flo < 0 or fhi > 0:
        raise ValueError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fm > 0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    else:
        if hi - lo > 1e-12 * max(1.0, abs(hi)):
            raise ConvergenceError(f"bisection did not converge in {max_iter} iterations")
    return lo if abs(flo) <= abs(fhi) else hi


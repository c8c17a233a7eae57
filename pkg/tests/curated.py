"""Hand-built configurations and oracles shared by several test modules."""

import numpy as np

from unit_fibers.fibration import Fiber, standard_fiber


def rho_by_halving(q):
    """Hurwitz-Radon number grown one factor of two at a time.

    Each extra factor of two adds 1, 2, 4, 1 to rho, cycling with period 4
    (rho of 1, 2, 4, 8, 16 is 1, 2, 4, 8, 9).
    """
    rho = 1
    k = 0
    while q % 2 == 0:
        rho += (1, 2, 4, 1)[k % 4]
        q //= 2
        k += 1
    return rho


def circle(center, u, w):
    return Fiber.from_containing_frame(center, [u, w])


def _e(d, *idx):
    return np.eye(d)[list(idx)]


XY_CIRCLE = circle([0, 0, 0], [1, 0, 0], [0, 1, 0])

# (first, second, expected linked verdict)
LINK_EXAMPLES = {
    "chain": (XY_CIRCLE, circle([1, 0, 0], [1, 0, 0], [0, 0, 1]), True),
    "coplanar": (XY_CIRCLE, circle([5, 0, 0], [1, 0, 0], [0, 1, 0]), False),
    "origin and half": (standard_fiber(1, [0, 0]), standard_fiber(1, [0.5, 0]), True),
}

NON_SKEW = {
    "coplanar circles": (XY_CIRCLE, circle([5, 0, 0], [1, 0, 0], [0, 1, 0])),
    "coaxial circles": (XY_CIRCLE, circle([0, 0, 3], [1, 0, 0], [0, 1, 0])),
    "axes meet at origin": (XY_CIRCLE, circle([3, 0, 0], [0, 1, 0], [0, 0, 1])),
    "tilted circle on the axis": (
        XY_CIRCLE, circle([0, 0, 0.5], [0, 1, 0], np.array([1, 0, -1]) / np.sqrt(2))),
    "quaternionic translate": (
        standard_fiber(3, [0, 0, 0, 0]),
        Fiber.from_containing_frame([0, 0, 0, 0, 3, 0, 0], _e(7, 0, 1, 2, 3))),
    "quaternionic crossing normals": (
        standard_fiber(3, [0, 0, 0, 0]),
        Fiber.from_containing_frame([3, 0, 0, 0, 0, 0, 0], _e(7, 1, 2, 3, 4))),
    "octonionic far translate": (
        standard_fiber(7, np.zeros(8)),
        Fiber.from_containing_frame(np.r_[7.0, np.zeros(14)], _e(15, *range(8)))),
}

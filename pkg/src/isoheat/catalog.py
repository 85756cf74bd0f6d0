"""Named domains used in the isospectral / isoheat comparisons."""

from __future__ import annotations

import math

from .geometry import BC, Rectangle, RightIsoTriangle, Union, union

D, N = BC.D, BC.N
SQRT2 = math.sqrt(2.0)


def square(side: float = 1.0, bc=(D, D, D, D)) -> Rectangle:
    return Rectangle(side, side, bc)


def mixed_square(side: float = 1.0) -> Rectangle:
    """Square with Dirichlet on three edges and Neumann on the right edge."""
    return Rectangle(side, side, (D, N, D, D))


def rect12() -> Rectangle:
    return Rectangle(1.0, 2.0)


# isoheat but not isospectral
def example3() -> tuple[Rectangle, Union]:
    return rect12(), union(mixed_square(), mixed_square())


# isospectral, different sqrt(t) coefficients
def example4() -> tuple[Rectangle, Union]:
    return rect12(), union(square(), mixed_square())


# unit square with one Neumann edge vs the unit-area triangle
# with Neumann on a leg.
def example6() -> tuple[Rectangle, RightIsoTriangle]:
    return mixed_square(), RightIsoTriangle(SQRT2, (D, N, D))


# Two-piece Chapman bands.
def chapman_pair() -> tuple[Union, Union]:
    a = union(square(), RightIsoTriangle(2.0))
    b = union(rect12(), RightIsoTriangle(SQRT2))
    return a, b


def three_piece_bands(small_leg_neumann: str = "leg") -> tuple[Union, Union]:
    """Three-piece mixed bands.

    ``small_leg_neumann`` picks which edge of the area-1/2 triangle in the
    second band is Neumann: ``"leg"`` (the figure) or ``"hyp"``.
    """
    a = union(
        mixed_square(),
        RightIsoTriangle(2.0),
        RightIsoTriangle(1.0, (D, D, N)),
    )
    small_bc = (D, N, D) if small_leg_neumann == "leg" else (D, D, N)
    b = union(
        RightIsoTriangle(SQRT2, (D, N, D)),
        rect12(),
        RightIsoTriangle(1.0, small_bc),
    )
    return a, b


def bands_minus_ef() -> tuple[Union, Union]:
    """Three-piece bands with the pieces E and F of example6() removed."""
    a = union(RightIsoTriangle(2.0), RightIsoTriangle(1.0, (D, D, N)))
    b = union(rect12(), RightIsoTriangle(1.0, (D, N, D)))
    return a, b


def truncated_chapman(J: int) -> tuple[Union, Union]:
    """First J levels of the infinite bands C and D with matched remainders.

    C_J = T(2) + sum_{j<J} 2^{-j/2} S,  D_J = sum_{j<J} 2^{-j/2} R + T(2^{1-J/2}),
    which are isospectral for every J.
    """
    a = 1.0 / SQRT2
    c_parts = [RightIsoTriangle(2.0)] + [square(a**j) for j in range(J)]
    d_parts = [Rectangle(a**j, 2 * a**j) for j in range(J)] + [RightIsoTriangle(2.0 * a**J)]
    return Union(tuple(c_parts)), Union(tuple(d_parts))

"""The group of monomials x^i y^j z^s under the twisted product.

    x^i y^j z^s . x^i' y^j' z^s' = x^(i+i') y^(j+j') z^(s+s'+i*j')

z is central; x and y commute only up to a power of z, so ``x.y.z == x y z^2``.
"""

from __future__ import annotations

from typing import NamedTuple

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _checked(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"monomial component {value} exceeds the signed 64-bit range")
    return value


class TwistedMonomial(NamedTuple):
    """A group element; ``i``/``j`` are the net displacement, ``s`` the area."""

    i: int
    j: int
    s: int

    def __mul__(self, other: object) -> TwistedMonomial:  # type: ignore[override]
        if not isinstance(other, TwistedMonomial):
            return NotImplemented
        return multiply(self, other)

    def __str__(self) -> str:
        return render(self)

    def is_feasible(self, length: int) -> bool:
        """True when the triple can arise from a walk of ``length`` steps."""
        return is_feasible(self.i, self.j, self.s, length)


def multiply(a: TwistedMonomial, b: TwistedMonomial) -> TwistedMonomial:
    return TwistedMonomial(
        _checked(a.i + b.i),
        _checked(a.j + b.j),
        _checked(a.s + b.s + a.i * b.j),
    )


def identity() -> TwistedMonomial:
    return TwistedMonomial(0, 0, 0)


def inverse(a: TwistedMonomial) -> TwistedMonomial:
    return TwistedMonomial(_checked(-a.i), _checked(-a.j), _checked(a.i * a.j - a.s))


def project(a: TwistedMonomial) -> tuple[int, int]:
    """Forget the area; a homomorphism onto (Z^2, +)."""
    return (a.i, a.j)


def is_feasible(i: int, j: int, s: int, length: int) -> bool:
    d = abs(i) + abs(j)
    if d > length or (length + i + j) % 2:
        return False
    # |s| <= (length + d)^2 / 16, kept in integers
    return 16 * abs(s) <= (length + d) ** 2


def max_area(length: int, i: int = 0, j: int = 0) -> int:
    """Largest |s| allowed by the support bound at endpoint (i, j)."""
    return (length + abs(i) + abs(j)) ** 2 // 16


def render(a: TwistedMonomial) -> str:
    parts = []
    for name, exp in (("x", a.i), ("y", a.j), ("z", a.s)):
        if exp:
            parts.append(f"{name}^{exp}")
    return " ".join(parts) if parts else "1"

"""Polynomials over GF(p) standing in for elements of GF(p)[[X]].

A polynomial is a tuple of coefficients indexed by the power of ``X`` with
no trailing zeros; ``()`` is zero.
"""

from __future__ import annotations

from collections.abc import Iterable

from hnfilt.errors import InvalidInput

Poly = tuple[int, ...]


def poly(coeffs: Iterable[int], p: int) -> Poly:
    """Reduce mod ``p`` and drop trailing zeros."""
    out = [int(c) % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return poly(
        ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)), p
    )


def neg(a: Poly, p: int) -> Poly:
    return poly((-c for c in a), p)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def mul(a: Poly, b: Poly, p: int, limit: int | None = None) -> Poly:
    """Product, optionally truncated mod ``X**limit``."""
    if not a or not b:
        return ()
    n = len(a) + len(b) - 1
    if limit is not None:
        n = min(n, limit)
    out = [0] * max(n, 0)
    for i, x in enumerate(a):
        if x == 0 or i >= n:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] += x * y
    return poly(out, p)


def truncate(a: Poly, limit: int) -> Poly:
    """``a mod X**limit``."""
    out = list(a[:limit])
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def frobenius(a: Poly, q: int) -> Poly:
    """``a(X**q)``; coefficients are fixed because the residue field is prime."""
    if not a:
        return ()
    out = [0] * ((len(a) - 1) * q + 1)
    for i, c in enumerate(a):
        out[i * q] = c
    return tuple(out)


def series_val(a: Poly) -> int:
    """The X-adic valuation: index of the lowest nonzero coefficient."""
    for i, c in enumerate(a):
        if c:
            return i
    raise InvalidInput("the zero series has no finite valuation")


def shift_down(a: Poly, k: int) -> Poly:
    """``a / X**k`` for ``k <= series_val(a)``."""
    if any(a[:k]):
        raise InvalidInput(f"cannot divide by X^{k}: valuation is smaller")
    return tuple(a[k:])


def monomial(k: int, c: int = 1) -> Poly:
    return (0,) * k + (c,) if c else ()

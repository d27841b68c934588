"""Exact rational parsing and formatting.

Floats are refused everywhere: a value either arrives as an int, a
Fraction, or a string like "3", "-2/7".
"""
from fractions import Fraction


def to_frac(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"not an exact rational: {x!r} ({type(x).__name__})")


def fmt(x) -> str:
    x = to_frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac_tuple(values) -> tuple:
    return tuple(to_frac(v) for v in values)


def fmt_list(values) -> list:
    return [fmt(v) for v in values]


def det(rows):
    """Determinant of a square list-of-lists of Fractions by elimination."""
    m = [list(r) for r in rows]
    k = len(m)
    if k == 0:
        return Fraction(1)
    sign = 1
    result = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        result *= p
        for r in range(c + 1, k):
            if m[r][c] != 0:
                f = m[r][c] / p
                row_r, row_c = m[r], m[c]
                for cc in range(c + 1, k):
                    row_r[cc] -= f * row_c[cc]
    return sign * result


def nullspace(rows):
    """Basis of the right kernel of a rational matrix (list of vectors)."""
    m = [list(map(Fraction, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][fc]
        basis.append(v)
    return basis

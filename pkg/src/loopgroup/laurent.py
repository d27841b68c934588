"""Laurent polynomials in t, optionally truncated above a known order."""
from fractions import Fraction

from .rational import to_frac, fmt

_INF = float("inf")


class Series:
    """Finite Laurent series with exact coefficients.

    ``order`` is None for an exact Laurent polynomial. Otherwise only the
    coefficients of t^k with k <= order are known; anything stored above
    it is discarded.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs=None, order=None):
        c = {}
        for k, v in (coeffs or {}).items():
            v = to_frac(v)
            if v != 0 and (order is None or k <= order):
                c[int(k)] = v
        self.coeffs = c
        self.order = order

    @classmethod
    def const(cls, v, order=None):
        return cls({0: v}, order)

    @classmethod
    def monomial(cls, v, k, order=None):
        return cls({k: v}, order)

    @property
    def exact(self):
        return self.order is None

    def low(self):
        """Lowest degree that may be nonzero (inf for the exact zero)."""
        if self.coeffs:
            return min(self.coeffs)
        return _INF if self.order is None else self.order + 1

    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    def coef(self, k):
        if self.order is not None and k > self.order:
            raise ValueError(f"coefficient t^{k} beyond truncation order {self.order}")
        return self.coeffs.get(k, Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def _join(self, other):
        if not isinstance(other, Series):
            other = Series.const(other)
        return other

    def __add__(self, other):
        other = self._join(other)
        order = _min_order(self.order, other.order)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return Series(c, order)

    __radd__ = __add__

    def __neg__(self):
        return Series({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._join(other))

    def __rsub__(self, other):
        return self._join(other) + (-self)

    def __mul__(self, other):
        other = self._join(other)
        if (self.exact and self.is_zero()) or (other.exact and other.is_zero()):
            return Series()
        bound = _INF
        if self.order is not None:
            bound = min(bound, self.order + other.low())
        if other.order is not None:
            bound = min(bound, other.order + self.low())
        order = None if bound == _INF else int(bound)
        c = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                if order is None or a + b <= order:
                    c[a + b] = c.get(a + b, 0) + x * y
        return Series(c, order)

    __rmul__ = __mul__

    def substitute_sign(self):
        """Return s(-t)."""
        return Series({k: (-v if k % 2 else v) for k, v in self.coeffs.items()}, self.order)

    def __call__(self, t):
        if not self.exact:
            raise ValueError("cannot evaluate a truncated series")
        t = to_frac(t)
        return sum((v * t ** k for k, v in self.coeffs.items()), Fraction(0))

    def agrees(self, other, upto=None):
        """Coefficientwise equality on the common known range."""
        other = self._join(other)
        top = _min_order(self.order, other.order)
        if upto is not None:
            top = upto if top is None else min(top, upto)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(k, 0) == other.coeffs.get(k, 0)
                   for k in keys if top is None or k <= top)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.order))

    def to_json(self):
        return [{"deg": k, "coef": fmt(v)} for k, v in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, terms, order=None):
        c = {}
        for term in terms:
            k = int(term["deg"])
            c[k] = c.get(k, 0) + to_frac(term["coef"])
        return cls(c, order)

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for k, v in sorted(self.coeffs.items()):
                parts.append(f"{fmt(v)}" + ("" if k == 0 else f"*t^{k}"))
            body = " + ".join(parts)
        if self.order is not None:
            body += f" + O(t^{self.order + 1})"
        return f"Series({body})"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def series_det(m):
    """Determinant of a square matrix of Series by cofactor expansion.

    Memoised over column subsets, so cost is O(n 2^n) products. Division
    never happens, which keeps truncated inputs honest.
    """
    k = len(m)
    if k == 0:
        return Series.const(1)
    memo = {}

    def expand(row, cols):
        if row == k:
            return Series.const(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Series()
        free = [c for c in range(k) if cols >> c & 1 == 0]
        for pos, c in enumerate(free):
            entry = m[row][c]
            if entry.exact and entry.is_zero():
                continue
            term = entry * expand(row + 1, cols | (1 << c))
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return expand(0, 0)

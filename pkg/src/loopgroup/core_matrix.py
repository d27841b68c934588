"""Periodic banded matrices, their foldings, minors and generators.

A matrix X with x_{i+n,j+n} = x_{i,j} is stored by the rows i = 1..n and
the diagonal offsets d = j - i in [d_lo, d_hi]. Diagonals below d_lo are
zero. Diagonals above d_hi are zero when ``exact_above`` is set and
unknown otherwise; asking for an unknown entry raises WindowError.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import LoopGroupError, TruncationError, WindowError
from .laurent import Series, series_det
from .rational import det as _fdet, fmt, frac_tuple, to_frac

ZERO = Fraction(0)
ONE = Fraction(1)


def rep(i: int, n: int) -> int:
    """Representative of i in {1..n}."""
    return (i - 1) % n + 1


class PeriodicBandMatrix:
    __slots__ = ("n", "d_lo", "d_hi", "exact_above", "_rows")

    def __init__(self, n: int, d_lo: int, d_hi: int, rows, exact_above: bool = True):
        if n < 1:
            raise ValueError("period n must be positive")
        if d_hi < d_lo:
            raise ValueError(f"empty window d_lo={d_lo} > d_hi={d_hi}")
        rows = [tuple(to_frac(v) for v in r) for r in rows]
        width = d_hi - d_lo + 1
        if len(rows) != n or any(len(r) != width for r in rows):
            raise ValueError(f"expected {n} rows of width {width}")
        if not exact_above and d_lo < 0:
            raise TruncationError("a truncated matrix must be upper triangular (d_lo >= 0)")
        self.n = n
        self.d_lo = d_lo
        self.d_hi = d_hi
        self.exact_above = bool(exact_above)
        self._rows = tuple(rows)

    # construction helpers
    @classmethod
    def from_function(cls, n, d_lo, d_hi, f, exact_above=True):
        """Build from f(i, d) for i in 1..n and d in the window."""
        rows = [[f(i, d) for d in range(d_lo, d_hi + 1)] for i in range(1, n + 1)]
        return cls(n, d_lo, d_hi, rows, exact_above)

    @classmethod
    def from_diagonals(cls, n, diags: dict, exact_above=True, d_hi=None):
        """diags maps offset d -> sequence of n values (rows 1..n)."""
        lo = min(diags)
        hi = max(diags) if d_hi is None else d_hi
        def f(i, d):
            v = diags.get(d)
            return ZERO if v is None else v[i - 1]
        return cls.from_function(n, lo, hi, f, exact_above)

    # access
    def known(self, i: int, j: int) -> bool:
        return self.exact_above or j - i <= self.d_hi

    def entry(self, i: int, j: int) -> Fraction:
        d = j - i
        if d < self.d_lo:
            return ZERO
        if d > self.d_hi:
            if self.exact_above:
                return ZERO
            raise WindowError(f"entry ({i},{j}) at offset {d} is beyond the known window d_hi={self.d_hi}",
                              i=i, j=j, d_hi=self.d_hi)
        return self._rows[(i - 1) % self.n][d - self.d_lo]

    def __getitem__(self, ij):
        i, j = ij
        return self.entry(i, j)

    def diagonal(self, d: int) -> tuple:
        return tuple(self.entry(i, i + d) for i in range(1, self.n + 1))

    @property
    def rows(self):
        return self._rows

    def submatrix(self, I: Sequence[int], J: Sequence[int]):
        return [[self.entry(i, j) for j in J] for i in I]

    def is_upper_unitriangular(self) -> bool:
        return self.d_lo >= 0 and all(self.entry(i, i) == 1 for i in range(1, self.n + 1))

    def nonzero_offsets(self):
        return [d for d in range(self.d_lo, self.d_hi + 1) if any(self.diagonal(d))]

    def trimmed(self) -> "PeriodicBandMatrix":
        """Drop zero diagonals at the bottom, and at the top when exact."""
        nz = self.nonzero_offsets()
        if not nz:
            if self.exact_above:
                return PeriodicBandMatrix(self.n, 0, 0, [[ZERO]] * self.n, True)
            lo = max(self.d_lo, 0)
            return self.window(lo, self.d_hi)
        lo = nz[0]
        hi = nz[-1] if self.exact_above else self.d_hi
        return self.window(lo, hi)

    def window(self, d_lo: int, d_hi: int, exact_above=None) -> "PeriodicBandMatrix":
        """Re-express on another window. Shrinking d_hi below the support
        makes the result truncated."""
        if exact_above is None:
            exact_above = self.exact_above and d_hi >= max(self.nonzero_offsets() or [d_lo])
        if d_hi > self.d_hi and not self.exact_above:
            raise WindowError(f"cannot extend a truncated window from {self.d_hi} to {d_hi}")
        if d_lo > self.d_lo and any(self.diagonal(d) != (ZERO,) * self.n
                                    for d in range(self.d_lo, d_lo)):
            raise ValueError("raising d_lo would drop nonzero diagonals")
        return PeriodicBandMatrix.from_function(self.n, d_lo, d_hi, lambda i, d: self.entry(i, i + d),
                                                exact_above)

    def truncate(self, d_hi: int) -> "PeriodicBandMatrix":
        """Forget diagonals above d_hi (result is truncated)."""
        if self.d_lo < 0:
            raise TruncationError("only upper triangular matrices can be truncated")
        if not self.exact_above and d_hi > self.d_hi:
            raise WindowError(f"cannot extend a truncated window from {self.d_hi} to {d_hi}")
        lo = self.d_lo
        return PeriodicBandMatrix.from_function(self.n, lo, max(d_hi, lo),
                                                lambda i, d: self.entry(i, i + d), False)

    def agrees_with(self, other: "PeriodicBandMatrix", d_max: int | None = None) -> bool:
        """Entrywise equality on every offset known for both (and <= d_max)."""
        if self.n != other.n:
            return False
        hi_candidates = []
        if not self.exact_above:
            hi_candidates.append(self.d_hi)
        if not other.exact_above:
            hi_candidates.append(other.d_hi)
        if d_max is not None:
            hi_candidates.append(d_max)
        hi = min(hi_candidates) if hi_candidates else max(self.d_hi, other.d_hi)
        lo = min(self.d_lo, other.d_lo)
        return all(self.entry(i, i + d) == other.entry(i, i + d)
                   for d in range(lo, hi + 1) for i in range(1, self.n + 1))

    def __eq__(self, other):
        if not isinstance(other, PeriodicBandMatrix):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return (a.n, a.d_lo, a.d_hi, a.exact_above, a._rows) == (b.n, b.d_lo, b.d_hi, b.exact_above, b._rows)

    def __hash__(self):
        a = self.trimmed()
        return hash((a.n, a.d_lo, a.d_hi, a.exact_above, a._rows))

    def __matmul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        rows = "; ".join(" ".join(fmt(v) for v in r) for r in self._rows)
        tag = "" if self.exact_above else ", truncated"
        return f"PeriodicBandMatrix(n={self.n}, d=[{self.d_lo},{self.d_hi}]{tag}: {rows})"

    def to_json(self):
        return {"n": self.n, "d_lo": self.d_lo, "d_hi": self.d_hi,
                "exact_above": self.exact_above,
                "rows": [[fmt(v) for v in r] for r in self._rows]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]), int(obj["d_lo"]), int(obj["d_hi"]), obj["rows"],
                   bool(obj.get("exact_above", True)))


class LaurentMatrix:
    """n x n matrix of Series; ``order`` is the common truncation order."""

    def __init__(self, n: int, entries, order: int | None = None):
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ValueError("LaurentMatrix entries must be n x n")
        self.n = n
        self.order = order
        self.entries = [[e if isinstance(e, Series) else Series(e, order) for e in r] for r in entries]
        if order is not None:
            self.entries = [[Series(e.coeffs, order) for e in r] for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - 1][j - 1]

    def det(self) -> Series:
        return series_det(self.entries)

    def agrees_with(self, other, upto=None):
        return self.n == other.n and all(
            self.entries[i][j].agrees(other.entries[i][j], upto)
            for i in range(self.n) for j in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.n == other.n and self.order == other.order and self.entries == other.entries

    def __repr__(self):
        return f"LaurentMatrix(n={self.n}, order={self.order}, {self.entries})"

    def to_json(self):
        out = {"n": self.n, "entries": [[e.to_json() for e in r] for r in self.entries]}
        if self.order is not None:
            out["order"] = self.order
        return out

    @classmethod
    def from_json(cls, obj):
        order = obj.get("order")
        n = int(obj["n"])
        entries = [[Series.from_json(e, order) for e in r] for r in obj["entries"]]
        return cls(n, entries, order)


# folding

def fold(X: PeriodicBandMatrix, T: int | None = None) -> LaurentMatrix:
    """a_ij(t) = sum_k x_{i,j+kn} t^k.

    For a truncated X the result is flagged with the largest order at which
    every coefficient is known (or T, if smaller).
    """
    n = X.n
    order = None
    if not X.exact_above:
        order = (X.d_hi - n + 1) // n
        if T is not None:
            order = min(order, T)
    elif T is not None:
        order = T
    entries = [[dict() for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        for d in range(X.d_lo, X.d_hi + 1):
            v = X.entry(i, i + d)
            if v == 0:
                continue
            j = i + d
            jb = rep(j, n)
            k = (j - jb) // n
            if order is not None and k > order:
                continue
            entries[i - 1][jb - 1][k] = v
    return LaurentMatrix(n, [[Series(e, order) for e in r] for r in entries], order)


def unfold(A: LaurentMatrix, d_hi: int | None = None) -> PeriodicBandMatrix:
    """Inverse of fold. A truncated A (or a d_hi below the support) gives a
    truncated band matrix."""
    n = A.n
    coeffs = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k, v in A[i, j].coeffs.items():
                coeffs[(i, j - i + k * n)] = v
    offsets = [d for (_, d) in coeffs]
    lo = min(offsets) if offsets else 0
    exact = A.order is None
    if exact:
        natural_hi = max(offsets) if offsets else 0
        if d_hi is None or d_hi >= natural_hi:
            hi = natural_hi
        else:
            hi, exact = d_hi, False
    else:
        hi = A.order * n - n + 1
        if d_hi is not None:
            hi = min(hi, d_hi)
    if hi < lo:
        raise WindowError(f"window top {hi} is below the lowest nonzero offset {lo}")
    if not exact and lo < 0:
        raise TruncationError("truncated unfolding requires an upper triangular matrix")
    return PeriodicBandMatrix.from_function(n, lo, hi, lambda i, d: coeffs.get((i, d), ZERO), exact)


def folded_det(X: PeriodicBandMatrix, T: int | None = None) -> Series:
    """Determinant of the folding (truncated series when X is truncated)."""
    return fold(X, T).det()


# products and minors

def multiply(X: PeriodicBandMatrix, Y: PeriodicBandMatrix) -> PeriodicBandMatrix:
    if X.n != Y.n:
        raise ValueError(f"period mismatch: {X.n} vs {Y.n}")
    if not (X.exact_above and Y.exact_above) and (X.d_lo < 0 or Y.d_lo < 0):
        raise TruncationError("a truncated factor requires both factors upper triangular")
    n = X.n
    lo = X.d_lo + Y.d_lo
    exact = X.exact_above and Y.exact_above
    if exact:
        hi = X.d_hi + Y.d_hi
    else:
        bounds = []
        if not X.exact_above:
            bounds.append(X.d_hi + Y.d_lo)
        if not Y.exact_above:
            bounds.append(Y.d_hi + X.d_lo)
        hi = min(bounds)
    if hi < lo:
        raise WindowError("product has no exactly determined diagonal")

    def f(i, d):
        s = ZERO
        d1_lo = max(X.d_lo, d - Y.d_hi) if Y.exact_above else X.d_lo
        d1_hi = min(X.d_hi, d - Y.d_lo)
        for d1 in range(d1_lo, d1_hi + 1):
            x = X.entry(i, i + d1)
            if x:
                s += x * Y.entry(i + d1, i + d)
        return s

    return PeriodicBandMatrix.from_function(n, lo, hi, f, exact).trimmed()


def multiply_all(mats: Iterable[PeriodicBandMatrix], n: int | None = None) -> PeriodicBandMatrix:
    mats = list(mats)
    if not mats:
        if n is None:
            raise ValueError("empty product needs n")
        return identity(n)
    out = mats[0]
    for m in mats[1:]:
        out = multiply(out, m)
    return out


def minor(X: PeriodicBandMatrix, I: Sequence[int], J: Sequence[int]) -> Fraction:
    I, J = list(I), list(J)
    if len(I) != len(J):
        raise ValueError("row and column sets differ in size")
    return _fdet(X.submatrix(I, J))


# generators

def identity(n: int) -> PeriodicBandMatrix:
    return PeriodicBandMatrix(n, 0, 0, [[ONE]] * n)


def chevalley_e(n: int, k: int, a) -> PeriodicBandMatrix:
    a = to_frac(a)
    kk = rep(k, n)
    return PeriodicBandMatrix.from_diagonals(n, {0: [ONE] * n, 1: [a if i == kk else ZERO for i in range(1, n + 1)]}).trimmed()


def chevalley_f(n: int, k: int, a) -> PeriodicBandMatrix:
    """Transpose of e_k(a): x_{k+1,k} = a."""
    a = to_frac(a)
    kk = rep(k + 1, n)
    return PeriodicBandMatrix.from_diagonals(n, {-1: [a if i == kk else ZERO for i in range(1, n + 1)], 0: [ONE] * n}).trimmed()


def shift(n: int, power: int = 1) -> PeriodicBandMatrix:
    return PeriodicBandMatrix(n, power, power, [[ONE]] * n)


def torus(values) -> PeriodicBandMatrix:
    vals = frac_tuple(values)
    if any(v <= 0 for v in vals):
        raise LoopGroupError("torus entries must be positive")
    return PeriodicBandMatrix(len(vals), 0, 0, [[v] for v in vals])


def whirl(values) -> PeriodicBandMatrix:
    vals = frac_tuple(values)
    n = len(vals)
    return PeriodicBandMatrix.from_diagonals(n, {0: [ONE] * n, 1: vals}).trimmed()


def curl(values, d_hi: int) -> PeriodicBandMatrix:
    """N(b)_{i,j} = b_i b_{i+1} ... b_{j-1}. Exact when some b_m vanishes,
    otherwise truncated at d_hi."""
    vals = frac_tuple(values)
    n = len(vals)
    exact = any(v == 0 for v in vals)
    hi = max(d_hi, 0)
    if exact:
        hi = max(hi, n)

    def f(i, d):
        p = ONE
        for m in range(i, i + d):
            p *= vals[(m - 1) % n]
        return p

    return PeriodicBandMatrix.from_function(n, 0, hi, f, exact).trimmed()


# sign twist

def c_transform(X: PeriodicBandMatrix) -> PeriodicBandMatrix:
    """x_{ij} -> (-1)^{|i-j|} x_{ij}."""
    return PeriodicBandMatrix.from_function(
        X.n, X.d_lo, X.d_hi, lambda i, d: -X.entry(i, i + d) if d % 2 else X.entry(i, i + d), X.exact_above)


def _require_unitriangular(X):
    if not X.is_upper_unitriangular():
        raise LoopGroupError("expected an upper unitriangular matrix")


def c_inverse(X: PeriodicBandMatrix, d_hi: int | None = None) -> PeriodicBandMatrix:
    """(X^c)^{-1}, computed one diagonal at a time.

    When X is finitely supported with folded determinant 1 the inverse is
    finitely supported too and the result is exact. Otherwise it is
    truncated at d_hi (default: X's own window, or d_hi(X) + 2n).
    """
    _require_unitriangular(X)
    n = X.n
    exact = False
    if X.exact_above and folded_det(X) == Series.const(1):
        K = max((k for row in fold(X).entries for e in row for k in e.coeffs), default=0)
        top = n * (n - 1) * K + n - 1
        exact = True
    else:
        if X.exact_above:
            top = X.d_hi + 2 * n if d_hi is None else d_hi
        else:
            top = X.d_hi if d_hi is None else min(d_hi, X.d_hi)
    Xc = c_transform(X)
    # y_{i,i+d} = -sum_{e=1}^{d} xc_{i,i+e} y_{i+e,i+d}
    Y = {}
    for i in range(1, n + 1):
        Y[(i, 0)] = ONE
    for d in range(1, top + 1):
        for i in range(1, n + 1):
            s = ZERO
            for e in range(1, min(d, Xc.d_hi) + 1):
                x = Xc.entry(i, i + e)
                if x:
                    s += x * Y[(rep(i + e, n), d - e)]
            Y[(i, d)] = -s
    out = PeriodicBandMatrix.from_function(n, 0, top, lambda i, d: Y[(i, d)], exact).trimmed()
    if exact and d_hi is not None and d_hi < out.d_hi:
        out = out.truncate(d_hi)
    return out


# words

@dataclass(frozen=True)
class Whirl:
    values: tuple
    kind = "whirl"

    def matrix(self, n, window=None):
        return whirl(self.values)


@dataclass(frozen=True)
class Curl:
    values: tuple
    kind = "curl"

    def matrix(self, n, window=None):
        if window is None:
            raise ValueError("evaluating a curl needs a window")
        return curl(self.values, window)


@dataclass(frozen=True)
class ChevE:
    k: int
    a: Fraction
    kind = "e"

    def matrix(self, n, window=None):
        return chevalley_e(n, self.k, self.a)


@dataclass(frozen=True)
class ChevF:
    k: int
    a: Fraction
    kind = "f"

    def matrix(self, n, window=None):
        return chevalley_f(n, self.k, self.a)


@dataclass(frozen=True)
class Shift:
    k: int
    kind = "shift"

    def matrix(self, n, window=None):
        return shift(n, self.k)


@dataclass(frozen=True)
class Torus:
    values: tuple
    kind = "torus"

    def matrix(self, n, window=None):
        return torus(self.values)


def _atom_params(atom):
    if isinstance(atom, (Whirl, Curl, Torus)):
        return list(atom.values)
    if isinstance(atom, (ChevE, ChevF)):
        return [atom.a]
    return []


@dataclass(frozen=True)
class GeneratorWord:
    """A left-to-right product of atoms for period n."""
    n: int
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for a in self.atoms:
            if isinstance(a, (Whirl, Curl, Torus)) and len(a.values) != self.n:
                raise ValueError(f"{a.kind} atom has {len(a.values)} parameters, expected {self.n}")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("period mismatch")
        return GeneratorWord(self.n, self.atoms + other.atoms)

    def evaluate(self, window: int | None = None) -> PeriodicBandMatrix:
        return multiply_all([a.matrix(self.n, window) for a in self.atoms], self.n)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for a in self.atoms for v in _atom_params(a)) and all(
            v > 0 for a in self.atoms if isinstance(a, Torus) for v in a.values)

    def count(self, kind) -> int:
        return sum(1 for a in self.atoms if a.kind == kind)

    def to_json(self):
        out = []
        for a in self.atoms:
            if isinstance(a, (Whirl, Curl, Torus)):
                out.append({"kind": a.kind, "values": [fmt(v) for v in a.values]})
            elif isinstance(a, (ChevE, ChevF)):
                out.append({"kind": a.kind, "k": a.k, "a": fmt(a.a)})
            else:
                out.append({"kind": "shift", "k": a.k})
        return {"n": self.n, "atoms": out}

    @classmethod
    def from_json(cls, obj, n=None):
        n = int(obj.get("n", n) if n is None else n)
        atoms = []
        for a in obj["atoms"]:
            kind = a["kind"]
            if kind == "whirl":
                atoms.append(Whirl(frac_tuple(a["values"])))
            elif kind == "curl":
                atoms.append(Curl(frac_tuple(a["values"])))
            elif kind == "torus":
                atoms.append(Torus(frac_tuple(a["values"])))
            elif kind == "e":
                atoms.append(ChevE(int(a["k"]), to_frac(a["a"])))
            elif kind == "f":
                atoms.append(ChevF(int(a["k"]), to_frac(a["a"])))
            elif kind == "shift":
                atoms.append(Shift(int(a["k"])))
            else:
                raise ValueError(f"unknown atom kind {kind!r}")
        return cls(n, tuple(atoms))

    def __str__(self):
        parts = []
        for a in self.atoms:
            if isinstance(a, (ChevE, ChevF)):
                parts.append(f"{a.kind}_{a.k}({fmt(a.a)})")
            elif isinstance(a, Shift):
                parts.append(f"S^{a.k}")
            else:
                name = {"whirl": "M", "curl": "N", "torus": "T"}[a.kind]
                parts.append(f"{name}({','.join(fmt(v) for v in a.values)})")
        return " ".join(parts) if parts else "1"


def solid_minor_indices(i: int, j: int, k: int):
    """Rows i..j-k and columns i+k..j (the solid block X_{i,j,k})."""
    return list(range(i, j - k + 1)), list(range(i + k, j + 1))

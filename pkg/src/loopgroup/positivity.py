"""Total nonnegativity and total positivity tests, epsilon and mu sequences.

Refutation is by search over row-solid minors (rows consecutive, columns
arbitrary), which is sound but only covers what fits in the window.
Certification is by explicit factorization and needs finite support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod

from .core_matrix import (Curl, GeneratorWord, PeriodicBandMatrix, folded_det, minor, rep)
from .errors import BudgetError, EstimationError, LoopGroupError, NotTNNError, WindowError
from .rational import fmt, fmt_list, frac_tuple, to_frac

REFUTED = "REFUTED"
NO_VIOLATION = "NO_VIOLATION_UP_TO_WINDOW"
CERTIFIED = "CERTIFIED"
REFUTED_TP = "REFUTED_TP"

EXACT = "EXACT_FROM_WORD"
ESTIMATED = "ESTIMATED"


@dataclass
class TnnVerdict:
    status: str
    witness: tuple | None = None
    certificate: GeneratorWord | None = None
    value: Fraction | None = None
    reason: str | None = None

    def to_json(self):
        out = {"status": self.status, "witness": None, "certificate": None}
        if self.witness is not None:
            I, J = self.witness
            out["witness"] = {"rows": list(I), "cols": list(J)}
            if self.value is not None:
                out["witness"]["value"] = fmt(self.value)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()["atoms"]
        if self.reason:
            out["reason"] = self.reason
        return out


# minor searches

def _solid_row_blocks(X: PeriodicBandMatrix, max_rows: int, col_window):
    n = X.n
    top = X.d_hi if col_window is None else min(col_window, X.d_hi)
    for r in range(1, max_rows + 1):
        for a in range(1, n + 1):
            rows = list(range(a, a + r))
            lo = a + X.d_lo
            if X.exact_above:
                hi = a + r - 1 + X.d_hi
                if col_window is not None:
                    hi = min(hi, a + col_window)
            else:
                hi = a + top
            cols = [c for c in range(lo, hi + 1) if any(X.known(i, c) and X.entry(i, c) for i in rows)]
            yield rows, cols


def find_negative_minor(X: PeriodicBandMatrix, max_rows: int | None = None, col_window: int | None = None,
                        budget: int = 500000):
    """First row-solid minor with a negative value, as (I, J), or None.

    Rows are a..a+r-1 with a in 1..n and r <= max_rows (default 2n+2).
    For a truncated X only columns whose entries are all known are used.
    ``col_window`` caps the column offset measured from the first row.
    """
    if max_rows is None:
        max_rows = 2 * X.n + 2
    spent = 0
    for rows, cols in _solid_row_blocks(X, max_rows, col_window):
        r = len(rows)
        if len(cols) < r:
            continue
        for J in combinations(cols, r):
            spent += 1
            if spent > budget:
                raise BudgetError(f"minor budget {budget} exhausted", budget=budget)
            if minor(X, rows, J) < 0:
                return tuple(rows), tuple(J)
    return None


def certify_tnn(X: PeriodicBandMatrix, max_rows: int | None = None, budget: int = 500000) -> TnnVerdict:
    """CERTIFIED with a factorization, REFUTED with a negative minor, or
    NO_VIOLATION_UP_TO_WINDOW when the factorization is only approximate."""
    from .factorization import factor

    if not X.exact_above:
        raise LoopGroupError("certify_tnn needs a finitely supported matrix")
    if folded_det(X).is_zero():
        raise LoopGroupError("folded determinant vanishes")
    try:
        res = factor(X)
    except NotTNNError as exc:
        return _refute(X, str(exc.detail), max_rows, budget)
    if not res.exact:
        return TnnVerdict(NO_VIOLATION, reason="; ".join(res.notes) or "inexact factorization")
    word = res.word
    if word.evaluate() != X or not word.is_nonnegative():
        raise LoopGroupError("factorization failed its own round-trip check")
    return TnnVerdict(CERTIFIED, certificate=word)


def _refute(X, reason, max_rows, budget):
    limits = [max_rows] if max_rows else [2 * X.n + 2, 4 * X.n + 4]
    for m in limits:
        try:
            w = find_negative_minor(X, m, budget=budget)
        except BudgetError:
            break
        if w is not None:
            return TnnVerdict(REFUTED, witness=w, value=minor(X, *w), reason=reason)
    return TnnVerdict(REFUTED, reason=f"{reason}; no negative row-solid minor found within the search limits")


@dataclass
class TpVerdict:
    status: str
    witness: tuple | None = None

    def to_json(self):
        w = None
        if self.witness is not None:
            w = {"rows": list(self.witness[0]), "cols": list(self.witness[1])}
        return {"status": self.status, "witness": w}


def is_tp_window(X: PeriodicBandMatrix, k_max: int, window: int) -> TpVerdict:
    """Look for a vanishing solid minor with I <= J.

    Checks rows r..r+s-1, columns c..c+s-1 with r in 1..n, c >= r,
    s <= k_max and every entry at offset <= window (and known).
    """
    top = window if X.exact_above else min(window, X.d_hi)
    if top < 1 or k_max < 1:
        raise WindowError("window too small for any I <= J test", window=window)
    tested = False
    for s in range(1, k_max + 1):
        for r in range(1, X.n + 1):
            # top-right entry offset is c + s - 1 - r
            for c in range(r, r + top - s + 2):
                rows = range(r, r + s)
                cols = range(c, c + s)
                tested = True
                if minor(X, rows, cols) == 0:
                    return TpVerdict(REFUTED_TP, (tuple(rows), tuple(cols)))
    if not tested:
        raise WindowError("window too small for any I <= J test", window=window)
    return TpVerdict(NO_VIOLATION)


def finite_support_violations(X: PeriodicBandMatrix):
    """Zeros above the diagonal with a nonzero entry strictly NE of them.

    In a TNN unitriangular matrix every entry NE of a zero vanishes, so
    each returned pair ((i, j), (k, l)) is an inconsistency.
    """
    out = []
    n = X.n
    for i in range(1, n + 1):
        for d in range(1, X.d_hi + 1):
            j = i + d
            if X.entry(i, j) != 0:
                continue
            for k in range(i - X.d_hi, i + 1):
                for l in range(j, k + X.d_hi + 1):
                    if (k, l) != (i, j) and l - k <= X.d_hi and X.entry(k, l) != 0:
                        out.append(((i, j), (k, l)))
                        break
                else:
                    continue
                break
    return out


# epsilon / mu

@dataclass
class EpsilonSequence:
    """Column-ratio limits; ``lower``/``upper`` bracket each value.

    In EXACT_FROM_WORD mode lower == upper == values. ``candidates`` lists
    the tied leading tuples when the maximal product is not unique.
    """
    values: tuple
    mode: str
    lower: tuple = ()
    upper: tuple = ()
    monotone: bool = True
    candidates: list = field(default_factory=list)
    kind: str = "epsilon"
    reason: str | None = None

    def __post_init__(self):
        if not self.lower:
            self.lower = self.values
        if not self.upper:
            self.upper = self.values

    def widths(self):
        return tuple(u - l for l, u in zip(self.lower, self.upper))

    def within(self, tolerance) -> bool:
        tol = to_frac(tolerance)
        return all(w <= tol for w in self.widths())

    def product(self) -> Fraction:
        return prod(self.values, start=Fraction(1))

    def to_json(self):
        out = {"kind": self.kind, "mode": self.mode, "values": fmt_list(self.values),
               "lower": fmt_list(self.lower), "upper": fmt_list(self.upper), "monotone": self.monotone}
        if self.reason:
            out["reason"] = self.reason
        if self.candidates:
            out["candidates"] = [fmt_list(c) for c in self.candidates]
        return out


def _curl_params(obj):
    """Curl parameter list if obj is a word (or list of tuples) of curls only."""
    if isinstance(obj, GeneratorWord):
        if obj.atoms and all(isinstance(a, Curl) for a in obj.atoms):
            return [a.values for a in obj.atoms]
        return None
    if isinstance(obj, (list, tuple)) and obj and all(isinstance(t, (list, tuple)) for t in obj):
        return [frac_tuple(t) for t in obj]
    return None


def _bracket(seq):
    """(last, lower bound) for a non-increasing sequence with a geometric tail."""
    last = seq[-1]
    if len(seq) < 3:
        return last, Fraction(0)
    d1 = seq[-2] - seq[-1]
    d0 = seq[-3] - seq[-2]
    if d1 == 0:
        return last, last
    if d0 > 0 and 0 < d1 < d0:
        q = d1 / d0
        return last, max(Fraction(0), last - d1 / (1 - q))
    return last, Fraction(0)


def _estimate(X: PeriodicBandMatrix, ratio, kind):
    n = X.n
    if X.d_hi < 1:
        raise WindowError("window too small to estimate ratios")
    vals, lows, monotone = [], [], True
    for i in range(1, n + 1):
        seq = []
        for D in range(1, X.d_hi + 1):
            r = ratio(i, D)
            if r is not None:
                seq.append(r)
        if not seq:
            vals.append(Fraction(0))
            lows.append(Fraction(0))
            continue
        if any(b > a for a, b in zip(seq, seq[1:])):
            monotone = False
        # only ratios sharing the step pattern of the last one are compared
        tail = seq[-1::-n][::-1] if len(seq) > 2 * n else seq
        up, lo = _bracket(tail)
        vals.append(up)
        lows.append(min(lo, up))
    return EpsilonSequence(tuple(vals), ESTIMATED, tuple(lows), tuple(vals), monotone, kind=kind)


def _eps_ratio(X):
    def ratio(i, D):
        j = i + D
        den = X.entry(i + 1, j)
        if den == 0:
            return None
        return X.entry(i, j) / den
    return ratio


def _mu_ratio(X):
    # mu_i = lim_{j -> -inf} x_{j,i+1} / x_{j,i}; take j = i - D
    def ratio(i, D):
        j = i - D
        if i + 1 - j > X.d_hi:
            return None
        den = X.entry(j, i)
        if den == 0:
            return None
        return X.entry(j, i + 1) / den
    return ratio


def epsilon_sequence(obj, tolerance=None, window: int | None = None) -> EpsilonSequence:
    """epsilon_i = lim_j x_{i,j}/x_{i+1,j}.

    For a word of curls the answer is exact: the factors are sorted by
    decreasing product and the leading tuple is returned. Ties between
    different leading tuples are reported in ``candidates`` and the value
    is estimated instead. For a matrix the ratios at the largest available
    column are returned together with a bracket.
    """
    params = _curl_params(obj)
    if params is not None:
        from .factorization import asw_sort

        srt = asw_sort(params)
        best = prod(srt[0], start=Fraction(1))
        tied = [t for t in srt if prod(t, start=Fraction(1)) == best]
        if all(t == tied[0] for t in tied):
            return EpsilonSequence(tuple(srt[0]), EXACT)
        n = len(srt[0])
        w = window or 12 * n
        X = GeneratorWord(n, tuple(Curl(t) for t in params)).evaluate(w)
        est = _estimate(X, _eps_ratio(X), "epsilon")
        est.candidates = [tuple(t) for t in tied]
        return est
    if isinstance(obj, GeneratorWord):
        obj = obj.evaluate(window or 12 * obj.n)
    X = obj
    if not X.is_upper_unitriangular():
        raise LoopGroupError("epsilon estimation needs an upper unitriangular matrix")
    est = _estimate(X, _eps_ratio(X), "epsilon")
    if tolerance is not None and not est.within(tolerance):
        est.reason = "tolerance not met"
    return est


def mu_sequence(obj, window: int | None = None) -> EpsilonSequence:
    """mu_i = lim_{j -> -inf} x_{j,i+1}/x_{j,i}; for a curl word mu = epsilon
    of the reversed, re-sorted list (the last factor after sorting)."""
    params = _curl_params(obj)
    if params is not None:
        from .factorization import asw_sort

        srt = asw_sort(params)
        best = prod(srt[0], start=Fraction(1))
        n = len(srt[0])
        # the maximal curl can be moved to the right end as well
        L = list(srt)
        from .whirl_curl import swap_curls
        for k in range(len(L) - 1):
            if prod(L[k + 1], start=Fraction(1)) == best:
                continue
            L[k], L[k + 1] = swap_curls(L[k], L[k + 1])
        if sum(1 for t in L if prod(t, start=Fraction(1)) == best) == 1:
            return EpsilonSequence(tuple(L[-1]), EXACT, kind="mu")
        X = GeneratorWord(n, tuple(Curl(t) for t in params)).evaluate(window or 12 * n)
        return _estimate(X, _mu_ratio(X), "mu")
    if isinstance(obj, GeneratorWord):
        obj = obj.evaluate(window or 12 * obj.n)
    X = obj
    if not X.is_upper_unitriangular():
        raise LoopGroupError("mu estimation needs an upper unitriangular matrix")
    return _estimate(X, _mu_ratio(X), "mu")


def radius(obj, window: int | None = None):
    """1/prod(epsilon): exact for curl words, an interval (lo, hi) otherwise."""
    eps = obj if isinstance(obj, EpsilonSequence) else epsilon_sequence(obj, window=window)
    up = prod(eps.upper, start=Fraction(1))
    lo = prod(eps.lower, start=Fraction(1))
    if eps.mode == EXACT:
        if up == 0:
            raise EstimationError("epsilon product vanishes; radius is infinite")
        return 1 / up
    hi_r = None if lo == 0 else 1 / lo
    lo_r = None if up == 0 else 1 / up
    return lo_r, hi_r

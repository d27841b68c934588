"""Loop symmetric functions evaluated at rational parameter lists.

Parameters are a list of tuples: params[i-1][r-1] is a^{(i)}_r, the
parameter of factor i at residue r (r taken mod n, 1..n). A cell in row
p and column q of a skew shape has content q - p, residue content mod n
and mirror residue -content mod n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core_matrix import Curl, GeneratorWord, PeriodicBandMatrix, minor
from .errors import EstimationError, LoopGroupError, ShapeError
from .rational import det, frac_tuple, fmt_list

ONE = Fraction(1)
ZERO = Fraction(0)


def _params(params):
    P = [frac_tuple(p) for p in params]
    if P and len({len(p) for p in P}) != 1:
        raise ValueError("all parameter tuples need the same length")
    return P


def _a(P, factor, content):
    """a^{(factor)} at residue content mod n (factor is 1-based)."""
    row = P[factor - 1]
    return row[(content - 1) % len(row)]


@dataclass(frozen=True)
class SkewShape:
    outer: tuple
    inner: tuple
    n: int = 1

    def __post_init__(self):
        outer = tuple(int(x) for x in self.outer)
        inner = tuple(int(x) for x in self.inner) + (0,) * (len(self.outer) - len(self.inner))
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)
        if len(inner) > len(outer):
            raise ShapeError("inner partition has more rows than outer")
        for part in (outer, inner):
            if any(x < 0 for x in part) or any(a < b for a, b in zip(part, part[1:])):
                raise ShapeError(f"{list(part)} is not a partition")
        if any(i > o for i, o in zip(inner, outer)):
            raise ShapeError("inner partition is not contained in outer")
        if self.n < 1:
            raise ShapeError("period must be positive")

    def cells(self):
        return [(p + 1, q) for p, (o, i) in enumerate(zip(self.outer, self.inner)) for q in range(i + 1, o + 1)]

    def size(self):
        return sum(o - i for o, i in zip(self.outer, self.inner))

    def residue(self, cell):
        p, q = cell
        return (q - p - 1) % self.n + 1

    def mirror_residue(self, cell):
        p, q = cell
        return (p - q - 1) % self.n + 1

    def conjugate(self) -> "SkewShape":
        return SkewShape(_conj(self.outer), _conj(self.inner), self.n)

    def to_json(self):
        return {"outer": list(self.outer), "inner": list(self.inner), "n": self.n}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["outer"]), tuple(obj.get("inner", ())), int(obj.get("n", 1)))


def _conj(part):
    top = part[0] if part else 0
    return tuple(sum(1 for x in part if x >= c) for c in range(1, top + 1))


def shape_from_indices(I, J, n: int = 1) -> SkewShape:
    """(j_k, j_{k-1}+1, ..., j_1+k-1) / (i_k, i_{k-1}+1, ..., i_1+k-1)."""
    I, J = list(I), list(J)
    k = len(I)
    if len(J) != k:
        raise ShapeError("I and J differ in size")
    if any(a >= b for a, b in zip(I, I[1:])) or any(a >= b for a, b in zip(J, J[1:])):
        raise ShapeError("I and J must be strictly increasing")
    bad = [t + 1 for t in range(k) if I[t] > J[t]]
    if bad:
        raise ShapeError(f"i_t > j_t at t={bad}; the minor vanishes and there is no shape", positions=bad)
    outer = tuple(J[k - t] + t - 1 for t in range(1, k + 1))
    inner = tuple(I[k - t] + t - 1 for t in range(1, k + 1))
    if inner and min(inner) < 0:
        raise ShapeError("indices too small for a shape; shift I and J by a multiple of n")
    return SkewShape(outer, inner, n)


def loop_h(r: int, k: int, params) -> Fraction:
    """Sum over 1 <= i_1 <= ... <= i_r <= m of prod_t a^{(i_t)}_{k+t-1}."""
    return _loop_hv(r, k, _params(params), strict=False)


def loop_e(r: int, k: int, params) -> Fraction:
    """Same sum over strictly increasing i_1 < ... < i_r."""
    return _loop_hv(r, k, _params(params), strict=True)


def _loop_hv(r, k, P, strict):
    if r < 0:
        return ZERO
    if r == 0:
        return ONE
    m = len(P)
    # dp[f] = weight of sequences so far ending with factor f
    dp = [ZERO] + [_a(P, f, k) for f in range(1, m + 1)]
    for t in range(1, r):
        new = [ZERO] * (m + 1)
        acc = ZERO
        for f in range(1, m + 1):
            if not strict:
                acc += dp[f]
            new[f] = acc * _a(P, f, k + t)
            if strict:
                acc += dp[f]
        dp = new
    return sum(dp, ZERO)


def loop_schur_eval(shape: SkewShape, params, mirror: bool = False) -> Fraction:
    """Sum over semistandard fillings with entries 1..m of the residue weight.

    Columns are filled left to right; the state is the previous column.
    """
    P = _params(params)
    m = len(P)
    if shape.size() == 0:
        return ONE
    if m == 0:
        return ZERO
    if P and len(P[0]) != shape.n:
        raise ValueError(f"parameter tuples have length {len(P[0])}, shape period is {shape.n}")
    res = shape.mirror_residue if mirror else shape.residue
    width = shape.outer[0]
    cols = []
    for q in range(1, width + 1):
        rows = [p + 1 for p in range(len(shape.outer)) if shape.inner[p] < q <= shape.outer[p]]
        cols.append((q, rows))

    def weight(q, rows, fill):
        w = ONE
        for p, v in zip(rows, fill):
            w *= P[v - 1][res((p, q)) - 1]
        return w

    states = {(): ONE}
    prev_rows = []
    for q, rows in cols:
        new = {}
        fills = list(combinations(range(1, m + 1), len(rows)))
        for prev, acc in states.items():
            left = dict(zip(prev_rows, prev))
            for fill in fills:
                if any(p in left and v < left[p] for p, v in zip(rows, fill)):
                    continue
                w = weight(q, rows, fill)
                if w:
                    new[fill] = new.get(fill, ZERO) + acc * w
        states = new
        prev_rows = rows
        if not states:
            return ZERO
    return sum(states.values(), ZERO)


def jacobi_trudi_eval(I, J, params, kind: str = "curl") -> Fraction:
    """det(h_{j_t - i_s}^{(i_s)}) for curls, det(e_{j_t - i_s}^{(i_s)}) for whirls."""
    P = _params(params)
    f = {"curl": False, "whirl": True}[kind]
    I, J = list(I), list(J)
    if len(I) != len(J):
        raise ValueError("I and J differ in size")
    M = [[_loop_hv(j - i, i, P, f) for j in J] for i in I]
    return det(M)


def schur_for_minor(I, J, params, kind: str = "curl") -> Fraction:
    """Tableau side of the minor identity: s_lambda for curls, the mirror
    Schur function of the conjugate shape for whirls."""
    P = _params(params)
    n = len(P[0]) if P else 1
    sh = shape_from_indices(I, J, n)
    if kind == "curl":
        return loop_schur_eval(sh, P)
    return loop_schur_eval(sh.conjugate(), P, mirror=True)


# minor ratio limits

def _curl_window(params, top):
    P = _params(params)
    return GeneratorWord(len(P[0]), tuple(Curl(p) for p in P)).evaluate(top)


def ratio_target(params, I, i: int, k: int) -> Fraction:
    """s_nu at the first k factors, nu = (i+k)^k / (i_k, i_{k-1}+1, ..., i_1+k-1)."""
    P = _params(params)
    I = list(I)
    if len(I) != k:
        raise ValueError("|I| must equal k")
    if any(I[t] > i + t + 1 for t in range(k)):
        raise ShapeError("need i_t <= i + t")
    inner = tuple(I[k - t] + t - 1 for t in range(1, k + 1))
    nu = SkewShape((i + k,) * k, inner, len(P[0]))
    return loop_schur_eval(nu, P[:k])


@dataclass
class RatioLimit:
    ratios: list          # (h, exact ratio)
    target: Fraction | None
    monotone: bool

    def last(self):
        return self.ratios[-1][1] if self.ratios else None

    def error(self):
        if self.target is None or not self.ratios:
            return None
        return abs(self.last() - self.target)


def _ratios(X: PeriodicBandMatrix, I, i, k, h_max, h_min=None):
    I = list(I)
    den_rows = list(range(i + 1, i + k + 1))
    start = max(max(I), i + k) if h_min is None else h_min
    out = []
    for h in range(start, h_max + 1):
        J = list(range(h + 1, h + k + 1))
        den = minor(X, den_rows, J)
        if den == 0:
            continue
        out.append((h, minor(X, I, J) / den))
    return out


def minor_ratio_limit(params, I, i: int, k: int, h_max: int = 60, X: PeriodicBandMatrix | None = None) -> RatioLimit:
    """Ratios Delta_{I,J_h}/Delta_{I_i,J_h} for h up to h_max, with the target.

    I_i = {i+1..i+k}, J_h = {h+1..h+k}. ``params`` are the curl factors in
    sorted order (decreasing product); X defaults to their product. The
    ratios are non-increasing in h and tend to the target.
    """
    P = _params(params) if params is not None else None
    if P is not None and k > len(P):
        raise ValueError("k exceeds the number of curl factors")
    if X is None:
        if P is None:
            raise ValueError("need parameters or a matrix")
        X = _curl_window(P, h_max + k)
    elif not X.exact_above:
        h_max = min(h_max, X.d_hi - k + 1 + min(I) - 1)
    seq = _ratios(X, I, i, k, h_max)
    if not seq:
        raise EstimationError("every denominator minor vanished")
    monotone = all(b[1] <= a[1] for a, b in zip(seq, seq[1:]))
    target = ratio_target(P, I, i, k) if P is not None else None
    return RatioLimit(seq, target, monotone)


@dataclass
class Recovery:
    params: list          # recovered tuples, factor 1..k_max
    change: list          # |value at h_max - value one period earlier| per tuple entry
    h_max: int
    converged: bool

    def to_json(self):
        return {"params": [fmt_list(p) for p in self.params],
                "change": [fmt_list(c) for c in self.change],
                "h_max": self.h_max, "converged": self.converged}


def recover_curl_params(obj, k_max: int, h_max: int = 60, tolerance=Fraction(1, 10 ** 6)) -> Recovery:
    """Recover the sorted curl factors from minor ratios.

    a^{(k)}_i = R_k(i) / R_{k-1}(i+1) where R_k(i) is the ratio limit for
    rows {i..i+k-1} over {i+1..i+k}, R_0 = 1. Each ratio is taken at the
    last available h; ``change`` compares with h - n.
    """
    if isinstance(obj, PeriodicBandMatrix):
        X = obj
        n = X.n
        if not X.exact_above:
            h_max = min(h_max, X.d_hi)
    else:
        P = _params(obj.values for obj in obj.atoms) if isinstance(obj, GeneratorWord) else _params(obj)
        n = len(P[0])
        X = _curl_window(P, h_max + k_max + n + 1)

    def R(k, i, h):
        if k == 0:
            return ONE
        rows_num = list(range(i, i + k))
        rows_den = list(range(i + 1, i + k + 1))
        J = list(range(h + 1, h + k + 1))
        if h + k - i > X.d_hi and not X.exact_above:
            raise EstimationError("window too small for the requested h")
        den = minor(X, rows_den, J)
        if den == 0:
            raise EstimationError(f"denominator minor vanishes at k={k}, i={i}, h={h}")
        return minor(X, rows_num, J) / den

    params, change = [], []
    ok = True
    for k in range(1, k_max + 1):
        h = h_max - k - n
        vals, diffs = [], []
        for i in range(1, n + 1):
            v = R(k, i, h) / R(k - 1, i + 1, h)
            w = R(k, i, h - n) / R(k - 1, i + 1, h - n)
            vals.append(v)
            diffs.append(abs(v - w))
        if any(d > Fraction(tolerance) for d in diffs):
            ok = False
        params.append(tuple(vals))
        change.append(tuple(diffs))
    return Recovery(params, change, h_max, ok)

"""Constructive factorizations.

polygen_factor   invertible polynomial loop group elements into shifts,
                 Chevalley generators and a torus element.
reduce_lower     X = F S^k Y with F lower (f's and torus) and Y unitriangular.
finite_factor    finitely supported unitriangular X into whirls and e's.
asw_sort/step    greedy extraction of the maximal curl.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core_matrix import (ChevE, ChevF, Curl, GeneratorWord, PeriodicBandMatrix, Shift, Torus, Whirl,
                          c_inverse, c_transform, curl, fold, folded_det, multiply, rep, shift, whirl)
from .errors import EstimationError, LoopGroupError, NotTNNError
from .rational import frac_tuple, nullspace
from .whirl_curl import swap_curls, tuple_product

ZERO = Fraction(0)


@dataclass
class FactorizationResult:
    word: GeneratorWord
    residual: PeriodicBandMatrix | None = None
    exact: bool = True
    notes: list = field(default_factory=list)


def _row_op(X: PeriodicBandMatrix, i: int, delta: int, c: Fraction) -> PeriodicBandMatrix:
    """Replace row i (and its translates) by row_i - c * row_{i+delta}."""
    n = X.n
    lo = min(X.d_lo, X.d_lo + delta)
    if X.exact_above:
        hi = max(X.d_hi, X.d_hi + delta)
    else:
        hi = min(X.d_hi, X.d_hi + delta)
    ii = rep(i, n)

    def f(r, d):
        if r != ii:
            return X.entry(r, r + d)
        return X.entry(r, r + d) - c * X.entry(r + delta, r + d)

    return PeriodicBandMatrix.from_function(n, lo, hi, f, X.exact_above).trimmed()


def _eliminate_ne(X: PeriodicBandMatrix, max_steps: int = 100000):
    """Strip everything above the diagonal with e_i(c) factors on the left.

    Returns the e-atoms (left to right) and the lower triangular remainder.
    """
    atoms = []
    n = X.n
    for _ in range(max_steps):
        X = X.trimmed()
        D = X.d_hi
        if D <= 0:
            return atoms, X
        top = X.diagonal(D)
        i = next((r for r in range(1, n + 1) if top[r - 1] != 0 and top[r % n] == 0), None)
        if i is None:
            raise NotTNNError(f"diagonal {D} is completely filled; no special corner",
                              diagonal=D)
        j = i + D
        x, piv = X.entry(i, j), X.entry(i + 1, j)
        if x < 0 or piv <= 0:
            raise NotTNNError(f"corner ({i},{j})={x} with pivot x_({i + 1},{j})={piv}", i=i, j=j)
        c = x / piv
        atoms.append(ChevE(i, c))
        X = _row_op(X, i, 1, c)
    raise LoopGroupError("elimination did not terminate")


def _eliminate_sw(X: PeriodicBandMatrix, stop_when_full: bool = False, max_steps: int = 100000):
    """Strip the lowest diagonals with f_{i-1}(c) factors on the left.

    Stops when nothing is left below the diagonal or, with stop_when_full,
    as soon as the lowest nonzero diagonal has no zero entries.
    """
    atoms = []
    n = X.n
    for _ in range(max_steps):
        X = X.trimmed()
        L = X.d_lo
        bottom = X.diagonal(L)
        if stop_when_full:
            if all(v != 0 for v in bottom):
                return atoms, X
        elif L >= 0:
            return atoms, X
        i = next((r for r in range(1, n + 1) if bottom[r - 1] != 0 and bottom[(r - 2) % n] == 0), None)
        if i is None:
            raise NotTNNError(f"diagonal {L} is completely filled; no special corner", diagonal=L)
        j = i + L
        x, piv = X.entry(i, j), X.entry(i - 1, j)
        if x < 0 or piv <= 0:
            raise NotTNNError(f"corner ({i},{j})={x} with pivot x_({i - 1},{j})={piv}", i=i, j=j)
        c = x / piv
        atoms.append(ChevF(rep(i - 1, n), c))
        X = _row_op(X, i, -1, c)
    raise LoopGroupError("elimination did not terminate")


def det_monomial(X: PeriodicBandMatrix):
    """(c, m) if the folded determinant is c t^m, else None."""
    d = folded_det(X)
    if len(d.coeffs) != 1:
        return None
    (m, c), = d.coeffs.items()
    return c, m


def polygen_factor(X: PeriodicBandMatrix) -> GeneratorWord:
    """Factor a TNN element of the polynomial loop group.

    Word shape: S^m e... f... T. Raises NotTNNError if a pivot fails.
    """
    if not X.exact_above:
        raise LoopGroupError("polygen_factor needs a finitely supported matrix")
    mono = det_monomial(X)
    if mono is None:
        raise LoopGroupError("folded determinant is not a monomial")
    _, m = mono
    n = X.n
    Z = multiply(shift(n, -m), X) if m else X
    e_atoms, Z = _eliminate_ne(Z)
    f_atoms, Z = _eliminate_sw(Z)
    Z = Z.trimmed()
    diag = Z.diagonal(0)
    if Z.d_lo != 0 or Z.d_hi != 0:
        raise NotTNNError("remainder is not diagonal")
    if any(v <= 0 for v in diag):
        raise NotTNNError(f"torus part has a nonpositive entry {diag}")
    atoms = ([Shift(m)] if m else []) + e_atoms + f_atoms
    if any(v != 1 for v in diag):
        atoms.append(Torus(diag))
    return GeneratorWord(n, tuple(atoms))


def reduce_lower(X: PeriodicBandMatrix):
    """X = F S^k Y with F a product of f's times a torus and Y unitriangular.

    Returns (F as a GeneratorWord, k, Y).
    """
    n = X.n
    f_atoms, Z = _eliminate_sw(X, stop_when_full=True)
    k = Z.d_lo
    D = Z.diagonal(k)
    if any(v <= 0 for v in D):
        raise NotTNNError(f"lowest diagonal {D} is not positive")
    Y = PeriodicBandMatrix.from_function(
        n, 0, Z.d_hi - k, lambda r, d: Z.entry(r - k, r + d) / D[rep(r - k, n) - 1], Z.exact_above)
    atoms = list(f_atoms)
    if any(v != 1 for v in D):
        atoms.append(Torus(D))
    return GeneratorWord(n, tuple(atoms)), k, Y.trimmed()


# curls

def asw_sort(params):
    """Sort a curl list by decreasing parameter product using curl exchanges.

    Stable bubble sort: only strictly smaller products move right. The
    product N(L_1)N(L_2)... is unchanged.
    """
    L = [frac_tuple(p) for p in params]
    for p in L:
        if any(v == 0 for v in p):
            raise LoopGroupError("asw_sort needs non-degenerate curls")
    changed = True
    while changed:
        changed = False
        for i in range(len(L) - 1):
            if tuple_product(L[i]) < tuple_product(L[i + 1]):
                L[i], L[i + 1] = swap_curls(L[i], L[i + 1])
                changed = True
    return L


def asw_step(X: PeriodicBandMatrix, epsilon=None, tolerance=None):
    """Split X = N(eps) X' with X' = M(-eps) X on X's window.

    epsilon may be a tuple, an EpsilonSequence, or None (estimated from X;
    the estimate must be within ``tolerance``).
    """
    from .positivity import EpsilonSequence, epsilon_sequence

    if epsilon is None:
        epsilon = epsilon_sequence(X, tolerance=tolerance)
    if isinstance(epsilon, EpsilonSequence):
        if epsilon.mode != "EXACT_FROM_WORD":
            if tolerance is None or not epsilon.within(tolerance):
                raise EstimationError("epsilon estimate is not within the requested tolerance",
                                      width=[str(w) for w in epsilon.widths()])
        eps = epsilon.values
    else:
        eps = frac_tuple(epsilon)
    Xp = multiply(whirl(tuple(-v for v in eps)), X)
    return eps, Xp


# whirl extraction

def _folded_at(X: PeriodicBandMatrix, t0: Fraction):
    A = fold(X)
    return [[A.entries[i][j](t0) for j in range(X.n)] for i in range(X.n)]


def _params_from_kernel(v, t0, n):
    if any(x == 0 for x in v):
        return None
    a = [-v[i] / v[i + 1] for i in range(n - 1)]
    a.append(-v[n - 1] / (t0 * v[0]))
    return tuple(a)


def _divide_whirl(X: PeriodicBandMatrix, a) -> PeriodicBandMatrix | None:
    """Y with Y M(a) = X and one diagonal fewer than X, or None."""
    n = X.n
    d = X.d_hi
    minv = c_transform(curl(a, d))  # M(a)^{-1} up to offset d

    def f(i, e):
        s = ZERO
        for j in range(0, e + 1):
            x = X.entry(i, i + j)
            if x:
                s += x * minv.entry(i + j, i + e)
        return s

    top = max(d - 1, 0)
    Y = PeriodicBandMatrix.from_function(n, 0, top, f, True)
    if multiply(Y, whirl(a)) != X:
        return None
    return Y.trimmed()


def _root_data(X: PeriodicBandMatrix):
    """Whirl products encoded by the folded determinant.

    det = prod_i (1 + (-1)^{n+1} p_i t); returns (rational p's, all real p's
    as floats), each positive.
    """
    import sympy

    det = folded_det(X)
    n = X.n
    top = det.degree()
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(det.coef(k).numerator, det.coef(k).denominator)
                       for k in range(top, -1, -1)], t, domain="QQ")
    sign = 1 if n % 2 == 0 else -1  # t0 = (-1)^n / p
    rational, approx = [], []
    for r in set(sympy.real_roots(poly)):
        if r == 0:
            continue
        if r.is_Rational:
            p = sign / Fraction(int(r.p), int(r.q))
            if p > 0:
                rational.append(p)
                approx.append(float(p))
        else:
            p = float(sign / r.evalf(30))
            if p > 0:
                approx.append(p)
    return sorted(set(rational), reverse=True), sorted(approx, reverse=True)


@dataclass
class WhirlExtraction:
    Y: PeriodicBandMatrix
    params: tuple
    exact: bool = True
    alternatives: list = field(default_factory=list)


def _newton_whirl(X, seed, denominator_bound, max_iter):
    """Newton iteration on the top-diagonal equations, then rationalize."""
    import mpmath

    n, d = X.n, X.d_hi
    mpmath.mp.dps = 50
    rows = [[mpmath.mpf(X.entry(i, i + j).numerator) / X.entry(i, i + j).denominator
             for j in range(d + 1)] for i in range(1, n + 1)]

    def eqs(*a):
        out = []
        for i in range(n):
            s = 0
            for j in range(d + 1):
                p = 1
                for m in range(i + j, i + d):
                    p *= a[m % n]
                s += (-1) ** (d - j) * rows[i][j] * p
            out.append(s)
        return out

    try:
        sol = mpmath.findroot(eqs, [mpmath.mpf(float(s)) for s in seed], maxsteps=max_iter)
    except (ZeroDivisionError, ValueError) as exc:
        raise EstimationError(f"Newton iteration failed: {exc}") from None
    sol = [sol] if n == 1 and not hasattr(sol, "__len__") else list(sol)
    approx = tuple(Fraction(str(mpmath.nstr(v, 40))) for v in sol)
    rational = tuple(v.limit_denominator(denominator_bound) for v in approx)
    return approx, rational


def whirl_extract(X: PeriodicBandMatrix, denominator_bound: int = 10 ** 6, max_iter: int = 100) -> WhirlExtraction:
    """Write X = Y M(a) with Y having one diagonal fewer.

    The whirl product p is the largest root datum of the folded
    determinant. When p is rational, a is read off the kernel of the folded
    matrix at t0 = (-1)^n / p: if v spans it then a_i = -v_i / v_{i+1}
    (i < n) and a_n = -v_n / (t0 v_1). Otherwise fall back to Newton
    iteration seeded by ratio estimates, rationalize and verify exactly;
    an unverifiable answer is returned flagged inexact.
    """
    X = X.trimmed()
    if not X.exact_above or not X.is_upper_unitriangular():
        raise LoopGroupError("whirl_extract needs a finitely supported unitriangular matrix")
    if X.d_hi < 1:
        raise LoopGroupError("nothing above the diagonal")
    det = folded_det(X)
    if (det.degree() or 0) == 0:
        raise LoopGroupError("folded determinant is constant; no whirl to extract")
    n = X.n
    rational, approx = _root_data(X)
    if not approx:
        raise NotTNNError("folded determinant has no positive root datum")
    pmax = approx[0]
    found = []
    if rational and abs(float(rational[0]) - pmax) <= 1e-9 * max(1.0, pmax):
        p = rational[0]
        t0 = Fraction((-1) ** n) / p
        basis = nullspace(_folded_at(X, t0))
        candidates = list(basis)
        if len(basis) > 1:
            candidates += [[x + y for x, y in zip(u, w)] for k, u in enumerate(basis) for w in basis[k + 1:]]
        for v in candidates:
            a = _params_from_kernel(v, t0, n)
            if a is None or any(x < 0 for x in a):
                continue
            Y = _divide_whirl(X, a)
            if Y is not None and all(Y.entry(i, i + e) >= 0 for i in range(1, n + 1)
                                     for e in range(Y.d_lo, Y.d_hi + 1)):
                found.append((Y, a))
        if found:
            Y, a = found[0]
            return WhirlExtraction(Y, a, True, [b for _, b in found[1:]])
    # numeric fallback
    from .positivity import epsilon_sequence
    try:
        seed = epsilon_sequence(c_inverse(X, X.d_hi + 6 * n)).values
    except LoopGroupError:
        seed = (Fraction(pmax) ** Fraction(1, 1),) * n
    if any(s <= 0 for s in seed):
        seed = tuple(Fraction(pmax ** (1.0 / n)).limit_denominator(10 ** 6) for _ in range(n))
    approx_a, rat_a = _newton_whirl(X, seed, denominator_bound, max_iter)
    if all(x > 0 for x in rat_a):
        Y = _divide_whirl(X, rat_a)
        if Y is not None:
            return WhirlExtraction(Y, rat_a, True)
    if any(x < 0 for x in approx_a):
        raise NotTNNError("no nonnegative whirl parameters found")
    Y = _divide_whirl_approx(X, approx_a)
    return WhirlExtraction(Y, approx_a, False)


def _divide_whirl_approx(X, a):
    n, d = X.n, X.d_hi
    minv = c_transform(curl(a, d))

    def f(i, e):
        return sum((X.entry(i, i + j) * minv.entry(i + j, i + e) for j in range(e + 1)), ZERO)

    return PeriodicBandMatrix.from_function(n, 0, max(d - 1, 0), f, True)


def finite_factor(X: PeriodicBandMatrix) -> FactorizationResult:
    """Factor a finitely supported TNN unitriangular X into e's and whirls.

    Whirls are peeled off the right while the folded determinant is not
    constant; the rest is eliminated with e's.
    """
    X = X.trimmed()
    if not X.exact_above or not X.is_upper_unitriangular():
        raise LoopGroupError("finite_factor needs a finitely supported unitriangular matrix")
    n = X.n
    whirls = []
    notes = []
    exact = True
    Y = X
    while (folded_det(Y).degree() or 0) > 0:
        ext = whirl_extract(Y)
        if ext.alternatives:
            notes.append(f"whirl extraction had {len(ext.alternatives) + 1} valid solutions")
        whirls.insert(0, Whirl(ext.params))
        Y = ext.Y
        if not ext.exact:
            exact = False
            notes.append("whirl parameters are approximate")
            break
    if not exact:
        return FactorizationResult(GeneratorWord(n, tuple(whirls)), residual=Y, exact=False, notes=notes)
    e_atoms, Z = _eliminate_ne(Y)
    if Z.trimmed() != PeriodicBandMatrix(n, 0, 0, [[1]] * n):
        raise NotTNNError("remainder after Chevalley elimination is not the identity")
    word = GeneratorWord(n, tuple(e_atoms) + tuple(whirls))
    if not word.is_nonnegative():
        raise NotTNNError("factorization produced a negative parameter")
    return FactorizationResult(word, None, True, notes)


def factor(X: PeriodicBandMatrix) -> FactorizationResult:
    """Factor any finitely supported TNN matrix with nonzero folded det."""
    if not X.exact_above:
        raise LoopGroupError("input is not finitely supported")
    det = folded_det(X)
    if det.is_zero():
        raise LoopGroupError("folded determinant vanishes")
    if len(det.coeffs) == 1:
        return FactorizationResult(polygen_factor(X))
    F, k, Y = reduce_lower(X)
    res = finite_factor(Y)
    head = F + GeneratorWord(X.n, (Shift(k),) if k else ())
    return FactorizationResult(head + res.word, res.residual, res.exact, res.notes)

"""Commutation maps for whirls and curls.

eta exchanges two whirls (or two curls), theta moves a whirl past a curl,
and absorb_chevalley pushes a Chevalley generator through a list of
whirls or curls. Parameter tuples are plain tuples of Fractions indexed
1..n cyclically.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm, prod

from .core_matrix import ChevE, GeneratorWord, rep
from .errors import InadmissibleError
from .rational import frac_tuple, to_frac


def _at(v, i):
    return v[(i - 1) % len(v)]


def _check_pair(a, b):
    a, b = frac_tuple(a), frac_tuple(b)
    if len(a) != len(b) or not a:
        raise ValueError("parameter tuples must be nonempty and of equal length")
    return a, b


def is_degenerate(a) -> bool:
    return any(v == 0 for v in a)


def kappa(a, b, i: int) -> Fraction:
    """sum_{j=i}^{i+n-1} prod_{k=i+1}^{j} b_k prod_{k=j+1}^{i+n-1} a_k"""
    a, b = _check_pair(a, b)
    n = len(a)
    total = Fraction(0)
    for j in range(i, i + n):
        term = Fraction(1)
        for k in range(i + 1, j + 1):
            term *= _at(b, k)
        for k in range(j + 1, i + n):
            term *= _at(a, k)
        total += term
    return total


def eta(a, b):
    """(a, b) -> (b', a') with M(a)M(b) = M(b')M(a') and N(b)N(a) = N(a')N(b')."""
    a, b = _check_pair(a, b)
    n = len(a)
    ks = [kappa(a, b, i) for i in range(1, n + 1)]
    zero = [i + 1 for i, k in enumerate(ks) if k == 0]
    if zero:
        raise InadmissibleError(f"kappa vanishes at positions {zero}", positions=zero)
    k = lambda i: ks[(i - 1) % n]
    bp = tuple(_at(b, i + 1) * k(i + 1) / k(i) for i in range(1, n + 1))
    ap = tuple(_at(a, i - 1) * k(i - 1) / k(i) for i in range(1, n + 1))
    return bp, ap


def _sums(a, b):
    s = [x + y for x, y in zip(a, b)]
    if any(v == 0 for v in s):
        raise InadmissibleError("a_i + b_i vanishes", positions=[i + 1 for i, v in enumerate(s) if v == 0])
    return s


def theta(a, b):
    """(a, b) -> (b', a') with M(a)N(b) = N(b')M(a')."""
    a, b = _check_pair(a, b)
    s = _sums(a, b)
    n = len(a)
    bp = tuple(s[i] * b[(i + 1) % n] / s[(i + 1) % n] for i in range(n))
    ap = tuple(s[i] * a[(i + 1) % n] / s[(i + 1) % n] for i in range(n))
    return bp, ap


def theta_inverse(a, b):
    """Inverse of theta: theta_inverse(*theta(a, b)) == (a, b)."""
    a, b = _check_pair(a, b)
    s = _sums(a, b)
    n = len(a)
    bp = tuple(s[i] * b[(i - 1) % n] / s[(i - 1) % n] for i in range(n))
    ap = tuple(s[i] * a[(i - 1) % n] / s[(i - 1) % n] for i in range(n))
    return bp, ap


def theta_power(a, b, m: int):
    """theta applied m times (m may be negative)."""
    step = theta if m >= 0 else theta_inverse
    for _ in range(abs(m)):
        a, b = step(a, b)
    return a, b


def theta_order(n: int) -> int:
    return lcm(n, 2)


def swap_whirls(u, v):
    """(u', v') with M(u)M(v) = M(u')M(v'); prod u' = prod v."""
    return eta(u, v)


def swap_curls(u, v):
    """(u', v') with N(u)N(v) = N(u')N(v'); prod u' = prod v.

    The curl exchange applies eta to the reversed pair.
    """
    bp, ap = eta(v, u)
    return ap, bp


def apply_eta_word(word, params, kind: str = "whirl"):
    """Apply eta_i (acting on positions i, i+1, 1-based) for each i in word.

    With kind="whirl" the list is read as M(L_1)M(L_2)... and each step
    replaces (L_i, L_{i+1}) by eta(L_i, L_{i+1}). With kind="curl" the
    list is read as N(L_1)N(L_2)... and the curl exchange is used, so the
    product of curls is preserved.
    """
    swap = {"whirl": swap_whirls, "curl": swap_curls}[kind]
    L = [frac_tuple(p) for p in params]
    for step, i in enumerate(word):
        if not 1 <= i < len(L):
            raise ValueError(f"eta index {i} out of range for a list of {len(L)} tuples")
        try:
            L[i - 1], L[i] = swap(L[i - 1], L[i])
        except InadmissibleError as exc:
            raise InadmissibleError(f"eta_{i} inadmissible at step {step + 1}: {exc.detail}",
                                    step=step + 1, index=i) from None
    return L


def absorb_chevalley(kind: str, k: int, a, params):
    """Push e_k(a) rightwards through a list of whirls or curls.

    kind="whirl": e_k(a) M(b1)...M(bm) = M(c1)...M(cm) e_{k+m}(a_m).
    kind="curl":  e_k(a) N(b1)...N(bm) = N(c1)...N(cm) e_{k-m}(a_m).
    Returns (new list, (index, parameter) of the residual generator, the
    residual parameter after each step).
    """
    if kind not in ("whirl", "curl"):
        raise ValueError("kind must be 'whirl' or 'curl'")
    if any(len(b) < 2 for b in params):
        raise ValueError("Chevalley absorption needs n >= 2")
    c = to_frac(a)
    idx = k
    out = []
    trail = []
    for b in params:
        b = list(frac_tuple(b))
        n = len(b)
        i = rep(idx, n)
        bi = b[i - 1]
        if c == 0:
            out.append(tuple(b))
            idx = idx + 1 if kind == "whirl" else idx - 1
            trail.append(c)
            continue
        if c + bi == 0:
            raise InadmissibleError(f"a + b_{i} vanishes", index=i)
        if kind == "whirl":
            j = rep(i + 1, n)
            bj = b[j - 1]
            new_c = bj * c / (c + bi)
            b[j - 1] = bj * bi / (c + bi)
            b[i - 1] = c + bi
            idx += 1
        else:
            j = rep(i - 1, n)
            bj = b[j - 1]
            new_c = bj * c / (c + bi)
            b[j - 1] = bj * bi / (c + bi)
            b[i - 1] = c + bi
            idx -= 1
        c = new_c
        out.append(tuple(b))
        trail.append(c)
    n = len(out[0]) if out else None
    final_index = rep(idx, n) if n else idx
    return out, (final_index, c), trail


def degenerate_whirl_to_word(a) -> GeneratorWord:
    """Factor a whirl with a zero parameter into Chevalley generators.

    Each maximal cyclic run a_i..a_j of nonzero entries becomes
    e_j(a_j) ... e_{i+1}(a_{i+1}) e_i(a_i); the descending order is what
    keeps the product free of entries two steps above the diagonal.
    """
    a = frac_tuple(a)
    n = len(a)
    if not is_degenerate(a):
        raise ValueError("whirl is not degenerate")
    atoms = []
    for start in range(1, n + 1):
        if _at(a, start) == 0 or _at(a, start - 1) != 0:
            continue
        run = []
        i = start
        while _at(a, i) != 0:
            run.append(i)
            i += 1
        atoms.extend(ChevE(rep(m, n), _at(a, m)) for m in reversed(run))
    return GeneratorWord(n, tuple(atoms))


def tuple_product(a) -> Fraction:
    return prod(frac_tuple(a), start=Fraction(1))

"""Command line interface: JSON in, JSON out.

Exit status is 0 on success, 2 on a domain error (the output is then
{"error": {"code", "detail"}}) and 1 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import core_matrix as cm
from . import cylnet, factorization, lsym, positivity, whirl_curl
from .errors import LoopGroupError
from .laurent import Series
from .rational import fmt, fmt_list, frac_tuple, to_frac

SCHEMA = "loopgroup-tnn/1"


class InputError(Exception):
    pass


def _reject_float(s):
    raise InputError(f"floating point literal {s} is not allowed; use p/q")


def _load_json(text):
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _read(spec):
    """Inline JSON if it looks like JSON, else a file path."""
    if spec is None:
        raise InputError("missing input")
    s = spec.strip()
    if s[:1] in "[{" or s.lstrip("-").isdigit() or s.startswith('"'):
        return _load_json(s)
    try:
        return _load_json(Path(spec).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc.strerror}") from None


def _scalar(spec):
    s = spec.strip().strip('"')
    try:
        return to_frac(s)
    except ValueError:
        raise InputError(f"not an exact rational: {spec!r}") from None


def _tuple(obj):
    if isinstance(obj, dict):
        obj = obj["values"]
    return frac_tuple(obj)


def _tuples(obj):
    if isinstance(obj, dict):
        obj = obj.get("params", obj.get("values"))
    return [_tuple(t) for t in obj]


def _matrix(obj, window=None):
    if isinstance(obj, dict) and "matrix" in obj:
        obj = obj["matrix"]
    if isinstance(obj, dict) and "atoms" in obj:
        return cm.GeneratorWord.from_json(obj).evaluate(window)
    if isinstance(obj, dict) and "entries" in obj:
        return cm.unfold(cm.LaurentMatrix.from_json(obj), window)
    return cm.PeriodicBandMatrix.from_json(obj)


def _word(obj):
    if isinstance(obj, dict) and "word" in obj:
        obj = obj["word"]
    return cm.GeneratorWord.from_json(obj)


def _int_list(spec):
    v = _read(spec)
    if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
        raise InputError(f"expected a list of integers, got {spec!r}")
    return v


def _series_terms(s: Series):
    out = {"terms": s.to_json()}
    if s.order is not None:
        out["order"] = s.order
    return out


# subcommands

def cmd_fold(a):
    X = _matrix(_read(a.input), a.window)
    A = cm.fold(X)
    return {"folded": A.to_json(), "det": _series_terms(A.det())}


def cmd_unfold(a):
    obj = _read(a.input)
    if isinstance(obj, dict) and "folded" in obj:
        obj = obj["folded"]
    A = cm.LaurentMatrix.from_json(obj)
    return {"matrix": cm.unfold(A, a.window).to_json()}


def cmd_mul(a):
    mats = [_matrix(_read(s), a.window) for s in a.input_all]
    return {"matrix": cm.multiply_all(mats).to_json()}


def cmd_minor(a):
    X = _matrix(_read(a.input), a.window)
    rows, cols = _int_list(a.rows), _int_list(a.cols)
    return {"rows": rows, "cols": cols, "value": fmt(cm.minor(X, rows, cols))}


def cmd_tnn(a):
    X = _matrix(_read(a.input))
    v = positivity.certify_tnn(X, max_rows=a.max_rows, budget=a.budget)
    return v.to_json()


def cmd_tp(a):
    X = _matrix(_read(a.input), a.window)
    window = a.window if a.window is not None else X.d_hi + X.n
    return positivity.is_tp_window(X, a.kmax, window).to_json()


def _eps_source(obj, window):
    if isinstance(obj, list) or (isinstance(obj, dict) and "params" in obj):
        return _tuples(obj)
    if isinstance(obj, dict) and "atoms" in obj:
        w = _word(obj)
        if all(isinstance(x, cm.Curl) for x in w.atoms):
            return w
        return w.evaluate(window)
    return _matrix(obj, window)


def cmd_epsilon(a):
    src = _eps_source(_read(a.input), a.window)
    eps = positivity.epsilon_sequence(src, tolerance=a.tolerance, window=a.window)
    mu = positivity.mu_sequence(src, window=a.window)
    out = {"epsilon": eps.to_json(), "mu": mu.to_json()}
    try:
        r = positivity.radius(eps)
        out["radius"] = fmt(r) if isinstance(r, Fraction) else [None if x is None else fmt(x) for x in r]
    except LoopGroupError as exc:
        out["radius"] = None
        out["radius_note"] = exc.detail
    return out


def cmd_factor(a):
    X = _matrix(_read(a.input))
    res = factorization.factor(X)
    out = {"word": res.word.to_json(), "exact": res.exact, "notes": res.notes}
    if res.residual is not None:
        out["residual"] = res.residual.to_json()
    return out


def cmd_reduce(a):
    X = _matrix(_read(a.input), a.window)
    F, k, Y = factorization.reduce_lower(X)
    return {"F": F.to_json(), "k": k, "Y": Y.to_json()}


def cmd_asw_sort(a):
    L = factorization.asw_sort(_tuples(_read(a.input if a.input else a.params)))
    return {"params": [fmt_list(t) for t in L]}


def cmd_asw_step(a):
    obj = _read(a.input)
    src = _eps_source(obj, a.window)
    if a.eps is not None:
        eps = _tuple(_read(a.eps))
    else:
        eps = positivity.epsilon_sequence(src, tolerance=a.tolerance, window=a.window)
    X = src if isinstance(src, cm.PeriodicBandMatrix) else None
    if X is None:
        n = len(src[0]) if isinstance(src, list) else src.n
        word = src if isinstance(src, cm.GeneratorWord) else cm.GeneratorWord(n, tuple(cm.Curl(t) for t in src))
        X = word.evaluate(a.window or 8 * n)
    e, Xp = factorization.asw_step(X, eps, tolerance=a.tolerance)
    return {"curl": fmt_list(e), "residual": Xp.to_json()}


def cmd_whirl_extract(a):
    X = _matrix(_read(a.input))
    ext = factorization.whirl_extract(X, max_iter=a.budget or 100)
    return {"whirl": fmt_list(ext.params), "Y": ext.Y.to_json(), "exact": ext.exact,
            "alternatives": [fmt_list(t) for t in ext.alternatives]}


def cmd_eta(a):
    if a.word is not None:
        L = whirl_curl.apply_eta_word(_int_list(a.word), _tuples(_read(a.params)), kind=a.kind)
        return {"params": [fmt_list(t) for t in L]}
    bp, ap = whirl_curl.eta(_tuple(_read(a.a)), _tuple(_read(a.b)))
    return {"b_prime": fmt_list(bp), "a_prime": fmt_list(ap)}


def cmd_theta(a):
    x, y = _tuple(_read(a.a)), _tuple(_read(a.b))
    if a.power is not None:
        # theta^m as a map on pairs; the labels only make sense for m = 1
        u, v = whirl_curl.theta_power(x, y, a.power)
        return {"power": a.power, "result": [fmt_list(u), fmt_list(v)]}
    bp, ap = whirl_curl.theta(x, y)
    return {"b_prime": fmt_list(bp), "a_prime": fmt_list(ap)}


def cmd_absorb(a):
    out, (idx, c), trail = whirl_curl.absorb_chevalley(a.kind, a.k, _scalar(a.a), _tuples(_read(a.params)))
    return {"params": [fmt_list(t) for t in out], "residual": {"k": idx, "a": fmt(c)}, "trail": fmt_list(trail)}


def cmd_schur(a):
    P = _tuples(_read(a.params))
    if a.I is not None:
        I, J = _int_list(a.I), _int_list(a.J)
        out = {"jacobi_trudi": fmt(lsym.jacobi_trudi_eval(I, J, P, a.kind)),
               "tableaux": fmt(lsym.schur_for_minor(I, J, P, a.kind))}
        out["shape"] = lsym.shape_from_indices(I, J, len(P[0])).to_json()
        return out
    sh = lsym.SkewShape.from_json(_read(a.input if a.input else a.shape))
    return {"shape": sh.to_json(), "value": fmt(lsym.loop_schur_eval(sh, P, mirror=a.mirror))}


def cmd_ratio_limit(a):
    P = _tuples(_read(a.params))
    r = lsym.minor_ratio_limit(P, _int_list(a.I), a.i, a.k, a.hmax)
    out = {"target": fmt(r.target), "monotone": r.monotone,
           "ratios": [{"h": h, "ratio": fmt(v)} for h, v in r.ratios[-a.show:]]}
    err = r.error()
    out["last_error"] = fmt(err)
    if a.tolerance is not None:
        out["within_tolerance"] = err <= a.tolerance
    return out


def cmd_recover(a):
    if a.params is not None:
        src = _tuples(_read(a.params))
    else:
        src = _matrix(_read(a.input))
    tol = a.tolerance if a.tolerance is not None else Fraction(1, 10 ** 6)
    return lsym.recover_curl_params(src, a.kmax, a.hmax, tol).to_json()


def _network(a):
    return cylnet.CylNetwork.from_json(_read(a.input))


def cmd_net_eval(a):
    N = _network(a)
    return {"matrix": cylnet.network_eval(N, a.window, a.max_rotor).to_json()}


def cmd_net_minor(a):
    N = _network(a)
    rows, cols = _int_list(a.rows), _int_list(a.cols)
    lind = cylnet.lindstrom_minor(N, rows, cols, budget=a.budget or 200000)
    direct = cm.minor(cylnet.network_eval(N), rows, cols)
    return {"rows": rows, "cols": cols, "lindstrom": fmt(lind), "minor": fmt(direct), "agree": lind == direct}


def cmd_net_det(a):
    N = _network(a)
    fam = cylnet.folded_det_families(N, budget=a.budget or 200000)
    det = cm.folded_det(cylnet.network_eval(N))
    return {"families": _series_terms(fam), "folded_det": _series_terms(det), "agree": fam == det}


def cmd_net_build(a):
    if a.input is not None or a.word is not None:
        N = cylnet.network_from_word(_word(_read(a.input if a.input is not None else a.word)))
    else:
        if a.kind is None:
            raise InputError("net-build needs --in/--word or --kind")
        if a.kind in ("e", "f"):
            params = (a.n, a.k, _scalar(a.params))
        elif a.kind == "shift":
            params = (a.n, a.k)
        else:
            params = _tuple(_read(a.params)) if a.params is not None else None
        N = cylnet.build_block(a.kind, params, n=a.n)
    out = {"network": N.to_json()}
    if a.diagram:
        out["diagram"] = N.diagram().splitlines()
    return out


COMMANDS = {
    "fold": cmd_fold, "unfold": cmd_unfold, "mul": cmd_mul, "minor": cmd_minor,
    "tnn": cmd_tnn, "tp": cmd_tp, "epsilon": cmd_epsilon, "factor": cmd_factor,
    "reduce": cmd_reduce, "asw-sort": cmd_asw_sort, "asw-step": cmd_asw_step,
    "whirl-extract": cmd_whirl_extract, "eta": cmd_eta, "theta": cmd_theta,
    "absorb": cmd_absorb, "schur": cmd_schur, "ratio-limit": cmd_ratio_limit,
    "recover": cmd_recover, "net-eval": cmd_net_eval, "net-minor": cmd_net_minor,
    "net-det": cmd_net_det, "net-build": cmd_net_build,
}


def _rational(s):
    try:
        return to_frac(s)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="input_all", action="append", metavar="PATH_OR_JSON")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--window", type=int)
    common.add_argument("--hmax", type=int, default=60)
    common.add_argument("--budget", type=int, default=500000)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; enumeration is serial")
    common.add_argument("--tolerance", type=_rational)

    p = _Parser(prog="loopgroup", description="Exact computations with totally nonnegative loop group elements.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = {name: sub.add_parser(name, parents=[common]) for name in COMMANDS}

    for name in ("minor", "net-minor"):
        sp[name].add_argument("--rows", required=True)
        sp[name].add_argument("--cols", required=True)
    sp["tnn"].add_argument("--max-rows", type=int)
    sp["tp"].add_argument("--kmax", type=int, default=3)
    sp["asw-sort"].add_argument("--params")
    sp["asw-step"].add_argument("--eps")
    sp["eta"].add_argument("--a")
    sp["eta"].add_argument("--b")
    sp["eta"].add_argument("--word")
    sp["eta"].add_argument("--params")
    sp["eta"].add_argument("--kind", choices=["whirl", "curl"], default="whirl")
    sp["theta"].add_argument("--a", required=True)
    sp["theta"].add_argument("--b", required=True)
    sp["theta"].add_argument("--power", type=int)
    sp["absorb"].add_argument("--kind", choices=["whirl", "curl"], required=True)
    sp["absorb"].add_argument("--k", type=int, required=True)
    sp["absorb"].add_argument("--a", required=True)
    sp["absorb"].add_argument("--params", required=True)
    sp["schur"].add_argument("--params", required=True)
    sp["schur"].add_argument("--shape")
    sp["schur"].add_argument("--I")
    sp["schur"].add_argument("--J")
    sp["schur"].add_argument("--kind", choices=["curl", "whirl"], default="curl")
    sp["schur"].add_argument("--mirror", action="store_true")
    sp["ratio-limit"].add_argument("--params", required=True)
    sp["ratio-limit"].add_argument("--I", required=True)
    sp["ratio-limit"].add_argument("--i", type=int, required=True)
    sp["ratio-limit"].add_argument("--k", type=int, required=True)
    sp["ratio-limit"].add_argument("--show", type=int, default=5)
    sp["recover"].add_argument("--params")
    sp["recover"].add_argument("--kmax", type=int, default=1)
    sp["net-eval"].add_argument("--max-rotor", type=int)
    sp["net-build"].add_argument("--word")
    sp["net-build"].add_argument("--kind", choices=["identity", "e", "f", "shift", "torus", "whirl", "curl"])
    sp["net-build"].add_argument("--params")
    sp["net-build"].add_argument("--n", type=int)
    sp["net-build"].add_argument("--k", type=int)
    sp["net-build"].add_argument("--diagram", action="store_true")
    return p


def run(argv=None):
    """Run one subcommand; returns (exit code, output dict, output path)."""
    args = None
    try:
        args = build_parser().parse_args(argv)
        args.input = args.input_all[0] if args.input_all else None
        if args.threads < 1:
            raise InputError("--threads must be positive")
        out = COMMANDS[args.command](args)
        code = 0
    except LoopGroupError as exc:
        out = {"error": {"code": exc.code, "detail": str(exc.detail)}}
        code = 2
    except (InputError, ValueError, TypeError, KeyError, IndexError, ZeroDivisionError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        out = {"error": {"code": "MALFORMED_INPUT", "detail": msg}}
        code = 1
    out = dict(out)
    out["schema"] = SCHEMA
    return code, out, getattr(args, "out", None)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def main(argv=None):
    code, out, path = run(argv)
    text = dumps(out)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

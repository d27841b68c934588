"""Cylindric networks.

A network lives on a cylinder with sources v_1..v_n at the bottom and
sinks w_1..w_n at the top. The cut line running from the arc v_n v_1 to
the arc w_n w_1 is not stored geometrically: every edge carries the net
number of counterclockwise crossings with it. An (i, j)-path starts at
v_{i mod n}, ends at w_{j mod n} and has rotor alpha(j) - alpha(i), where
alpha(i) = (i - rep(i)) / n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core_matrix import (ChevE, ChevF, GeneratorWord, PeriodicBandMatrix, Shift, Torus, Whirl, rep)
from .errors import BudgetError, NetworkError
from .laurent import Series
from .rational import fmt, to_frac

ONE = Fraction(1)
ZERO = Fraction(0)


def alpha(i: int, n: int) -> int:
    return (i - rep(i, n)) // n


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    weight: Fraction = ONE
    cross: int = 0


@dataclass
class CylNetwork:
    n: int
    heights: dict
    edges: list
    sources: list
    sinks: list
    cyclic: bool = False
    _out: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.edges = [e if isinstance(e, Edge) else Edge(*e) for e in self.edges]
        self.edges = [Edge(e.tail, e.head, to_frac(e.weight), int(e.cross)) for e in self.edges]
        self.validate()
        out = {v: [] for v in self.heights}
        for e in self.edges:
            out[e.tail].append(e)
        self._out = out

    def validate(self):
        n = self.n
        if len(self.sources) != n or len(self.sinks) != n:
            raise NetworkError(f"expected {n} sources and {n} sinks")
        ids = set(self.heights)
        for v in list(self.sources) + list(self.sinks):
            if v not in ids:
                raise NetworkError(f"boundary vertex {v!r} is not a vertex")
        if len(set(self.sources) | set(self.sinks)) != 2 * n:
            raise NetworkError("boundary vertices must be distinct")
        if not self.cyclic and len(set(self.heights.values())) != len(self.heights):
            raise NetworkError("vertex heights must be distinct")
        indeg = {v: 0 for v in ids}
        outdeg = {v: 0 for v in ids}
        for e in self.edges:
            if e.tail not in ids or e.head not in ids:
                raise NetworkError(f"edge {e.tail}->{e.head} uses an unknown vertex")
            if e.weight < 0:
                raise NetworkError(f"edge {e.tail}->{e.head} has a negative weight")
            if not self.cyclic and self.heights[e.tail] >= self.heights[e.head]:
                raise NetworkError(f"edge {e.tail}->{e.head} does not go up in height")
            indeg[e.head] += 1
            outdeg[e.tail] += 1
        if any(indeg[v] for v in self.sources):
            raise NetworkError("a source has an incoming edge")
        if any(outdeg[v] for v in self.sinks):
            raise NetworkError("a sink has an outgoing edge")

    def out_edges(self, v):
        return self._out[v]

    def to_json(self):
        return {
            "n": self.n,
            "vertices": [{"id": v, "height": h} for v, h in sorted(self.heights.items(), key=lambda t: (t[1], t[0]))],
            "edges": [{"from": e.tail, "to": e.head, "weight": fmt(e.weight), "cross": e.cross} for e in self.edges],
            "sources": list(self.sources),
            "sinks": list(self.sinks),
        }

    @classmethod
    def from_json(cls, obj):
        heights = {str(v["id"]): v["height"] for v in obj["vertices"]}
        edges = [Edge(str(e["from"]), str(e["to"]), to_frac(e.get("weight", 1)), int(e.get("cross", 0)))
                 for e in obj["edges"]]
        return cls(int(obj["n"]), heights, edges, [str(s) for s in obj["sources"]],
                   [str(s) for s in obj["sinks"]], bool(obj.get("cyclic", False)))

    def diagram(self) -> str:
        """Plain text listing, one edge per line, bottom to top."""
        lines = [f"n={self.n} sources={self.sources} sinks={self.sinks}"]
        for e in sorted(self.edges, key=lambda e: (self.heights[e.tail], self.heights[e.head])):
            mark = "" if e.cross == 0 else f"  [crosses {e.cross:+d}]"
            lines.append(f"{e.tail} -> {e.head}  w={fmt(e.weight)}{mark}")
        return "\n".join(lines)


# paths

@dataclass(frozen=True)
class CylPath:
    i: int
    j: int
    vertices: tuple
    edges: tuple

    @property
    def weight(self) -> Fraction:
        w = ONE
        for e in self.edges:
            w *= e.weight
        return w

    @property
    def rot(self) -> int:
        return sum(e.cross for e in self.edges)

    def suffix_rot(self, c) -> int:
        """rot of the part of the path from vertex c to the end."""
        k = self.vertices.index(c)
        return sum(e.cross for e in self.edges[k:])


def _paths_from(N: CylNetwork, source, budget):
    """All (sink, edge tuple, vertex tuple) from source; acyclic networks only."""
    if N.cyclic:
        raise NetworkError("path enumeration needs an acyclic network")
    sinks = set(N.sinks)
    out = []
    stack = [(source, (), (source,))]
    while stack:
        v, es, vs = stack.pop()
        if v in sinks:
            out.append((v, es, vs))
            if len(out) > budget:
                raise BudgetError(f"more than {budget} paths", budget=budget)
            continue
        for e in N.out_edges(v):
            stack.append((e.head, es + (e,), vs + (e.head,)))
    return out


def paths(N: CylNetwork, i: int, j: int, budget: int = 100000):
    """All (i, j)-paths."""
    n = N.n
    src = N.sources[rep(i, n) - 1]
    snk = N.sinks[rep(j, n) - 1]
    want = alpha(j, n) - alpha(i, n)
    out = []
    for v, es, vs in _paths_from(N, src, budget):
        if v == snk and sum(e.cross for e in es) == want:
            out.append(CylPath(i, j, vs, es))
    out.sort(key=lambda p: p.vertices)
    return out


def _sums_by_rotor(N: CylNetwork, source, max_rotor=None):
    """{(sink index, rotor): weight sum} for paths from source.

    Acyclic networks use a topological sweep. Cyclic ones need max_rotor:
    states (vertex, rotor) with |rotor| <= max_rotor are propagated until
    nothing changes, which terminates when every cycle has nonzero rotor.
    """
    sink_index = {w: k + 1 for k, w in enumerate(N.sinks)}
    if not N.cyclic:
        order = sorted(N.heights, key=lambda v: N.heights[v])
        acc = {source: {0: ONE}}
        result = {}
        for v in order:
            if v not in acc:
                continue
            here = acc.pop(v)
            if v in sink_index:
                for r, w in here.items():
                    result[(sink_index[v], r)] = result.get((sink_index[v], r), ZERO) + w
                continue
            for e in N.out_edges(v):
                tgt = acc.setdefault(e.head, {})
                for r, w in here.items():
                    tgt[r + e.cross] = tgt.get(r + e.cross, ZERO) + w * e.weight
        return result
    if max_rotor is None:
        raise NetworkError("a cyclic network needs a rotor bound")
    result = {}
    frontier = {(source, 0): ONE}
    steps = 0
    limit = 4 * len(N.heights) * (2 * max_rotor + 1) + 8
    while frontier:
        steps += 1
        if steps > limit:
            raise NetworkError("a cycle with zero rotor makes the path sum infinite")
        new = {}
        for (v, r), w in frontier.items():
            if v in sink_index:
                key = (sink_index[v], r)
                result[key] = result.get(key, ZERO) + w
                continue
            for e in N.out_edges(v):
                r2 = r + e.cross
                if abs(r2) > max_rotor or w * e.weight == 0:
                    continue
                new[(e.head, r2)] = new.get((e.head, r2), ZERO) + w * e.weight
        frontier = new
    return result


def network_eval(N: CylNetwork, d_window: int | None = None, max_rotor: int | None = None) -> PeriodicBandMatrix:
    """x_{i,j} = total weight of (i, j)-paths.

    Acyclic networks give a finitely supported matrix; d_window truncates
    it. Cyclic networks are evaluated with rotors bounded by max_rotor and
    give a matrix truncated at offset n*max_rotor (or d_window if smaller).
    """
    n = N.n
    vals = {}
    for i in range(1, n + 1):
        for (k, r), w in _sums_by_rotor(N, N.sources[i - 1], max_rotor).items():
            if w:
                vals[(i, k + r * n - i)] = w
    offsets = [d for _, d in vals] or [0]
    lo, hi = min(offsets), max(offsets)
    exact = True
    if N.cyclic:
        # paths with rotor above the bound were dropped; offsets up to
        # n * max_rotor only need rotors within it
        hi = n * max_rotor if d_window is None else min(d_window, n * max_rotor)
        lo = min(lo, 0)
        exact = False
    elif d_window is not None and d_window < hi:
        hi, exact = d_window, False
    X = PeriodicBandMatrix.from_function(n, lo, hi, lambda i, d: vals.get((i, d), ZERO), exact)
    return X.trimmed()


# crossings

def common_vertices(p: CylPath, q: CylPath):
    qs = set(q.vertices)
    return [v for v in p.vertices if v in qs]


def proper_crossing_test(p: CylPath, q: CylPath, c, n: int) -> bool:
    """Swapping tails at c keeps both paths typed iff
    rot(p after c) - rot(q after c) = alpha(j) - alpha(j')."""
    if c not in p.vertices or c not in q.vertices:
        raise NetworkError(f"{c!r} is not on both paths")
    return p.suffix_rot(c) - q.suffix_rot(c) == alpha(p.j, n) - alpha(q.j, n)


def is_uncrossed(p: CylPath, q: CylPath, n: int) -> bool:
    return not any(proper_crossing_test(p, q, c, n) for c in common_vertices(p, q))


def swap_tails(p: CylPath, q: CylPath, c):
    """The two paths obtained by following one path up to c and the other after it."""
    kp, kq = p.vertices.index(c), q.vertices.index(c)
    pv = p.vertices[:kp] + q.vertices[kq:]
    pe = p.edges[:kp] + q.edges[kq:]
    qv = q.vertices[:kq] + p.vertices[kp:]
    qe = q.edges[:kq] + p.edges[kp:]
    return pv, pe, qv, qe


def uncrossed_families(N: CylNetwork, I, J, budget: int = 200000):
    """Families (p_1..p_k) of (i_t, j_t)-paths, pairwise uncrossed."""
    I, J = list(I), list(J)
    if len(I) != len(J):
        raise ValueError("I and J differ in size")
    options = [paths(N, i, j, budget) for i, j in zip(I, J)]
    out = []
    count = [0]

    def go(t, chosen):
        if t == len(options):
            out.append(tuple(chosen))
            return
        for p in options[t]:
            count[0] += 1
            if count[0] > budget:
                raise BudgetError(f"family budget {budget} exhausted", budget=budget)
            if all(is_uncrossed(q, p, N.n) for q in chosen):
                chosen.append(p)
                go(t + 1, chosen)
                chosen.pop()

    go(0, [])
    return out


def lindstrom_minor(N: CylNetwork, I, J, budget: int = 200000) -> Fraction:
    """Sum of w(P) over pairwise uncrossed families of (i_t, j_t)-paths."""
    total = ZERO
    for fam in uncrossed_families(N, I, J, budget):
        w = ONE
        for p in fam:
            w *= p.weight
        total += w
    return total


def disjoint_families(N: CylNetwork, shift: int, budget: int = 200000):
    """Vertex-disjoint families with p_i from v_i to w_{i+shift}."""
    n = N.n
    options = []
    for i in range(1, n + 1):
        src = N.sources[i - 1]
        snk = N.sinks[rep(i + shift, n) - 1]
        options.append([(es, vs) for v, es, vs in _paths_from(N, src, budget) if v == snk])
    out = []
    count = [0]

    def go(t, used, chosen):
        if t == n:
            out.append(list(chosen))
            return
        for es, vs in options[t]:
            count[0] += 1
            if count[0] > budget:
                raise BudgetError(f"family budget {budget} exhausted", budget=budget)
            if used.isdisjoint(vs):
                chosen.append((es, vs))
                go(t + 1, used | set(vs), chosen)
                chosen.pop()

    go(0, frozenset(), [])
    return out


def folded_det_families(N: CylNetwork, k_range=None, budget: int = 200000) -> Series:
    """sum_k (-1)^{k(n-1)} (sum over Gamma_k of w(P)) t^k.

    Gamma_k: vertex-disjoint families with p_i from v_i to w_{i+k} whose
    rotors add up to k.
    """
    n = N.n
    coeffs = {}
    for s in range(n):
        for fam in disjoint_families(N, s, budget):
            k = sum(e.cross for es, _ in fam for e in es)
            if (k - s) % n:
                continue
            if k_range is not None and k not in k_range:
                continue
            w = ONE
            for es, _ in fam:
                for e in es:
                    w *= e.weight
            sign = -1 if (k * (n - 1)) % 2 else 1
            coeffs[k] = coeffs.get(k, ZERO) + sign * w
    return Series(coeffs)


def coefficient_sign_violations(X: PeriodicBandMatrix, max_size: int = 3):
    """Folded minors whose coefficients break the sign pattern of network
    matrices: the t^m coefficient of a size-k minor times (-1)^{m(k-1)}
    must be >= 0. Returns (rows, cols, m, coefficient) tuples."""
    from itertools import combinations

    from .core_matrix import fold
    from .laurent import series_det

    A = fold(X)
    n = X.n
    bad = []
    for k in range(1, min(max_size, n) + 1):
        for R in combinations(range(n), k):
            for C in combinations(range(n), k):
                m = series_det([[A.entries[r][c] for c in C] for r in R])
                for deg, v in m.coeffs.items():
                    if v * (-1) ** (deg * (k - 1)) < 0:
                        bad.append((tuple(r + 1 for r in R), tuple(c + 1 for c in C), deg, v))
    return bad


# building blocks

def _layers(n, prefix, nlayers):
    """Vertex ids prefix+L+i with height L*n + i - 1 for L in 0..nlayers-1."""
    heights = {}
    for L in range(nlayers):
        for i in range(1, n + 1):
            heights[f"{prefix}{L}_{i}"] = L * n + i - 1
    return heights


def _block(n, edges_spec, nlayers):
    heights = _layers(n, "", nlayers)
    edges = [Edge(f"{L}_{a}", f"{L + 1}_{b}", to_frac(w), c) for L, a, b, w, c in edges_spec]
    # drop interior vertices nobody touches
    used = {e.tail for e in edges} | {e.head for e in edges}
    top = nlayers - 1
    sources = [f"0_{i}" for i in range(1, n + 1)]
    sinks = [f"{top}_{i}" for i in range(1, n + 1)]
    keep = used | set(sources) | set(sinks)
    heights = {v: h for v, h in heights.items() if v in keep}
    return CylNetwork(n, heights, edges, sources, sinks)


def _wire(L, i):
    return (L, i, i, ONE, 0)


def build_block(kind: str, params=None, n: int | None = None) -> CylNetwork:
    """Elementary networks.

    kind: "identity" (n), "e"/"f" ((n, k, a)), "shift" ((n, power)),
    "torus" (values), "whirl" (values), "curl" (values; cyclic).
    Chevalley blocks use three levels: an edge from the middle of one wire
    to the upper middle of the neighbouring wire; the wrap-around edge
    crosses the cut line.
    """
    if kind == "identity":
        return _block(n, [_wire(0, i) for i in range(1, n + 1)], 2)
    if kind in ("e", "f"):
        n, k, a = params
        k = rep(k, n)
        spec = [_wire(0, i) for i in range(1, n + 1)] + [_wire(1, i) for i in range(1, n + 1)] \
            + [_wire(2, i) for i in range(1, n + 1)]
        if kind == "e":
            spec.append((1, k, rep(k + 1, n), a, 1 if k == n else 0))
        else:
            spec.append((1, rep(k + 1, n), k, a, -1 if k == n else 0))
        return _block(n, spec, 4)
    if kind == "shift":
        n, power = params
        net = build_block("identity", n=n)
        step = 1 if power > 0 else -1
        one = _block(n, [(0, i, rep(i + step, n), ONE,
                          (1 if i == n else 0) if step > 0 else (-1 if i == 1 else 0))
                         for i in range(1, n + 1)], 2)
        for _ in range(abs(power)):
            net = concatenate(net, one)
        return net
    if kind == "torus":
        vals = [to_frac(v) for v in params]
        return _block(len(vals), [(0, i, i, vals[i - 1], 0) for i in range(1, len(vals) + 1)], 2)
    if kind == "whirl":
        vals = [to_frac(v) for v in params]
        n = len(vals)
        spec = [_wire(0, i) for i in range(1, n + 1)] + [_wire(2, i) for i in range(1, n + 1)]
        spec += [(1, i, i, ONE, 0) for i in range(1, n + 1)]
        spec += [(1, i, rep(i + 1, n), vals[i - 1], 1 if i == n else 0) for i in range(1, n + 1)]
        return _block(n, spec, 4)
    if kind == "curl":
        return curl_network(params)
    raise NetworkError(f"unknown block kind {kind!r}")


def curl_network(values) -> CylNetwork:
    """Cyclic network of the curl N(b): a loop u_1 -> u_2 -> ... -> u_n -> u_1
    with weights b_i, entered from v_i and left towards w_i."""
    vals = [to_frac(v) for v in values]
    n = len(vals)
    heights = {}
    edges = []
    for i in range(1, n + 1):
        heights[f"v{i}"] = 0
        heights[f"u{i}"] = 1
        heights[f"w{i}"] = 2
        edges.append(Edge(f"v{i}", f"u{i}", ONE, 0))
        edges.append(Edge(f"u{i}", f"w{i}", ONE, 0))
        edges.append(Edge(f"u{i}", f"u{rep(i + 1, n)}", vals[i - 1], 1 if i == n else 0))
    return CylNetwork(n, heights, edges, [f"v{i}" for i in range(1, n + 1)],
                      [f"w{i}" for i in range(1, n + 1)], cyclic=True)


def concatenate(N1: CylNetwork, N2: CylNetwork) -> CylNetwork:
    """N1 below N2, with the sinks of N1 glued to the sources of N2."""
    if N1.n != N2.n:
        raise NetworkError(f"boundary sizes differ: {N1.n} vs {N2.n}")
    if N1.cyclic or N2.cyclic:
        raise NetworkError("cyclic networks cannot be concatenated")
    glue = {s: f"a:{t}" for s, t in zip(N2.sources, N1.sinks)}

    def n1(v):
        return f"a:{v}"

    def n2(v):
        return glue.get(v, f"b:{v}")

    base = max(N1.heights.values()) + 1 - min(N2.heights.values())
    heights = {n1(v): h for v, h in N1.heights.items()}
    for v, h in N2.heights.items():
        if v not in glue:
            heights[n2(v)] = h + base
    edges = [Edge(n1(e.tail), n1(e.head), e.weight, e.cross) for e in N1.edges]
    edges += [Edge(n2(e.tail), n2(e.head), e.weight, e.cross) for e in N2.edges]
    # relabel compactly so ids do not grow with repeated concatenation
    order = sorted(heights, key=lambda v: heights[v])
    rename = {v: f"x{k}" for k, v in enumerate(order)}
    return CylNetwork(N1.n, {rename[v]: heights[v] for v in order},
                      [Edge(rename[e.tail], rename[e.head], e.weight, e.cross) for e in edges],
                      [rename[n1(v)] for v in N1.sources], [rename[n2(v)] for v in N2.sinks])


def network_from_word(word: GeneratorWord) -> CylNetwork:
    """Stack the blocks of a word of e, f, shift, torus and whirl atoms."""
    n = word.n
    net = build_block("identity", n=n)
    for a in word.atoms:
        if isinstance(a, ChevE):
            blk = build_block("e", (n, a.k, a.a))
        elif isinstance(a, ChevF):
            blk = build_block("f", (n, a.k, a.a))
        elif isinstance(a, Shift):
            blk = build_block("shift", (n, a.k))
        elif isinstance(a, Torus):
            blk = build_block("torus", a.values)
        elif isinstance(a, Whirl):
            blk = build_block("whirl", a.values)
        else:
            raise NetworkError(f"{a.kind} atoms have no acyclic network")
        net = concatenate(net, blk)
    return net


def example_network() -> CylNetwork:
    """A 2-periodic network with unit weights whose matrix has rows
    (offsets -2..3) 0 3 3 5 2 1 / 1 1 7 4 2 0 and folded determinant 6 - t."""
    spec = [
        ("a0", "a1", 0), ("a0", "b1", 0), ("c0", "c1", 0), ("c0", "b1", 0),
        ("a1", "d2", -1), ("b1", "b2", 0), ("b1", "c2", 0), ("c1", "c2", 0),
        ("b2", "b3", 0), ("c2", "c3", 0), ("c2", "d3", 0), ("d2", "d3", 0),
        ("b3", "a4", 0), ("c3", "b4", 0), ("d3", "a4", 1), ("d3", "c4", 0),
        ("a4", "b5", 0), ("a4", "d5", -1), ("b4", "b5", 0), ("c4", "d5", 0),
        ("b5", "c6", 0), ("d5", "a6", 1), ("d5", "c6", 0),
    ]
    used = {t for t, _, _ in spec} | {h for _, h, _ in spec}
    heights = {v: int(v[1]) * 4 + "abcd".index(v[0]) for v in used}
    edges = [Edge(t, h, ONE, c) for t, h, c in spec]
    return CylNetwork(2, heights, edges, ["a0", "c0"], ["a6", "c6"])

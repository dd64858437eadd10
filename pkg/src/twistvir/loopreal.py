"""Finite windows of the loop algebra L and its central extension.

Basis labels are plain tuples so they hash fast:

* ``("V", i)``      the Witt element l_i,
* ``("L", b, k)``   eigenvector b of s (residue k mod n) times t^(k/n),
* ``("C", j)``      the j-th central label of an :class:`ExtensionData`.

Degrees are kept scaled by n, so ``("V", i)`` has scaled degree n*i and
``("L", b, k)`` has scaled degree k.  A window N keeps |degree| <= N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .centralext import ExtensionData
from .exactfield import FieldElem, Matrix, SparseEchelon, render_scalar
from .superalgebra import SuperalgebraSpec, sigma_components, transport

__all__ = [
    "OUT_OF_WINDOW",
    "JacobiReport",
    "OracleReport",
    "TruncatedAlgebra",
    "bracket",
    "bracket_labels",
    "cocycle_check",
    "jacobi_check",
    "label_str",
    "oracle_h2",
    "pi_eval",
    "truncate",
    "truncate_centerless",
]


class _OutOfWindow:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OUT_OF_WINDOW"

    def __bool__(self):
        return False


OUT_OF_WINDOW = _OutOfWindow()

# central coefficient in the bracket relative to the cocycle maps; the
# quotient-functional terms enter the extension bracket with a factor 1/2
_BRACKET_SCALE = {-1: mpq(1, 2), 0: mpq(1), 1: mpq(1)}


@dataclass
class TruncatedAlgebra:
    window: int
    n: int
    spec: SuperalgebraSpec  # s written in the sigma-eigenbasis
    residues: tuple
    central: tuple  # (kind, parity, datum in eigenbasis, name) per central label
    labels: tuple
    ext: ExtensionData | None = None
    overrides: dict = dc_field(default_factory=dict)
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def F(self):
        return self.spec.F

    @property
    def noncentral(self):
        return [u for u in self.labels if u[0] != "C"]

    def sdeg(self, u) -> int:
        t = u[0]
        if t == "V":
            return self.n * u[1]
        if t == "L":
            return u[2]
        return 0

    def parity(self, u) -> int:
        t = u[0]
        if t == "L":
            return self.spec.parity[u[1]]
        if t == "C":
            return self.central[u[1]][1]
        return 0

    def in_window(self, sd: int) -> bool:
        return abs(sd) <= self.n * self.window

    def counts(self) -> dict:
        c = {"V": 0, "L": 0, "C": 0}
        for u in self.labels:
            c[u[0]] += 1
        return {"virasoro": c["V"], "loop": c["L"], "central": c["C"]}

    def override(self, u, v, value: dict):
        """Replace [u, v] (and [v, u] by super-skew) with ``value``."""
        s = -1 if (self.parity(u) & self.parity(v)) else 1
        self.overrides[(u, v)] = dict(value)
        self.overrides[(v, u)] = {k: c * (-s) for k, c in value.items()}
        self._cache.clear()


def label_str(T: TruncatedAlgebra | None, u) -> str:
    if u[0] == "V":
        return f"l[{u[1]}]"
    if u[0] == "L":
        n = T.n if T else 1
        a = u[2] if n == 1 else f"{u[2]}/{n}"
        return f"x{u[1] + 1}t^({a})"
    if T is not None:
        return T.central[u[1]][3]
    return f"c{u[1]}"


def _transport_data(ext: ExtensionData, P: Matrix):
    m = ext.spec.dim
    F = ext.spec.F
    out = []
    for j, lab in enumerate(ext.labels):
        if lab.kind is None:
            M = m + 1
            vals = [F.zero] * (M * M)
            vals[m * M + m] = F.one
            out.append((0, 0, Matrix(M, M, tuple(vals)), lab.name))
        elif lab.kind == -1:
            f = lab.datum
            out.append((-1, lab.parity,
                        tuple(sum((f[k] * P[k, b] for k in range(m)), F.zero) for b in range(m)),
                        lab.name))
        elif lab.kind == 0:
            rows = [list(P.row(i)) + [F.zero] for i in range(m)] + [[F.zero] * m + [F.one]]
            Pt = Matrix.from_rows(F, rows, m + 1)
            out.append((0, lab.parity, Pt.transpose() @ lab.datum @ Pt, lab.name))
        else:
            out.append((1, lab.parity, P.transpose() @ lab.datum @ P, lab.name))
    return tuple(out)


def _labels(n, N, residues, ncentral):
    labels = [("V", i) for i in range(-N, N + 1)]
    for k in range(-n * N, n * N + 1):
        for b, r in enumerate(residues):
            if k % n == r:
                labels.append(("L", b, k))
    labels += [("C", j) for j in range(ncentral)]
    return tuple(labels)


def truncate(ext: ExtensionData, N: int) -> TruncatedAlgebra:
    if N < 2:
        raise ValueError("window must be at least 2")
    g, gr = ext.spec, ext.grading
    n = g.sigma_order
    if g.dim:
        P = gr.change
        gt = transport(g, P, g.name)
        central = _transport_data(ext, P)
    else:
        gt = g
        central = _transport_data(ext, Matrix(0, 0, ()))
    return TruncatedAlgebra(N, n, gt, gr.residues, central,
                            _labels(n, N, gr.residues, len(central)), ext)


def truncate_centerless(g: SuperalgebraSpec, N: int) -> TruncatedAlgebra:
    gr = sigma_components(g)
    gt = transport(g, gr.change, g.name) if g.dim else g
    n = g.sigma_order
    return TruncatedAlgebra(N, n, gt, gr.residues, (), _labels(n, N, gr.residues, 0), None)


# --- cocycle maps ------------------------------------------------------------

def _third(F, i):
    return F.rational(mpq(i ** 3 - i, 1))


def pi_eval(T: TruncatedAlgebra, kind: int, datum, u, v) -> FieldElem:
    """Value of the kind-(-1/0/1) cocycle built from ``datum`` on basis labels u, v.

    ``datum`` lives in the eigenbasis of T: a covector (kind -1), a form on
    C*partial + s with partial last (kind 0) or a form on s (kind 1).
    """
    F, n = T.F, T.n
    if u[0] == "C" or v[0] == "C" or T.sdeg(u) + T.sdeg(v) != 0:
        return F.zero
    if u[0] == "L" and v[0] == "V":
        s = -1 if (T.parity(u) & T.parity(v)) else 1
        return pi_eval(T, kind, datum, v, u) * (-s)
    m = T.spec.dim
    if u[0] == "V" and v[0] == "V":
        if kind != 0:
            return F.zero
        i = u[1]
        return datum[m, m] * F.rational(mpq(i ** 3 - i, 12))
    if u[0] == "V":
        i, b = u[1], v[1]
        if kind == -1:
            return datum[b] * F.rational(mpq(i ** 3 - i, 6))
        if kind == 0:
            return datum[m, b] * F.rational(mpq(i * i - i, 1))
        return F.zero
    b, c, a = u[1], v[1], mpq(u[2], n)
    if kind == -1:
        w = T.spec.structure[b][c]
        fx = sum((datum[k] * x for k, x in enumerate(w) if x), F.zero)
        return fx * F.rational((1 - 4 * a * a) / 12)
    if kind == 0:
        w = T.spec.structure[b][c]
        val = datum[b, c] * F.rational(a)
        for k, x in enumerate(w):
            if x:
                val = val + datum[m, k] * x
        return val
    return datum[b, c]


# --- bracket -------------------------------------------------------------------

def _central_terms(T, u, v, out):
    for j, (kind, _, datum, _) in enumerate(T.central):
        c = pi_eval(T, kind, datum, u, v)
        if c:
            out[("C", j)] = c * T.F.rational(_BRACKET_SCALE[kind])


def bracket_labels(T: TruncatedAlgebra, u, v):
    """[u, v] for basis labels as a sparse dict, or OUT_OF_WINDOW."""
    key = (u, v)
    hit = T._cache.get(key)
    if hit is not None:
        return hit
    if key in T.overrides:
        res = T.overrides[key]
        T._cache[key] = res
        return res
    if u[0] == "C" or v[0] == "C":
        res = {}
    else:
        sd = T.sdeg(u) + T.sdeg(v)
        if not T.in_window(sd):
            T._cache[key] = OUT_OF_WINDOW
            return OUT_OF_WINDOW
        res = _raw_bracket(T, u, v, sd)
        if sd == 0 and T.central:
            _central_terms(T, u, v, res)
    T._cache[key] = res
    return res


def _raw_bracket(T, u, v, sd):
    F, n, g = T.F, T.n, T.spec
    out = {}
    if u[0] == "V" and v[0] == "V":
        c = v[1] - u[1]
        if c:
            out[("V", u[1] + v[1])] = F.rational(mpq(c))
        return out
    if u[0] == "L" and v[0] == "V":
        res = _raw_bracket(T, v, u, sd)
        return {k: -x for k, x in res.items()}
    if u[0] == "V":
        i, b, k = u[1], v[1], v[2]
        a = F.rational(mpq(k, n))
        col = g.d_matrix.column(b)
        for c in range(g.dim):
            x = col[c] * i
            if c == b:
                x = x + a
            if x:
                out[("L", c, sd)] = x
        return out
    w = g.structure[u[1]][v[1]]
    for c, x in enumerate(w):
        if x:
            out[("L", c, sd)] = x
    return out


def bracket(T: TruncatedAlgebra, u: dict, v: dict):
    """Bilinear bracket of sparse elements; OUT_OF_WINDOW if any term leaves the window."""
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            r = bracket_labels(T, a, b)
            if r is OUT_OF_WINDOW:
                return OUT_OF_WINDOW
            xy = x * y
            for k, c in r.items():
                nv = out.get(k)
                nv = c * xy if nv is None else nv + c * xy
                if nv:
                    out[k] = nv
                else:
                    del out[k]
    return out


def _combine(T, u, elem, sign, acc):
    """acc += sign * [u, elem] for a basis label u."""
    for c, x in elem.items():
        if c[0] == "C":
            continue
        r = bracket_labels(T, u, c)
        f = x if sign == 1 else -x
        for k, y in r.items():
            nv = acc.get(k)
            nv = y * f if nv is None else nv + y * f
            if nv:
                acc[k] = nv
            else:
                del acc[k]


def _combine_right(T, elem, w, sign, acc):
    """acc += sign * [elem, w]."""
    for c, x in elem.items():
        if c[0] == "C":
            continue
        r = bracket_labels(T, c, w)
        f = x if sign == 1 else -x
        for k, y in r.items():
            nv = acc.get(k)
            nv = y * f if nv is None else nv + y * f
            if nv:
                acc[k] = nv
            else:
                del acc[k]


# --- Jacobi ----------------------------------------------------------------------

@dataclass
class JacobiReport:
    counts: dict
    triples: int
    central_triples: int
    skew_pairs: int
    witnesses: list

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_dict(self, T=None, limit=10):
        return {
            "basis": self.counts,
            "admissible_triples": self.triples,
            "central_triples": self.central_triples,
            "skew_pairs": self.skew_pairs,
            "pass": self.passed,
            "witnesses": [_witness_dict(T, w) for w in self.witnesses[:limit]],
            "witness_count": len(self.witnesses),
        }


def _witness_dict(T, w):
    kind, labs, resid = w
    return {"kind": kind, "labels": [label_str(T, u) for u in labs],
            "residual": {label_str(T, k): render_scalar(x) for k, x in sorted(resid.items())}}


def _admissible(T, du, dv, dw):
    lim = T.n * T.window
    return (abs(du + dv) <= lim and abs(du + dw) <= lim and abs(dv + dw) <= lim
            and abs(du + dv + dw) <= lim)


def jacobi_check(T: TruncatedAlgebra, max_witnesses: int | None = None) -> JacobiReport:
    """Exhaustive super-Jacobi check over ordered admissible triples.

    Brackets against central labels are zero by construction, so triples
    touching them hold trivially; they are counted but not evaluated.
    Super-skew symmetry of every in-window pair is checked as well.
    """
    labels = T.noncentral
    deg = {u: T.sdeg(u) for u in labels}
    par = {u: T.parity(u) for u in labels}
    witnesses = []
    skew_pairs = 0
    for u in labels:
        for v in labels:
            if not T.in_window(deg[u] + deg[v]):
                continue
            skew_pairs += 1
            a, b = bracket_labels(T, u, v), bracket_labels(T, v, u)
            s = -1 if (par[u] & par[v]) else 1
            resid = {}
            for k in set(a) | set(b):
                x = a.get(k, 0) + s * b.get(k, 0) if k in a else b[k] * s
                if x:
                    resid[k] = x
            if resid:
                witnesses.append(("skew", (u, v), resid))
    lim = T.n * T.window
    count = 0
    for u in labels:
        du, pu = deg[u], par[u]
        for v in labels:
            dv = deg[v]
            if abs(du + dv) > lim:
                continue
            pv = par[v]
            uv = bracket_labels(T, u, v)
            s = -1 if (pu & pv) else 1
            for w in labels:
                dw = deg[w]
                if not (abs(du + dw) <= lim and abs(dv + dw) <= lim and abs(du + dv + dw) <= lim):
                    continue
                count += 1
                # [u,[v,w]] - [[u,v],w] - s [v,[u,w]]
                acc = {}
                _combine(T, u, bracket_labels(T, v, w), 1, acc)
                _combine_right(T, uv, w, -1, acc)
                _combine(T, v, bracket_labels(T, u, w), -s, acc)
                if acc:
                    witnesses.append(("jacobi", (u, v, w), acc))
                    if max_witnesses and len(witnesses) >= max_witnesses:
                        return JacobiReport(T.counts(), count, 0, skew_pairs, witnesses)
    nl, nc = len(labels), len(T.labels) - len(labels)
    central_triples = (nl + nc) ** 3 - nl ** 3 if nc else 0
    return JacobiReport(T.counts(), count, central_triples, skew_pairs, witnesses)


def cocycle_check(T: TruncatedAlgebra, alpha, labels=None) -> list:
    """Admissible triples of noncentral labels where ``alpha`` (a function of two
    labels) fails the cocycle identity."""
    labels = labels or T.noncentral
    bad = []
    F = T.F

    def ev(u, elem):
        return sum((x * alpha(u, c) for c, x in elem.items() if c[0] != "C"), F.zero)

    def evr(elem, w):
        return sum((x * alpha(c, w) for c, x in elem.items() if c[0] != "C"), F.zero)

    for u, v, w in itertools.product(labels, repeat=3):
        if not _admissible(T, T.sdeg(u), T.sdeg(v), T.sdeg(w)):
            continue
        s = -1 if (T.parity(u) & T.parity(v)) else 1
        val = (ev(u, bracket_labels(T, v, w)) - evr(bracket_labels(T, u, v), w)
               - ev(v, bracket_labels(T, u, w)) * s)
        if val:
            bad.append((u, v, w))
    return bad


# --- brute-force oracle -----------------------------------------------------------

@dataclass
class OracleReport:
    window: int
    inner: int
    unknowns: int
    equations: int
    raw_dim: int
    projected_dim: int

    def to_dict(self):
        return {"window": self.window, "inner": self.inner, "unknowns": self.unknowns,
                "equations": self.equations, "raw_dim": self.raw_dim,
                "projected_dim": self.projected_dim}


def oracle_h2(g: SuperalgebraSpec, N: int = 6, inner: int = 3) -> OracleReport:
    """Dimension of normalised 2-cocycles on the centerless window, seen on the inner window.

    Unknowns are alpha(p, q) for window label pairs, stored once per
    unordered pair (super-skew gives the other order; an even label paired
    with itself is forced to zero).  Rows are the cocycle identity on sorted
    admissible triples, which is enough because for a super-skew alpha the
    identity is super-antisymmetric in its three arguments, plus the
    normalisation alpha(l_1, L_-1) = 0 and alpha(l_0, L_a) = 0 for a != 0.
    """
    if inner > N - 2:
        raise ValueError("inner window must be at most N - 2")
    T = truncate_centerless(g, N)
    F = T.F
    labels = list(T.labels)
    pos = {u: k for k, u in enumerate(labels)}
    deg = [T.sdeg(u) for u in labels]
    par = [T.parity(u) for u in labels]
    var = {}
    for a in range(len(labels)):
        for b in range(a, len(labels)):
            if a == b and not par[a]:
                continue
            var[(a, b)] = len(var)

    def coord(p, q):
        """(var index, sign) with alpha(p, q) = sign * unknown, or None if forced zero."""
        if p <= q:
            k = var.get((p, q))
            return None if k is None else (k, 1)
        k = var.get((q, p))
        if k is None:
            return None
        return k, (1 if (par[p] & par[q]) else -1)

    def add_term(row, p, elem, scale, left=True):
        for c, x in elem.items():
            cq = coord(p, pos[c]) if left else coord(pos[c], p)
            if cq is None:
                continue
            k, s = cq
            val = x * scale if s == 1 else -(x * scale)
            nv = row.get(k)
            nv = val if nv is None else nv + val
            if nv:
                row[k] = nv
            else:
                del row[k]

    ech = SparseEchelon(F)
    one = F.one
    lim = T.n * N
    neqs = 0
    L = len(labels)
    for a in range(L):
        u = labels[a]
        for b in range(a, L):
            if abs(deg[a] + deg[b]) > lim:
                continue
            v = labels[b]
            uv = bracket_labels(T, u, v)
            s = -1 if (par[a] & par[b]) else 1
            for c in range(b, L):
                if not _admissible(T, deg[a], deg[b], deg[c]):
                    continue
                w = labels[c]
                row = {}
                # alpha(u,[v,w]) - alpha([u,v],w) - s alpha(v,[u,w])
                add_term(row, a, bracket_labels(T, v, w), one)
                add_term(row, c, uv, -one, left=False)
                add_term(row, b, bracket_labels(T, u, w), -one if s == 1 else one)
                neqs += 1
                if row:
                    ech.add(row)
    n = T.n
    l1, l0 = pos[("V", 1)], pos[("V", 0)]
    for q in range(L):
        if deg[q] == -n:
            cq = coord(l1, q)
            if cq:
                ech.add({cq[0]: one})
                neqs += 1
        if deg[q] != 0:
            cq = coord(l0, q)
            if cq:
                ech.add({cq[0]: one})
                neqs += 1
    base_rank = ech.rank
    nvars = len(var)
    lim_in = n * inner
    for (p, q), k in var.items():
        if abs(deg[p]) <= lim_in and abs(deg[q]) <= lim_in:
            ech.add({k: one})
    return OracleReport(N, inner, nvars, neqs, nvars - base_rank, ech.rank - base_rank)

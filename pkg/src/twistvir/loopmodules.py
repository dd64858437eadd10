"""Modules over gdd = C*partial + s and the loop modules they induce.

For a gdd-module V and a scalar lam the loop module Gamma(V, lam) is
V (x) C[t^(1/n), t^(-1/n)] with

    l_i . (v t^b)   = (lam + b + i*partial) v t^(b+i)
    x t^a . (v t^b) = (x v) t^(a+b)
    central . anything = 0

Module vectors are pairs (q, k) = (basis vector q of V) t^(k/n).  When V is
Z_n-graded, F(V, lam) keeps the pairs with k = grading(q) mod n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .centralext import build_extension
from .exactfield import Matrix, SparseEchelon, nullspace, rank, render_scalar
from .loopreal import OUT_OF_WINDOW, TruncatedAlgebra, bracket_labels, label_str, truncate
from .superalgebra import SchemaError, SuperalgebraSpec, _scalar, sigma_components

__all__ = [
    "GddModule",
    "LoopWindow",
    "ModuleError",
    "Reducible",
    "Simple",
    "Unknown",
    "build_gdd_module",
    "f_components",
    "gamma_action",
    "graded_simplicity",
    "load_module",
    "loop_window",
    "module_axiom_check",
    "omega_check",
    "weight_multiplicities",
]


class ModuleError(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems[:5]))


@dataclass(frozen=True)
class GddModule:
    g: SuperalgebraSpec
    dim: int
    parity: tuple
    partial: Matrix
    actions: tuple  # one matrix per basis vector of s (input basis)
    grading: tuple | None = None

    @property
    def F(self):
        return self.g.F

    def matrices(self):
        return [self.partial, *self.actions]


def _mat(raw, r, n0, where):
    if not isinstance(raw, list) or len(raw) != r or any(
            not isinstance(x, list) or len(x) != r for x in raw):
        raise SchemaError(f"{where}: expected {r}x{r} array")
    return Matrix(r, r, tuple(_scalar(x, n0, where) for row in raw for x in row))


def _comb(F, mats, coeffs, r):
    out = Matrix.zeros(F, r, r)
    for c, M in zip(coeffs, mats):
        if c:
            out = out + M.scale(c)
    return out


def _supercomm(A, B, pa, pb):
    AB, BA = A @ B, B @ A
    return AB + BA if (pa & pb) else AB - BA


def _parity_ok(M, par, shift):
    return all(not M[p, q] or par[p] == (par[q] + shift) % 2
               for p in range(M.rows) for q in range(M.cols))


def build_gdd_module(raw: dict, g: SuperalgebraSpec) -> GddModule:
    """Parse and verify a module document against the algebra ``g``."""
    n0, m = g.field_order, g.dim
    try:
        r = int(raw["dim"])
        parity = tuple(int(p) for p in raw.get("parity", [0] * r))
        partial = _mat(raw["partial"], r, n0, "partial")
        acts = raw.get("action", [])
        grading = raw.get("grading")
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"module document: {exc}") from exc
    if len(parity) != r or any(p not in (0, 1) for p in parity):
        raise SchemaError("module parity must list 0/1 per basis vector")
    if len(acts) != m:
        raise SchemaError(f"expected {m} action matrices, got {len(acts)}")
    actions = tuple(_mat(a, r, n0, f"action {k + 1}") for k, a in enumerate(acts))
    if grading is not None:
        if len(grading) != r:
            raise SchemaError("grading must give one residue per basis vector")
        grading = tuple(int(x) % g.sigma_order for x in grading)
    V = GddModule(g, r, parity, partial, actions, grading)
    problems = module_relation_violations(V)
    if problems:
        raise ModuleError(problems)
    return V


def load_module(path, g: SuperalgebraSpec) -> GddModule:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    return build_gdd_module(raw, g)


def module_relation_violations(V: GddModule) -> list[str]:
    g, F, r, par = V.g, V.F, V.dim, V.parity
    m = g.dim
    out = []
    if not _parity_ok(V.partial, par, 0):
        out.append("partial does not preserve parity")
    for j, X in enumerate(V.actions):
        if not _parity_ok(X, par, g.parity[j]):
            out.append(f"action of e{j + 1} has the wrong parity")
    for j in range(m):
        lhs = V.partial @ V.actions[j] - V.actions[j] @ V.partial
        rhs = _comb(F, V.actions, g.d_matrix.column(j), r)
        if lhs != rhs:
            out.append(f"[partial, e{j + 1}] relation fails (pair partial, e{j + 1})")
    for i in range(m):
        for j in range(i, m):
            lhs = _supercomm(V.actions[i], V.actions[j], g.parity[i], g.parity[j])
            rhs = _comb(F, V.actions, g.structure[i][j], r)
            if lhs != rhs:
                out.append(f"[e{i + 1}, e{j + 1}] relation fails (pair e{i + 1}, e{j + 1})")
    if V.grading is not None and m:
        gr = sigma_components(g)
        for b, res in enumerate(gr.residues):
            X = _comb(F, V.actions, gr.change.column(b), r)
            for p in range(r):
                for q in range(r):
                    if X[p, q] and V.grading[p] != (V.grading[q] + res) % g.sigma_order:
                        out.append(f"eigenvector {b + 1} (residue {res}) breaks the grading "
                                   f"at ({p + 1},{q + 1})")
        for p in range(r):
            for q in range(r):
                if V.partial[p, q] and V.grading[p] != V.grading[q]:
                    out.append(f"partial breaks the grading at ({p + 1},{q + 1})")
    return out


# --- loop windows -------------------------------------------------------------

@dataclass
class LoopWindow:
    V: GddModule
    lam: object
    window: int
    mode: str  # "gamma" or "f"
    T: TruncatedAlgebra
    eig_actions: tuple  # action of each eigenbasis vector of s

    @property
    def n(self):
        return self.T.n

    @property
    def F(self):
        return self.V.F

    def vectors(self):
        n, lim = self.n, self.n * self.window
        out = []
        for k in range(-lim, lim + 1):
            for q in range(self.V.dim):
                if self.mode == "f" and (k - self.V.grading[q]) % n:
                    continue
                out.append((q, k))
        return out

    def parity(self, vec):
        return self.V.parity[vec[0]]


def loop_window(V: GddModule, lam, M: int, mode: str = "gamma", T=None) -> LoopWindow:
    if mode not in ("gamma", "f"):
        raise ValueError("mode must be gamma or f")
    if mode == "f" and V.grading is None:
        raise ValueError("F-mode needs a graded module")
    F = V.F
    lam = F(lam)
    if T is None:
        T = truncate(build_extension(V.g), max(M, 2))
    eig = []
    if V.g.dim:
        P = sigma_components(V.g).change
        for b in range(V.g.dim):
            eig.append(_comb(F, V.actions, P.column(b), V.dim))
    return LoopWindow(V, lam, M, mode, T, tuple(eig))


def _add(acc, key, val):
    nv = acc.get(key)
    nv = val if nv is None else nv + val
    if nv:
        acc[key] = nv
    else:
        acc.pop(key, None)


def gamma_action(L: LoopWindow, x, w):
    """Action of algebra basis label ``x`` on a module element (dict or single pair)."""
    if isinstance(w, tuple):
        w = {w: L.F.one}
    if x[0] == "C":
        return {}
    n, lim = L.n, L.n * L.window
    shift = n * x[1] if x[0] == "V" else x[2]
    out = {}
    for (q, k), c in w.items():
        k2 = k + shift
        if abs(k2) > lim:
            return OUT_OF_WINDOW
        if x[0] == "V":
            i = x[1]
            base = L.lam + L.F.rational(mpq(k, n))
            col = L.V.partial.column(q)
            for p in range(L.V.dim):
                coef = col[p] * i
                if p == q:
                    coef = coef + base
                if coef:
                    _add(out, (p, k2), coef * c)
        else:
            col = L.eig_actions[x[1]].column(q)
            for p in range(L.V.dim):
                if col[p]:
                    _add(out, (p, k2), col[p] * c)
    return out


def _act_elem(L, elem, w):
    """Action of a sparse algebra element on a module element."""
    out = {}
    for x, c in elem.items():
        r = gamma_action(L, x, w)
        if r is OUT_OF_WINDOW:
            return OUT_OF_WINDOW
        for key, val in r.items():
            _add(out, key, val * c)
    return out


@dataclass
class CheckReport:
    checked: int
    witnesses: list

    @property
    def passed(self):
        return not self.witnesses


def _fmt_vec(L, elem):
    return {f"v{q + 1}t^({k}/{L.n})" if L.n > 1 else f"v{q + 1}t^({k})": render_scalar(c)
            for (q, k), c in sorted(elem.items())}


def module_axiom_check(L: LoopWindow) -> CheckReport:
    """[u1,u2].w = u1.(u2.w) - (-1)^{|u1||u2|} u2.(u1.w) on every in-window configuration.

    Central terms of [u1, u2] are kept on the left side and act by zero, so a
    nonzero central coefficient cannot hide a mismatch.
    """
    T = L.T
    labels = [u for u in T.labels if T.in_window(T.sdeg(u)) and abs(T.sdeg(u)) <= L.n * L.window]
    vecs = L.vectors()
    lim = L.n * L.window
    wit, count = [], 0
    for u1 in labels:
        d1 = T.sdeg(u1)
        for u2 in labels:
            d2 = T.sdeg(u2)
            if abs(d1 + d2) > lim:
                continue
            br = bracket_labels(T, u1, u2)
            if br is OUT_OF_WINDOW:
                continue
            s = -1 if (T.parity(u1) & T.parity(u2)) else 1
            for w in vecs:
                k = w[1]
                if abs(k + d1) > lim or abs(k + d2) > lim or abs(k + d1 + d2) > lim:
                    continue
                count += 1
                lhs = _act_elem(L, br, w)
                a = gamma_action(L, u1, gamma_action(L, u2, w))
                b = gamma_action(L, u2, gamma_action(L, u1, w))
                for key, val in a.items():
                    _add(lhs, key, -val)
                for key, val in b.items():
                    _add(lhs, key, val * s)
                if lhs:
                    wit.append(((u1, u2, w), lhs))
    return CheckReport(count, wit)


def central_annihilation(L: LoopWindow) -> bool:
    return all(gamma_action(L, c, w) == {} for c in L.T.labels if c[0] == "C"
               for w in L.vectors())


def weight_multiplicities(L: LoopWindow, vectors=None) -> dict:
    """Multiplicity of each l_0-weight lam + k/n among the window vectors."""
    out = {}
    for q, k in vectors or L.vectors():
        out[k] = out.get(k, 0) + 1
    return out


@dataclass
class Component:
    index: int
    vectors: list
    closed: bool
    multiplicities: dict


def f_components(L: LoopWindow) -> list[Component]:
    V = L.V
    if V.grading is None:
        raise ValueError("f_components needs a graded module")
    n = L.n
    allv = [(q, k) for k in range(-n * L.window, n * L.window + 1) for q in range(V.dim)]
    comps = []
    for i in range(n):
        vecs = [(q, k) for (q, k) in allv if (k - V.grading[q] - i) % n == 0]
        members = set(vecs)
        closed = True
        for x in L.T.labels:
            for w in vecs:
                r = gamma_action(L, x, w)
                if r is OUT_OF_WINDOW:
                    continue
                if any(key not in members for key in r):
                    closed = False
                    break
            if not closed:
                break
        comps.append(Component(i, vecs, closed, weight_multiplicities(L, vecs)))
    covered = sorted(v for c in comps for v in c.vectors)
    assert covered == sorted(allv), "components must partition the window"
    return comps


# --- simplicity -------------------------------------------------------------------

@dataclass(frozen=True)
class Simple:
    algebra_dim: int


@dataclass(frozen=True)
class Reducible:
    witness: tuple  # basis of an invariant subspace (coordinate vectors)


@dataclass(frozen=True)
class Unknown:
    algebra_dim: int


def _generators(V: GddModule, graded: bool):
    F, r = V.F, V.dim
    gens = [V.partial, *V.actions]
    for p in (0, 1):
        proj = [F.one if (a == b and V.parity[a] == p) else F.zero
                for a in range(r) for b in range(r)]
        gens.append(Matrix(r, r, tuple(proj)))
    if graded and V.grading is not None:
        for res in sorted(set(V.grading)):
            proj = [F.one if (a == b and V.grading[a] == res) else F.zero
                    for a in range(r) for b in range(r)]
            gens.append(Matrix(r, r, tuple(proj)))
    return [G for G in gens if not G.is_zero()]


def _algebra_basis(F, gens, r):
    ech = SparseEchelon(F)
    basis = []

    def push(M):
        row = {k: x for k, x in enumerate(M.entries) if x}
        if ech.add(row):
            basis.append(M)
            return True
        return False

    push(Matrix.identity(F, r))
    frontier = list(basis)
    while frontier and len(basis) < r * r:
        nxt = []
        for A in frontier:
            for G in gens:
                P = G @ A
                if push(P):
                    nxt.append(P)
        frontier = nxt
    return basis


def _span(F, vectors, r):
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    M = Matrix.from_rows(F, rows, r)
    # row space basis via the null space of the null space
    ns = nullspace(M)
    if not ns:
        return [[F.one if a == b else F.zero for b in range(r)] for a in range(r)]
    return nullspace(Matrix.from_rows(F, ns, r))


def _invariant(F, gens, W, r) -> bool:
    base = rank(Matrix.from_rows(F, W, r))
    for G in gens:
        ext = W + [G.apply(w) for w in W]
        if rank(Matrix.from_rows(F, ext, r)) != base:
            return False
    return True


def _orbit(F, alg, v, r):
    return _span(F, [A.apply(v) for A in alg], r)


def graded_simplicity(V: GddModule, graded: bool = True):
    """Burnside test, with an explicit invariant subspace when one is found."""
    F, r = V.F, V.dim
    gens = _generators(V, graded)
    alg = _algebra_basis(F, gens, r)
    if len(alg) == r * r:
        return Simple(len(alg))
    candidates = []
    for q in range(r):
        candidates.append([F.one if a == q else F.zero for a in range(r)])
    for A in alg:
        candidates += nullspace(A)
    for v in candidates:
        W = _orbit(F, alg, v, r)
        if 0 < len(W) < r and _invariant(F, gens, W, r):
            return Reducible(tuple(tuple(w) for w in W))
    # dual side: a proper invariant subspace of the transposed action gives
    # its annihilator as an invariant subspace of V
    tgens = [G.transpose() for G in gens]
    talg = [A.transpose() for A in alg]
    tcand = [[F.one if a == q else F.zero for a in range(r)] for q in range(r)]
    for A in talg:
        tcand += nullspace(A)
    for v in tcand:
        U = _orbit(F, talg, v, r)
        if 0 < len(U) < r and _invariant(F, tgens, U, r):
            W = nullspace(Matrix.from_rows(F, U, r))
            if 0 < len(W) < r and _invariant(F, gens, W, r):
                return Reducible(tuple(tuple(w) for w in W))
    return Unknown(len(alg))


def verify_witness(V: GddModule, W, graded: bool = True) -> bool:
    F, r = V.F, V.dim
    W = [list(w) for w in W]
    k = rank(Matrix.from_rows(F, W, r)) if W else 0
    return 0 < k < r and _invariant(F, _generators(V, graded), W, r)


# --- differentiators ------------------------------------------------------------

def omega_check(L: LoopWindow, m: int, mode: str = "vir") -> CheckReport:
    """Evaluate the order-m differentiators on every fully in-window configuration.

    vir:   sum_i (-1)^i C(m,i) l_{k-i} l_{s+i} . w
    mixed: sum_i (-1)^i C(m,i) x(a-i) l_{p+i} . w   for eigenvectors x of s
    """
    if mode not in ("vir", "mixed"):
        raise ValueError("mode must be vir or mixed")
    M, n = L.window, L.n
    lim = n * M
    coeffs = [(-1) ** i * comb(m, i) for i in range(m + 1)]
    wit, count = [], 0
    vecs = L.vectors()
    if mode == "vir":
        params = [(("V", k), ("V", s)) for k in range(-M, M + 1) for s in range(-M, M + 1)]
    else:
        params = []
        for b, res in enumerate(L.T.residues):
            for a in range(-lim, lim + 1):
                if (a - res) % n == 0:
                    for p in range(-M, M + 1):
                        params.append((("L", b, a), ("V", p)))
    for left, right in params:
        seq = []
        for i in range(m + 1):
            if left[0] == "V":
                l1 = ("V", left[1] - i)
            else:
                l1 = ("L", left[1], left[2] - n * i)
            l2 = ("V", right[1] + i)
            seq.append((l1, l2))
        if any(abs(L.T.sdeg(a)) > lim or abs(L.T.sdeg(b)) > lim for a, b in seq):
            continue
        for w in vecs:
            acc, ok = {}, True
            for c, (a, b) in zip(coeffs, seq):
                inner = gamma_action(L, b, w)
                if inner is OUT_OF_WINDOW:
                    ok = False
                    break
                outer = gamma_action(L, a, inner)
                if outer is OUT_OF_WINDOW:
                    ok = False
                    break
                for key, val in outer.items():
                    _add(acc, key, val * c)
            if not ok:
                continue
            count += 1
            if acc:
                wit.append(((left, right, w), acc))
    return CheckReport(count, wit)


def describe_witness(L: LoopWindow, wit) -> str:
    (a, b, w), resid = wit
    parts = [label_str(L.T, a) if isinstance(a, tuple) and isinstance(a[0], str) else str(a),
             label_str(L.T, b) if isinstance(b, tuple) and isinstance(b[0], str) else str(b)]
    vec = f"v{w[0] + 1}t^({w[1]}/{L.n})" if L.n > 1 else f"v{w[0] + 1}t^({w[1]})"
    res = ", ".join(f"{k}: {v}" for k, v in _fmt_vec(L, resid).items())
    return f"({parts[0]}, {parts[1]}) on {vec}: residual {{{res}}}"

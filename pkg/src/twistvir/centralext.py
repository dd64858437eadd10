"""Second cohomology of L(s, d, sigma) assembled from finite data on s.

H^2 splits into three pieces computed here as explicit bases:

* ``quotient_functionals``: sigma-fixed functionals on
  s / ((d+1)s + [(d+1/2)s, s] + [s, [s, s]]),
* ``invariant_forms``: sigma-invariant supersymmetric invariant forms on
  gdd = C*partial + s,
* ``invariant_cocycles``: 2-cocycles alpha on s with d.alpha = alpha and
  sigma.alpha = alpha, where (d.alpha)(x, y) = alpha(dx, y) + alpha(x, dy).

Each piece is split by the parity of the target (even/odd central element).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from gmpy2 import mpq

from .exactfield import Matrix, render_scalar, solve_homogeneous
from .superalgebra import GddAlgebra, SigmaGrading, SuperalgebraSpec, build_gdd, sigma_components

__all__ = [
    "CentralLabel",
    "CocycleBasis",
    "ExtensionData",
    "H2Table",
    "InvFormBasis",
    "QuotientFunctionals",
    "build_extension",
    "coboundary_fixed_dim",
    "h2_summary",
    "invariant_cocycles",
    "invariant_forms",
    "quotient_functionals",
]

PARITIES = (0, 1)


@dataclass(frozen=True)
class CocycleBasis:
    target_parity: int
    vectors: tuple  # m x m Matrix per basis element


@dataclass(frozen=True)
class InvFormBasis:
    target_parity: int
    vectors: tuple  # (m+1) x (m+1) forms with B(partial, partial) = 0
    virasoro_form: Matrix | None  # B(partial, partial) = 1, rest 0; even part only


@dataclass(frozen=True)
class QuotientFunctionals:
    target_parity: int
    vectors: tuple  # covectors of length m


def _sign(p, q):
    return -1 if (p & q) else 1


def _pair(u, v, m):
    """Sparse coefficients of alpha(u, v) in the unknowns alpha[k*m + l]."""
    out = {}
    for k, a in enumerate(u):
        if a:
            for l, b in enumerate(v):
                if b:
                    key = k * m + l
                    out[key] = out.get(key, 0) + a * b
    return out


def _add(acc, terms, s=1):
    for k, v in terms.items():
        nv = acc.get(k, 0) + (v if s == 1 else v * s)
        acc[k] = nv


def _as_matrix(g_or_F, vec, m):
    return Matrix(m, m, tuple(vec))


def _form_equations(spec: SuperalgebraSpec, target: int, symmetric: bool):
    """Symmetry, parity and sigma-invariance rows shared by both form systems."""
    m, par, S, F = spec.dim, spec.parity, spec.sigma_matrix, spec.F
    rows = []
    for i in range(m):
        for j in range(i, m):
            s = _sign(par[i], par[j])
            # skew: a_ij + s a_ji = 0 ; symmetric: a_ij - s a_ji = 0
            c = s if not symmetric else -s
            if i == j:
                if F.one + c:
                    rows.append({i * m + i: F.one + c})
            else:
                rows.append({i * m + j: F.one, j * m + i: F(c)})
    for i in range(m):
        for j in range(m):
            if (par[i] + par[j]) % 2 != target:
                rows.append({i * m + j: F.one})
    for i in range(m):
        for j in range(m):
            eq = _pair(S.column(i), S.column(j), m)
            _add(eq, {i * m + j: F.one}, -1)
            rows.append(eq)
    return rows


def invariant_cocycles(g: SuperalgebraSpec) -> dict[int, CocycleBasis]:
    m, par, c, D, F = g.dim, g.parity, g.structure, g.d_matrix, g.F
    cocycle = []
    for i in range(m):
        ei = g.basis_vector(i)
        for j in range(m):
            ej = g.basis_vector(j)
            s = _sign(par[i], par[j])
            for k in range(m):
                ek = g.basis_vector(k)
                eq = _pair(ei, c[j][k], m)
                _add(eq, _pair(c[i][j], ek, m), -1)
                _add(eq, _pair(ej, c[i][k], m), -s)
                cocycle.append(eq)
    d_fixed = []
    for i in range(m):
        for j in range(m):
            eq = _pair(D.column(i), g.basis_vector(j), m)
            _add(eq, _pair(g.basis_vector(i), D.column(j), m))
            _add(eq, {i * m + j: F.one}, -1)
            d_fixed.append(eq)
    out = {}
    for t in PARITIES:
        rows = _form_equations(g, t, symmetric=False) + cocycle + d_fixed
        basis = solve_homogeneous(F, rows, m * m)
        out[t] = CocycleBasis(t, tuple(_as_matrix(F, v, m) for v in basis))
    return out


def coboundary_fixed_dim(g: SuperalgebraSpec) -> int:
    """dim of {(x,y) -> f([x,y])} intersected with the (d, sigma)-fixed forms."""
    m, c, D, S, F = g.dim, g.structure, g.d_matrix, g.sigma_matrix, g.F

    def beta(u, v):
        # coefficients over f_k of f([u, v])
        w = g.bracket(u, v)
        return {k: x for k, x in enumerate(w) if x}

    rows = []
    for i in range(m):
        for j in range(m):
            ei, ej = g.basis_vector(i), g.basis_vector(j)
            eq = beta(D.column(i), ej)
            _add(eq, beta(ei, D.column(j)))
            _add(eq, beta(ei, ej), -1)
            rows.append(eq)
            eq = beta(S.column(i), S.column(j))
            _add(eq, beta(ei, ej), -1)
            rows.append(eq)
    sols = solve_homogeneous(F, rows, m)
    forms = []
    for f in sols:
        forms.append([sum((c[i][j][k] * f[k] for k in range(m)), F.zero)
                      for i in range(m) for j in range(m)])
    from .exactfield import rank
    if not forms:
        return 0
    return rank(Matrix.from_rows(F, forms, m * m))


def invariant_forms(gdd: GddAlgebra) -> dict[int, InvFormBasis]:
    spec = gdd.spec
    M, c, F = spec.dim, spec.structure, spec.F
    p = gdd.partial_index
    inv = []
    for i in range(M):
        ei = spec.basis_vector(i)
        for j in range(M):
            for k in range(M):
                ek = spec.basis_vector(k)
                eq = _pair(c[i][j], ek, M)
                _add(eq, _pair(ei, c[j][k], M), -1)
                inv.append(eq)
    out = {}
    for t in PARITIES:
        rows = _form_equations(spec, t, symmetric=True) + inv
        vir = None
        if t == 0:
            vir_vec = [F.zero] * (M * M)
            vir_vec[p * M + p] = F.one
            vir = Matrix(M, M, tuple(vir_vec))
            # the pure-partial form always satisfies every equation
            for eq in rows:
                assert not eq.get(p * M + p, 0), "pure Virasoro form must be invariant"
        basis = solve_homogeneous(F, rows + [{p * M + p: F.one}], M * M)
        out[t] = InvFormBasis(t, tuple(Matrix(M, M, tuple(v)) for v in basis), vir)
    return out


def _s_spanning_set(g: SuperalgebraSpec):
    m, F, D = g.dim, g.F, g.d_matrix
    half = F(mpq(1, 2))
    span = []
    for j in range(m):
        span.append([x + (F.one if k == j else F.zero) for k, x in enumerate(D.column(j))])
    shifted = [[x + (half if k == i else F.zero) for k, x in enumerate(D.column(i))]
               for i in range(m)]
    for i in range(m):
        for j in range(m):
            span.append(g.bracket(shifted[i], g.basis_vector(j)))
    for i in range(m):
        for j in range(m):
            inner = g.structure[j]
            for k in range(m):
                span.append(g.bracket(g.basis_vector(i), inner[k]))
    return span


def quotient_functionals(g: SuperalgebraSpec) -> dict[int, QuotientFunctionals]:
    m, F, S, par = g.dim, g.F, g.sigma_matrix, g.parity
    base = []
    for s in _s_spanning_set(g):
        eq = {k: x for k, x in enumerate(s) if x}
        if eq:
            base.append(eq)
    for j in range(m):
        eq = {k: x for k, x in enumerate(S.column(j)) if x}
        eq[j] = eq.get(j, F.zero) - F.one
        base.append(eq)
    out = {}
    for t in PARITIES:
        rows = base + [{k: F.one} for k in range(m) if par[k] != t]
        basis = solve_homogeneous(F, rows, m)
        out[t] = QuotientFunctionals(t, tuple(tuple(v) for v in basis))
    return out


@dataclass(frozen=True)
class H2Table:
    name: str
    n_minus1: tuple  # (even, odd)
    n_zero: tuple
    n_one: tuple

    @property
    def total(self) -> int:
        return 1 + sum(self.n_minus1) + sum(self.n_zero) + sum(self.n_one)

    def rows(self):
        out = [("virasoro", "even", 1)]
        for label, vals in (("quotient(-1)", self.n_minus1), ("invariant-forms(0)", self.n_zero),
                            ("cocycles(1)", self.n_one)):
            for t, v in zip(("even", "odd"), vals):
                out.append((label, t, v))
        return out

    def to_dict(self):
        return {
            "name": self.name,
            "n_minus1": {"even": self.n_minus1[0], "odd": self.n_minus1[1]},
            "n_zero": {"even": self.n_zero[0], "odd": self.n_zero[1]},
            "n_one": {"even": self.n_one[0], "odd": self.n_one[1]},
            "total": self.total,
        }

    def to_text(self):
        lines = [f"H2 summary for {self.name or '<unnamed>'}",
                 f"{'summand':<20}{'parity':<8}dim"]
        for s, p, v in self.rows():
            lines.append(f"{s:<20}{p:<8}{v}")
        lines.append(f"{'total':<28}{self.total}")
        return "\n".join(lines)


def h2_summary(g: SuperalgebraSpec) -> H2Table:
    q = quotient_functionals(g)
    f = invariant_forms(build_gdd(g))
    a = invariant_cocycles(g)
    return H2Table(
        g.name,
        tuple(len(q[t].vectors) for t in PARITIES),
        tuple(len(f[t].vectors) for t in PARITIES),
        tuple(len(a[t].vectors) for t in PARITIES),
    )


@dataclass(frozen=True)
class CentralLabel:
    name: str
    kind: int | None  # -1, 0, 1, or None for z
    parity: int
    datum: object  # covector, (m+1)x(m+1) form, or m x m form; None for z


@dataclass(frozen=True)
class ExtensionData:
    spec: SuperalgebraSpec
    grading: SigmaGrading
    quotient: dict
    forms: dict
    cocycles: dict
    labels: tuple

    @property
    def table(self) -> H2Table:
        return H2Table(self.spec.name,
                       tuple(len(self.quotient[t].vectors) for t in PARITIES),
                       tuple(len(self.forms[t].vectors) for t in PARITIES),
                       tuple(len(self.cocycles[t].vectors) for t in PARITIES))

    @property
    def virasoro_form(self) -> Matrix:
        return self.forms[0].virasoro_form

    def to_dict(self):
        m = self.spec.dim

        def name(k):
            return "partial" if k == m else str(k + 1)

        labels = []
        for lab in self.labels:
            entry = {"name": lab.name, "kind": lab.kind, "parity": lab.parity}
            if lab.kind == -1:
                entry["values"] = {name(k): render_scalar(x) for k, x in enumerate(lab.datum) if x}
            elif lab.kind in (0, 1):
                M = lab.datum
                entry["values"] = {f"{name(i)},{name(j)}": render_scalar(M[i, j])
                                   for i in range(M.rows) for j in range(M.cols) if M[i, j]}
            labels.append(entry)
        return {"name": self.spec.name, "dimensions": self.table.to_dict(), "central": labels}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def build_extension(g: SuperalgebraSpec) -> ExtensionData:
    q = quotient_functionals(g)
    f = invariant_forms(build_gdd(g))
    a = invariant_cocycles(g)
    labels = [CentralLabel("z", None, 0, None)]
    for kind, data in ((-1, q), (0, f), (1, a)):
        for t in PARITIES:
            for idx, vec in enumerate(data[t].vectors, start=1):
                labels.append(CentralLabel(f"z[{kind},{idx},{t}]", kind, t, vec))
    return ExtensionData(g, sigma_components(g), q, f, a, tuple(labels))

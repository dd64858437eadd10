"""Finite-dimensional Lie superalgebras with an even derivation d and a
finite-order automorphism sigma commuting with d.

Conventions used throughout the package:

* basis vectors are indexed from 0 internally and from 1 in files and
  reports;
* a linear map is stored by columns, ``d(e_j) = sum_i D[i, j] e_i``;
* ``structure[i][j]`` is the coordinate vector of ``[e_i, e_j]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .exactfield import (
    CycloField, FieldElem, Matrix, ScalarSyntaxError, field, fixed_space, parse_scalar, rank,
    render_scalar,
)

__all__ = [
    "GddAlgebra",
    "SigmaGrading",
    "SuperalgebraSpec",
    "ValidationError",
    "Violation",
    "algebra_to_raw",
    "build_algebra",
    "build_gdd",
    "load_algebra",
    "parse_algebra",
    "sigma_components",
    "transport",
    "validate_automorphism",
    "validate_derivation",
    "validate_structure",
]


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        w = ",".join(str(x) for x in self.witness)
        return f"{self.kind} witness=({w}) {self.detail}".rstrip()


class ValidationError(Exception):
    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(head + more)


class SchemaError(ValueError):
    """Malformed input document (bad shape, index out of range, ...)."""


@dataclass(frozen=True)
class SuperalgebraSpec:
    name: str
    field_order: int
    parity: tuple
    structure: tuple  # structure[i][j] -> tuple of FieldElem, length dim
    d_matrix: Matrix
    sigma_matrix: Matrix
    sigma_order: int

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def F(self) -> CycloField:
        return field(self.field_order)

    def zero_vector(self):
        return [self.F.zero] * self.dim

    def bracket(self, u, v):
        """Bracket of two coordinate vectors."""
        F = self.F
        out = [F.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.structure[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] = out[k] + ab * c
        return out

    def basis_vector(self, i):
        F = self.F
        return [F.one if k == i else F.zero for k in range(self.dim)]

    def apply_d(self, v):
        return self.d_matrix.apply(v)

    def apply_sigma(self, v):
        return self.sigma_matrix.apply(v)

    def omega(self, k: int = 1) -> FieldElem:
        """w_n^k for the automorphism order n."""
        return self.F.root_of_unity(self.sigma_order, k)


@dataclass(frozen=True)
class SigmaGrading:
    """Eigenspace decomposition of sigma: component r is ker(sigma - w_n^r)."""

    components: tuple  # per residue: tuple of coordinate vectors
    change: Matrix  # columns are the eigenvectors, residue order
    residues: tuple  # residue of each column of ``change``
    parities: tuple  # parity of each column

    def dims(self):
        return tuple(len(c) for c in self.components)


@dataclass(frozen=True)
class GddAlgebra:
    """C*partial semidirect s, as a superalgebra whose last basis vector is partial."""

    spec: SuperalgebraSpec
    base: SuperalgebraSpec

    @property
    def partial_index(self) -> int:
        return self.base.dim


def _sign(p: int, q: int) -> int:
    return -1 if (p & q) else 1


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _scalar(text, n0, where):
    if not isinstance(text, (str, int)):
        raise SchemaError(f"{where}: expected scalar string, got {text!r}")
    try:
        return parse_scalar(str(text), n0)
    except ScalarSyntaxError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _matrix(raw, dim, n0, where) -> Matrix:
    if not isinstance(raw, list) or len(raw) != dim or any(
            not isinstance(r, list) or len(r) != dim for r in raw):
        raise SchemaError(f"{where}: expected {dim}x{dim} array")
    return Matrix(dim, dim, tuple(_scalar(x, n0, where) for r in raw for x in r)) if dim else \
        Matrix(0, 0, ())


def parse_algebra(raw: dict) -> SuperalgebraSpec:
    """Turn a parsed algebra document into a SuperalgebraSpec without semantic checks.

    Brackets listed once are completed by super-skew symmetry; a pair listed
    in both orders is kept as given so that validation can flag it.
    """
    try:
        n0 = int(raw.get("field_order", 1))
        dim = int(raw["dim"])
        parity = tuple(int(p) for p in raw["parity"])
        n = int(raw.get("sigma_order", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"algebra document: {exc}") from exc
    if n0 < 1 or n < 1:
        raise SchemaError("field_order and sigma_order must be positive")
    if len(parity) != dim or any(p not in (0, 1) for p in parity):
        raise SchemaError("parity must list 0/1 for each basis vector")
    F = field(n0)
    given = {}
    for rec in raw.get("bracket", []):
        try:
            i, j, out = int(rec["i"]) - 1, int(rec["j"]) - 1, rec["out"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bracket record {rec!r}: {exc}") from exc
        if not (0 <= i < dim and 0 <= j < dim):
            raise SchemaError(f"bracket record ({i + 1},{j + 1}) out of range")
        if (i, j) in given:
            raise SchemaError(f"bracket ({i + 1},{j + 1}) listed twice")
        vec = [F.zero] * dim
        for k, s in out.items():
            k = int(k) - 1
            if not 0 <= k < dim:
                raise SchemaError(f"bracket ({i + 1},{j + 1}) target {k + 1} out of range")
            vec[k] = _scalar(s, n0, f"bracket ({i + 1},{j + 1})")
        given[(i, j)] = vec
    table = [[[F.zero] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), vec in given.items():
        table[i][j] = vec
        if (j, i) not in given and i != j:
            s = -_sign(parity[i], parity[j])
            table[j][i] = [x * s for x in vec]
    structure = tuple(tuple(tuple(table[i][j]) for j in range(dim)) for i in range(dim))
    d = _matrix(raw.get("d", [[0] * dim for _ in range(dim)]), dim, n0, "d")
    if "sigma" in raw:
        sigma = _matrix(raw["sigma"], dim, n0, "sigma")
    else:
        sigma = Matrix.identity(F, dim)
    return SuperalgebraSpec(str(raw.get("name", "")), n0, parity, structure, d, sigma, n)


def load_algebra(path) -> SuperalgebraSpec:
    with open(path) as fh:
        raw = json.load(fh)
    return build_algebra(raw)


def algebra_to_raw(g: SuperalgebraSpec) -> dict:
    recs = []
    for i in range(g.dim):
        for j in range(i, g.dim):
            if i == j and not (g.parity[i] and g.parity[j]):
                continue
            out = {str(k + 1): render_scalar(c) for k, c in enumerate(g.structure[i][j]) if c}
            if out:
                recs.append({"i": i + 1, "j": j + 1, "out": out})
    return {
        "name": g.name,
        "field_order": g.field_order,
        "dim": g.dim,
        "parity": list(g.parity),
        "bracket": recs,
        "d": [[render_scalar(x) for x in g.d_matrix.row(i)] for i in range(g.dim)],
        "sigma": [[render_scalar(x) for x in g.sigma_matrix.row(i)] for i in range(g.dim)],
        "sigma_order": g.sigma_order,
    }


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_structure(g: SuperalgebraSpec) -> list[Violation]:
    out = []
    m, par, c = g.dim, g.parity, g.structure
    for i in range(m):
        for j in range(m):
            s = -_sign(par[i], par[j])
            for k in range(m):
                x = c[i][j][k]
                if x and par[k] != (par[i] + par[j]) % 2:
                    out.append(Violation("parity", (i + 1, j + 1, k + 1),
                                         "bracket leaves the parity of its arguments"))
                if i <= j and x != c[j][i][k] * s:
                    out.append(Violation("skew", (i + 1, j + 1, k + 1),
                                         "super-skew symmetry fails"))
    for i in range(m):
        for j in range(m):
            cij = c[i][j]
            for k in range(m):
                ei, ej, ek = (g.basis_vector(t) for t in (i, j, k))
                lhs = g.bracket(ei, c[j][k])
                r1 = g.bracket(cij, ek)
                r2 = g.bracket(ej, c[i][k])
                s = _sign(par[i], par[j])
                if any(a != b + s * e for a, b, e in zip(lhs, r1, r2)):
                    out.append(Violation("jacobi", (i + 1, j + 1, k + 1),
                                         "super-Jacobi identity fails"))
    return out


def validate_derivation(g: SuperalgebraSpec) -> list[Violation]:
    out = []
    m, par, D = g.dim, g.parity, g.d_matrix
    for i in range(m):
        for j in range(m):
            if D[i, j] and par[i] != par[j]:
                out.append(Violation("d-parity", (i + 1, j + 1), "d is not even"))
    for i in range(m):
        for j in range(m):
            ei, ej = g.basis_vector(i), g.basis_vector(j)
            lhs = g.apply_d(list(g.structure[i][j]))
            rhs1 = g.bracket(D.column(i), ej)
            rhs2 = g.bracket(ei, D.column(j))
            if any(a != b + e for a, b, e in zip(lhs, rhs1, rhs2)):
                out.append(Violation("leibniz", (i + 1, j + 1), "d[x,y] != [dx,y]+[x,dy]"))
    if m and rank(D - Matrix.identity(g.F, m)) < m:
        witness = fixed_space(D, 1)[0]
        out.append(Violation("eigenvalue-1", tuple(render_scalar(x) for x in witness),
                             "1 is an eigenvalue of d"))
    return out


def validate_automorphism(g: SuperalgebraSpec) -> list[Violation]:
    out = []
    m, par, S, n = g.dim, g.parity, g.sigma_matrix, g.sigma_order
    if g.field_order % n:
        out.append(Violation("field", (n, g.field_order),
                             f"sigma order {n} does not divide field order {g.field_order}"))
    for i in range(m):
        for j in range(m):
            if S[i, j] and par[i] != par[j]:
                out.append(Violation("sigma-parity", (i + 1, j + 1), "sigma is not even"))
    for i in range(m):
        for j in range(m):
            lhs = g.apply_sigma(list(g.structure[i][j]))
            rhs = g.bracket(S.column(i), S.column(j))
            if lhs != rhs:
                out.append(Violation("homomorphism", (i + 1, j + 1),
                                     "sigma[x,y] != [sigma x, sigma y]"))
    if m:
        ident = Matrix.identity(g.F, m)
        power = ident
        for k in range(1, n + 1):
            power = power @ S
            if k < n and power == ident:
                out.append(Violation("order", (k,), f"sigma^{k} = id but declared order is {n}"))
                break
            if k == n and power != ident:
                out.append(Violation("order", (n,), f"sigma^{n} != id"))
        if S @ g.d_matrix != g.d_matrix @ S:
            out.append(Violation("commute", (), "sigma d != d sigma"))
    elif n != 1:
        out.append(Violation("order", (1,), f"sigma on the zero algebra has order 1, not {n}"))
    return out


def build_algebra(raw: dict) -> SuperalgebraSpec:
    """Parse and fully validate; raises ValidationError listing every witness."""
    g = parse_algebra(raw)
    problems = validate_structure(g)
    if not problems:
        problems += validate_derivation(g)
        problems += validate_automorphism(g)
    if problems:
        raise ValidationError(problems)
    return g


# ---------------------------------------------------------------------------
# derived objects
# ---------------------------------------------------------------------------


def sigma_components(g: SuperalgebraSpec) -> SigmaGrading:
    n, m, F = g.sigma_order, g.dim, g.F
    comps, cols, residues, parities = [], [], [], []
    for r in range(n):
        mu = g.omega(r)
        basis = []
        for v in fixed_space(g.sigma_matrix, mu) if m else []:
            ps = {g.parity[k] for k, x in enumerate(v) if x}
            assert len(ps) == 1, "eigenvector mixes parities"
            basis.append(tuple(v))
            cols.append(v)
            residues.append(r)
            parities.append(ps.pop())
        comps.append(tuple(basis))
    if len(cols) != m:
        raise ValueError("sigma is not diagonalisable over the coefficient field")
    change = Matrix.from_columns(F, cols, m) if m else Matrix(0, 0, ())
    return SigmaGrading(tuple(comps), change, tuple(residues), tuple(parities))


def _inverse(M: Matrix) -> Matrix:
    from .exactfield import rref
    F = M.entries[0].F
    n = M.rows
    rows = [list(M.row(i)) + [F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    piv = rref(rows, 2 * n)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(n, n, tuple(x for r in rows for x in r[n:]))


def transport(g: SuperalgebraSpec, P: Matrix, name: str | None = None) -> SuperalgebraSpec:
    """Rewrite ``g`` in the basis given by the columns of P (parity-homogeneous)."""
    m = g.dim
    if m == 0:
        return g
    Pinv = _inverse(P)
    cols = [list(P.column(j)) for j in range(m)]
    parity = []
    for v in cols:
        ps = {g.parity[k] for k, x in enumerate(v) if x}
        if len(ps) != 1:
            raise ValueError("change of basis must be parity-homogeneous")
        parity.append(ps.pop())
    structure = tuple(
        tuple(tuple(Pinv.apply(g.bracket(cols[i], cols[j]))) for j in range(m))
        for i in range(m))
    return SuperalgebraSpec(name or g.name, g.field_order, tuple(parity), structure,
                            Pinv @ g.d_matrix @ P, Pinv @ g.sigma_matrix @ P, g.sigma_order)


def build_gdd(g: SuperalgebraSpec) -> GddAlgebra:
    m, F = g.dim, g.F
    table = [[list(g.structure[i][j]) + [F.zero] if i < m and j < m else [F.zero] * (m + 1)
              for j in range(m + 1)] for i in range(m + 1)]
    for j in range(m):
        col = list(g.d_matrix.column(j)) + [F.zero]
        table[m][j] = col
        table[j][m] = [-x for x in col]
    structure = tuple(tuple(tuple(table[i][j]) for j in range(m + 1)) for i in range(m + 1))

    def extend(M: Matrix, corner):
        rows = [list(M.row(i)) + [F.zero] for i in range(m)]
        rows.append([F.zero] * m + [corner])
        return Matrix.from_rows(F, rows, m + 1)

    spec = SuperalgebraSpec(
        f"gdd({g.name})", g.field_order, g.parity + (0,), structure,
        extend(g.d_matrix, F.zero), extend(g.sigma_matrix, F.one), g.sigma_order)
    return GddAlgebra(spec, g)

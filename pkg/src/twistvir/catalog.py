"""Parameterized example algebras and their known H^2 dimension tables.

Each constructor produces a raw algebra document (the same shape as the JSON
input files) which is pushed through ``build_algebra``, so every catalog
entry is validated exactly like user input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .superalgebra import SuperalgebraSpec, build_algebra

NAMES = ("onedim", "gap_p", "fermion", "bms_family", "simple_lie", "galilean", "jordan")

BETA_GRID = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(2))
NI_GRID = ((1, 0), (2, 1), (3, 1), (3, 2))


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class ExampleId:
    name: str
    beta: Fraction | None = None
    n: int = 1
    i: int = 0
    p: int | None = None
    m: int | None = None

    def label(self) -> str:
        bits = []
        if self.beta is not None:
            bits.append(f"beta={self.beta}")
        if self.name in ("onedim", "fermion", "bms_family", "jordan", "simple_lie"):
            bits.append(f"n={self.n}")
            if self.name != "simple_lie":
                bits.append(f"i={self.i}")
        if self.p is not None:
            bits.append(f"p={self.p}")
        if self.m is not None:
            bits.append(f"m={self.m}")
        return f"{self.name}(" + ", ".join(bits) + ")"


@dataclass(frozen=True)
class ExpectedTable:
    n_minus1: tuple  # (even, odd)
    n_zero: tuple  # excluding the Virasoro form
    n_one: tuple
    note: str = ""

    @property
    def total(self) -> int:
        return 1 + sum(self.n_minus1) + sum(self.n_zero) + sum(self.n_one)

    def matches(self, table) -> bool:
        return (tuple(table.n_minus1), tuple(table.n_zero), tuple(table.n_one)) == (
            self.n_minus1, self.n_zero, self.n_one)


def _s(x) -> str:
    return str(Fraction(x))


def _check(cond, msg):
    if not cond:
        raise CatalogError(msg)


def _check_ni(n, i):
    _check(n >= 1 and 0 <= i < n, f"need 0 <= i < n, got n={n}, i={i}")
    _check(gcd(n, i) == 1, f"need gcd(n, i) = 1, got n={n}, i={i}")


def _w(k, n):
    """Scalar string for omega_n^k inside the field of order n."""
    k %= n
    if k == 0:
        return "1"
    return "w" if k == 1 else f"w^{k}"


def _zero(m):
    return [["0"] * m for _ in range(m)]


def _diag(vals):
    m = len(vals)
    out = _zero(m)
    for k, v in enumerate(vals):
        out[k][k] = v
    return out


def zero_algebra_raw() -> dict:
    return {"name": "witt", "field_order": 1, "dim": 0, "parity": [], "bracket": [],
            "d": [], "sigma": [], "sigma_order": 1}


def _onedim(eid, parity):
    b, n, i = eid.beta, eid.n, eid.i
    _check(b is not None and b != 1, "beta must be given and differ from 1")
    _check_ni(n, i)
    return {"name": eid.label(), "field_order": n, "dim": 1, "parity": [parity],
            "bracket": [], "d": [[_s(b)]], "sigma": [[_w(i, n)]], "sigma_order": n}


def _gap(eid):
    p = eid.p
    _check(p is not None and p > 1, "gap_p needs p > 1")
    m = p - 1
    return {"name": eid.label(), "field_order": p, "dim": m, "parity": [0] * m,
            "bracket": [], "d": _zero(m), "sigma": _diag([_w(k, p) for k in range(1, p)]),
            "sigma_order": p}


def _bms(eid):
    b, n, i = eid.beta, eid.n, eid.i
    _check(b is not None and b not in (1, Fraction(1, 2)), "beta must differ from 1 and 1/2")
    _check_ni(n, i)
    # basis h (even), e (odd) with [e, e] = h
    return {"name": eid.label(), "field_order": n, "dim": 2, "parity": [0, 1],
            "bracket": [{"i": 2, "j": 2, "out": {"1": "1"}}],
            "d": _diag([_s(2 * b), _s(b)]), "sigma": _diag([_w(2 * i, n), _w(i, n)]),
            "sigma_order": n}


def _sl2_raw(name, n):
    _check(n in (1, 2), "simple_lie supports sigma of order 1 or 2")
    # basis h, e, f; for n = 2 sigma is the inner involution e -> -e, f -> -f
    sig = ["1", "1", "1"] if n == 1 else ["1", "-1", "-1"]
    return {"name": name, "field_order": n, "dim": 3, "parity": [0, 0, 0],
            "bracket": [{"i": 1, "j": 2, "out": {"2": "2"}},
                        {"i": 1, "j": 3, "out": {"3": "-2"}},
                        {"i": 2, "j": 3, "out": {"1": "1"}}],
            "d": _zero(3), "sigma": _diag(sig), "sigma_order": n}


def _so_basis(m):
    return [(a, b) for a in range(m) for b in range(a + 1, m)]


def _so_matrix(m, ab):
    a, b = ab
    M = [[Fraction(0)] * m for _ in range(m)]
    M[a][b], M[b][a] = Fraction(1), Fraction(-1)
    return M


def _mat_mul(A, B):
    return [[sum(A[r][k] * B[k][c] for k in range(len(B))) for c in range(len(B[0]))]
            for r in range(len(A))]


def _so_semidirect(m, rotations_only=False):
    """so(m) (+ C^m unless rotations_only) as a raw bracket table."""
    rot = _so_basis(m)
    mats = [_so_matrix(m, ab) for ab in rot]
    r = len(rot)
    dim = r if rotations_only else r + m
    brackets = []

    def coords(M):
        return {str(k + 1): _s(M[a][b]) for k, (a, b) in enumerate(rot) if M[a][b]}

    for x, y in itertools.combinations(range(r), 2):
        A, B = mats[x], mats[y]
        AB, BA = _mat_mul(A, B), _mat_mul(B, A)
        C = [[AB[p][q] - BA[p][q] for q in range(m)] for p in range(m)]
        out = coords(C)
        if out:
            brackets.append({"i": x + 1, "j": y + 1, "out": out})
    if not rotations_only:
        for x in range(r):
            for c in range(m):
                out = {str(r + k + 1): _s(mats[x][k][c]) for k in range(m) if mats[x][k][c]}
                if out:
                    brackets.append({"i": x + 1, "j": r + c + 1, "out": out})
    return dim, r, brackets


def _galilean(eid):
    m = eid.m
    _check(m is not None and 1 <= m <= 4, "galilean supports 1 <= m <= 4")
    if m == 1:
        # so(1) = 0, so the algebra is the 1-dim case with beta = -1
        raw = _onedim(ExampleId("onedim", Fraction(-1), 1, 0), 0)
        raw["name"] = eid.label()
        return raw
    dim, r, brackets = _so_semidirect(m)
    d = _diag(["0"] * r + ["-1"] * m)
    return {"name": eid.label(), "field_order": 1, "dim": dim, "parity": [0] * dim,
            "bracket": brackets, "d": d, "sigma": _diag(["1"] * dim), "sigma_order": 1}


def _simple_lie(eid):
    m = eid.m or 2
    if m == 2:
        return _sl2_raw(eid.label(), eid.n)
    _check(m == 3 and eid.n == 1, "simple_lie supports sl2 (m=2, n in {1,2}) or so(3) (m=3, n=1)")
    dim, _, brackets = _so_semidirect(3, rotations_only=True)
    return {"name": eid.label(), "field_order": 1, "dim": dim, "parity": [0] * dim,
            "bracket": brackets, "d": _zero(dim), "sigma": _diag(["1"] * dim), "sigma_order": 1}


def _jordan(eid):
    b, n, i = eid.beta, eid.n, eid.i
    _check(b is not None and b != 1, "beta must be given and differ from 1")
    _check_ni(n, i)
    return {"name": eid.label(), "field_order": n, "dim": 2, "parity": [0, 0], "bracket": [],
            "d": [[_s(b), "1"], ["0", _s(b)]], "sigma": _diag([_w(i, n)] * 2),
            "sigma_order": n}


def example_raw(eid: ExampleId) -> dict:
    if eid.name == "onedim":
        return _onedim(eid, 0)
    if eid.name == "fermion":
        return _onedim(eid, 1)
    if eid.name == "gap_p":
        return _gap(eid)
    if eid.name == "bms_family":
        return _bms(eid)
    if eid.name == "simple_lie":
        return _simple_lie(eid)
    if eid.name == "galilean":
        return _galilean(eid)
    if eid.name == "jordan":
        return _jordan(eid)
    raise CatalogError(f"unknown example {eid.name!r}")


def make_example(eid: ExampleId) -> SuperalgebraSpec:
    return build_algebra(example_raw(eid))


def _ratio(eid):
    return Fraction(eid.i, eid.n)


HALF, THIRD, TWO_THIRDS = Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)


def expected_h2(eid: ExampleId) -> ExpectedTable:
    """Known per-summand dimensions, split by parity of the central element."""
    name, b = eid.name, eid.beta
    if name in ("onedim", "fermion", "bms_family", "jordan"):
        example_raw(eid)  # parameter checks
        r = _ratio(eid)
    if name == "onedim":
        nm = (1 if (b == -1 and eid.i == 0) else 0, 0)
        z = 2 if (b == 0 and eid.i == 0) else 1 if (b == 0 and r == HALF) else 0
        return ExpectedTable(nm, (z, 0), (0, 0))
    if name == "gap_p":
        _check(eid.p is not None and eid.p > 1, "gap_p needs p > 1")
        return ExpectedTable((0, 0), (eid.p // 2, 0), (0, 0))
    if name == "fermion":
        nm = (0, 1 if (b == -1 and eid.i == 0) else 0)
        z = (0, 1 if (b == 0 and eid.i == 0) else 0)
        one = (1 if (b == HALF and r in (0, HALF)) else 0, 0)
        return ExpectedTable(nm, z, one)
    if name == "bms_family":
        nm = (1 if (b == Fraction(-1, 2) and r in (0, HALF)) else 0,
              1 if (b == -1 and eid.i == 0) else 0)
        z = 2 if (b == 0 and eid.i == 0) else 1 if (b == 0 and r in (THIRD, TWO_THIRDS)) else 0
        return ExpectedTable(nm, (0, z), (0, 0))
    if name == "simple_lie":
        example_raw(eid)
        return ExpectedTable((0, 0), (1, 0), (0, 0))
    if name == "galilean":
        _check(eid.m in (1, 2, 3, 4), "galilean supports 1 <= m <= 4")
        if eid.m == 1:
            return ExpectedTable((1, 0), (0, 0), (0, 0))
        return ExpectedTable((0, 0), ({2: 2, 3: 1, 4: 2}[eid.m], 0), (0, 0))
    if name == "jordan":
        nm = (1 if (b == -1 and eid.n == 1) else 0, 0)
        z = 2 if (b == 0 and eid.n == 1) else 1 if (b == 0 and r == HALF) else 0
        # the printed cocycle row reads i/n in {1, 1/2}; i/n = 1 is out of range
        one = (1 if (b == HALF and r in (0, HALF)) else 0, 0)
        return ExpectedTable(nm, (z, 0), one, note="cocycle row read with i/n in {0, 1/2}")
    raise CatalogError(f"unknown example {name!r}")


def jordan_printed_total(eid: ExampleId) -> int:
    """The closed-form total exactly as printed, before correcting its two misprints.

    Kept so reports can show where the literal reading disagrees with the
    per-summand rows (and with the oracle).
    """
    b, n, r = eid.beta, eid.n, _ratio(eid)
    if b == 0 and n == 1:
        return 3
    if n == 1 and b in (1, HALF):
        return 2
    if r == HALF and b in (0, HALF):
        return 2
    return 1


@dataclass(frozen=True)
class GridEntry:
    eid: ExampleId
    expected: ExpectedTable


def _beta_ids(name, betas, ni, excluded=()):
    out = []
    for b in betas:
        if b == 1 or b in excluded:
            continue
        for n, i in ni:
            out.append(ExampleId(name, b, n, i))
    return out


def regression_grid(names=NAMES) -> list[ExampleId]:
    ids = []
    for name in names:
        if name in ("onedim", "fermion", "jordan"):
            ids += _beta_ids(name, BETA_GRID, NI_GRID)
        elif name == "bms_family":
            ids += _beta_ids(name, BETA_GRID, NI_GRID, excluded=(HALF,))
        elif name == "gap_p":
            ids += [ExampleId("gap_p", p=p) for p in range(2, 8)]
        elif name == "simple_lie":
            ids += [ExampleId("simple_lie", n=1, m=2), ExampleId("simple_lie", n=2, m=2),
                    ExampleId("simple_lie", n=1, m=3)]
        elif name == "galilean":
            ids += [ExampleId("galilean", m=m) for m in (1, 2, 3, 4)]
    return ids


# --- module data used by the loop-module checks ------------------------------

def onedim_module_raw(mu1, mu2) -> dict:
    """1-dim module of the beta = 0 one-dimensional algebra: partial -> mu1, e -> mu2."""
    return {"dim": 1, "parity": [0], "partial": [[_s(mu1)]], "action": [[[_s(mu2)]]]}


def virasoro_module_raw(mu) -> dict:
    return {"dim": 1, "parity": [0], "partial": [[_s(mu)]], "action": []}


def sl2_natural_module_raw() -> dict:
    return {"dim": 2, "parity": [0, 0], "partial": _zero(2),
            "action": [[["1", "0"], ["0", "-1"]],
                       [["0", "1"], ["0", "0"]],
                       [["0", "0"], ["1", "0"]]]}


def doubled_module_raw(raw: dict) -> dict:
    """Block-diagonal direct sum V + V."""
    r = raw["dim"]

    def double(M):
        out = _zero(2 * r)
        for a in range(r):
            for b in range(r):
                out[a][b] = M[a][b]
                out[r + a][r + b] = M[a][b]
        return out

    res = {"dim": 2 * r, "parity": list(raw["parity"]) * 2, "partial": double(raw["partial"]),
           "action": [double(M) for M in raw["action"]]}
    if "grading" in raw:
        res["grading"] = list(raw["grading"]) * 2
    return res

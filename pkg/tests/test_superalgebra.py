import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twistvir.catalog import ExampleId, example_raw, make_example
from twistvir.superalgebra import (
    SchemaError, ValidationError, algebra_to_raw, build_algebra, build_gdd, load_algebra,
    parse_algebra, sigma_components, validate_automorphism, validate_derivation,
    validate_structure,
)

SL2 = {"name": "sl2", "dim": 3, "parity": [0, 0, 0],
       "bracket": [{"i": 1, "j": 2, "out": {"2": "2"}},
                   {"i": 1, "j": 3, "out": {"3": "-2"}},
                   {"i": 2, "j": 3, "out": {"1": "1"}}]}


def kinds(exc):
    return {v.kind for v in exc.value.violations}


def test_accepts_basic_algebras():
    build_algebra({"dim": 1, "parity": [0]})
    g = build_algebra(SL2)
    assert g.dim == 3 and g.sigma_order == 1


def test_skew_witness():
    raw = {"dim": 2, "parity": [0, 0], "bracket": [{"i": 1, "j": 2, "out": {"1": "1"}},
                                                   {"i": 2, "j": 1, "out": {"1": "1"}}]}
    with pytest.raises(ValidationError) as exc:
        build_algebra(raw)
    skew = [v for v in exc.value.violations if v.kind == "skew"]
    assert skew and skew[0].witness[:2] == (1, 2)


def test_parity_violation():
    raw = {"dim": 2, "parity": [0, 1], "bracket": [{"i": 1, "j": 2, "out": {"1": "1"}}]}
    with pytest.raises(ValidationError) as exc:
        build_algebra(raw)
    assert "parity" in kinds(exc)


def test_odd_square_allowed():
    # [e, e] = h with e odd is symmetric, not skew
    build_algebra(example_raw(ExampleId("bms_family", Fraction(0), 1, 0)))


def test_schema_errors():
    with pytest.raises(SchemaError):
        parse_algebra({"dim": 2, "parity": [0]})
    with pytest.raises(SchemaError):
        parse_algebra({"dim": 1, "parity": [0], "bracket": [{"i": 1, "j": 3, "out": {}}]})
    with pytest.raises(SchemaError):
        parse_algebra({"dim": 1, "parity": [0], "d": [["x"]]})
    with pytest.raises(SchemaError):
        parse_algebra({"dim": 2, "parity": [0, 0], "bracket": [
            {"i": 1, "j": 2, "out": {}}, {"i": 1, "j": 2, "out": {}}]})


def test_derivation_checks():
    sl2 = build_algebra(SL2)
    assert validate_derivation(sl2) == []
    with pytest.raises(ValidationError) as exc:
        build_algebra({"dim": 1, "parity": [0], "d": [["1"]]})
    assert "eigenvalue-1" in kinds(exc)
    build_algebra({"dim": 2, "parity": [0, 0], "d": [["0", "1"], ["0", "0"]]})
    # diag(1, 0, 0) on sl2 is not a derivation
    bad = dict(SL2, d=[["2", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]])
    with pytest.raises(ValidationError) as exc:
        build_algebra(bad)
    assert "leibniz" in kinds(exc)


def test_automorphism_checks():
    assert validate_automorphism(build_algebra(SL2)) == []
    build_algebra(example_raw(ExampleId("gap_p", p=5)))
    with pytest.raises(ValidationError) as exc:
        build_algebra({"dim": 1, "parity": [0], "field_order": 2, "sigma_order": 2,
                       "sigma": [["1"]]})
    assert "order" in kinds(exc)
    # sigma of order 3 needs the cube roots of unity in the field
    with pytest.raises(ValidationError):
        build_algebra({"dim": 1, "parity": [0], "field_order": 2, "sigma_order": 3})
    # sigma not commuting with d
    raw = {"dim": 2, "parity": [0, 0], "field_order": 2, "sigma_order": 2,
           "d": [["0", "1"], ["0", "0"]], "sigma": [["1", "0"], ["0", "-1"]]}
    with pytest.raises(ValidationError) as exc:
        build_algebra(raw)
    assert "commute" in kinds(exc)
    # scaling e by 2 and f by 1 does not preserve [e, f] = h
    raw = dict(SL2, sigma=[["1", "0", "0"], ["0", "2", "0"], ["0", "0", "1"]])
    with pytest.raises(ValidationError) as exc:
        build_algebra(raw)
    assert "homomorphism" in kinds(exc)


def _jacobi_fraction(raw):
    """Independent super-Jacobi check with Fractions on the raw record list."""
    m, par = raw["dim"], raw["parity"]
    c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for rec in raw["bracket"]:
        i, j = rec["i"] - 1, rec["j"] - 1
        for k, s in rec["out"].items():
            c[i][j][int(k) - 1] = Fraction(s)
            if i != j:
                c[j][i][int(k) - 1] = -(-1) ** (par[i] * par[j]) * Fraction(s)

    def br(u, v):
        out = [Fraction(0)] * m
        for i, j in itertools.product(range(m), repeat=2):
            if u[i] and v[j]:
                for k in range(m):
                    out[k] += u[i] * v[j] * c[i][j][k]
        return out

    e = [[Fraction(int(a == b)) for b in range(m)] for a in range(m)]
    for i, j, k in itertools.product(range(m), repeat=3):
        s = (-1) ** (par[i] * par[j])
        lhs = br(e[i], br(e[j], e[k]))
        rhs = [a + s * b for a, b in zip(br(br(e[i], e[j]), e[k]), br(e[j], br(e[i], e[k])))]
        if lhs != rhs:
            return False
    return True


@given(st.integers(0, 2), st.integers(0, 2), st.sampled_from([-2, -1, 1, 3]))
def test_mutations_agree_with_independent_jacobi(rec, target, value):
    raw = json.loads(json.dumps(SL2))
    raw["bracket"][rec]["out"][str(target + 1)] = str(value)
    ok = _jacobi_fraction(raw)
    try:
        g = parse_algebra(raw)
    except SchemaError:
        pytest.fail("mutation should parse")
    assert (validate_structure(g) == []) == ok


def test_sigma_components():
    gr = sigma_components(make_example(ExampleId("gap_p", p=3)))
    assert gr.dims() == (0, 1, 1)
    assert sigma_components(build_algebra(SL2)).dims() == (3,)
    gr = sigma_components(make_example(ExampleId("onedim", Fraction(0), 2, 1)))
    assert gr.dims() == (0, 1)


def test_components_are_graded():
    g = make_example(ExampleId("bms_family", Fraction(0), 3, 1))
    gr = sigma_components(g)
    for b, rb in zip(gr.change.transpose().tolist(), gr.residues):
        for c, rc in zip(gr.change.transpose().tolist(), gr.residues):
            w = g.bracket(b, c)
            assert g.apply_sigma(w) == [g.omega(rb + rc) * x for x in w]
        assert g.apply_sigma(g.apply_d(b)) == [g.omega(rb) * x for x in g.apply_d(b)]


def test_build_gdd():
    zero = build_algebra({"dim": 0, "parity": []})
    gdd = build_gdd(zero)
    assert gdd.spec.dim == 1 and validate_structure(gdd.spec) == []
    g = make_example(ExampleId("onedim", Fraction(-1, 2), 1, 0))
    gdd = build_gdd(g)
    assert gdd.spec.bracket(gdd.spec.basis_vector(1), gdd.spec.basis_vector(0))[0] == g.F(Fraction(-1, 2))
    sl2 = build_gdd(build_algebra(SL2))
    for j in range(3):
        assert not any(sl2.spec.structure[3][j])
    for spec in (gdd.spec, sl2.spec):
        assert validate_structure(spec) == []


def test_roundtrip_raw(tmp_path):
    g = make_example(ExampleId("bms_family", Fraction(-1, 2), 2, 1))
    p = tmp_path / "a.json"
    p.write_text(json.dumps(algebra_to_raw(g)))
    h = load_algebra(p)
    assert h.structure == g.structure and h.d_matrix == g.d_matrix
    assert h.sigma_matrix == g.sigma_matrix and h.parity == g.parity

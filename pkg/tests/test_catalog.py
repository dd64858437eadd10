from fractions import Fraction

import pytest

from twistvir.catalog import (
    CatalogError, ExampleId, example_raw, expected_h2, jordan_printed_total, make_example,
    regression_grid,
)
from twistvir.centralext import h2_summary
from twistvir.superalgebra import sigma_components, validate_automorphism, validate_derivation

Q = Fraction


def test_gap3_shape():
    g = make_example(ExampleId("gap_p", p=3))
    assert g.dim == 2 and g.sigma_order == 3 and set(g.parity) == {0}
    assert g.d_matrix.is_zero()
    assert g.sigma_matrix[0, 0] == g.F.w() and g.sigma_matrix[1, 1] == g.F.w(2)


def test_bms_shape():
    g = make_example(ExampleId("bms_family", Q(-1, 2), 2, 1))
    assert g.parity == (0, 1)
    assert g.structure[1][1] == (g.F.one, g.F.zero)


def test_galilean_shape():
    g = make_example(ExampleId("galilean", m=2))
    assert g.dim == 3
    assert [g.d_matrix[i, i] for i in range(3)] == [g.F.zero, g.F(-1), g.F(-1)]
    assert g.sigma_matrix == g.sigma_matrix.identity(g.F, 3)
    assert make_example(ExampleId("galilean", m=4)).dim == 10


@pytest.mark.parametrize("eid", [
    ExampleId("onedim", Q(1), 1, 0), ExampleId("onedim", Q(0), 2, 0), ExampleId("onedim", Q(0), 4, 2),
    ExampleId("bms_family", Q(1, 2), 1, 0), ExampleId("gap_p", p=1), ExampleId("galilean", m=5),
    ExampleId("jordan", Q(1), 1, 0), ExampleId("nope"),
], ids=lambda e: e.label())
def test_constraints(eid):
    with pytest.raises(CatalogError):
        example_raw(eid)


@pytest.mark.parametrize("eid", regression_grid(), ids=lambda e: e.label())
def test_grid_matches_expected(eid):
    g = make_example(eid)
    assert validate_derivation(g) == [] and validate_automorphism(g) == []
    t, e = h2_summary(g), expected_h2(eid)
    assert (t.n_minus1, t.n_zero, t.n_one) == (e.n_minus1, e.n_zero, e.n_one)
    assert t.total == e.total


@pytest.mark.parametrize("p", range(2, 8))
def test_gap_totals(p):
    assert h2_summary(make_example(ExampleId("gap_p", p=p))).total == p // 2 + 1


def test_expected_examples():
    assert expected_h2(ExampleId("onedim", Q(0), 2, 1)).total == 2
    assert expected_h2(ExampleId("fermion", Q(1, 2), 1, 0)).total == 2
    assert expected_h2(ExampleId("jordan", Q(0), 1, 0)).total == 3


def test_jordan_printed_total_disagrees_only_at_misprint():
    diff = [e for e in regression_grid(("jordan",))
            if jordan_printed_total(e) != expected_h2(e).total]
    assert diff == [ExampleId("jordan", Q(-1), 1, 0)]


def test_residue_dims():
    g = make_example(ExampleId("bms_family", Q(0), 3, 1))
    assert sigma_components(g).dims() == (0, 1, 1)

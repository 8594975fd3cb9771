"""Filtered complexes: minimal models, first pages, the weight certificate.

The worked fixtures are small enough to compute by hand and are frozen
here. The randomized sweep builds direct sums of elementary pieces whose
first page and minimal model are pure bookkeeping, scrambled by a random
filtration-respecting unipotent change of basis that entangles the
summands without changing either invariant.
"""

import random

import pytest

from liemodel.corpus import builtin_example
from liemodel.filtered import (
    FilteredComplex, check_mixed, contractible_pair, direct_sum,
    e1_spectral_dims, filtered_document, minimal_model, one_term_complex,
    parse_filtered_document)
from liemodel.graded import FiniteComplex, Slot
from liemodel.inputs import InputError, parse_algebra
from liemodel.linalg import Matrix
from liemodel.quillen import homotopy_groups

from oracles import random_filtered_fixture


def worked_fixture():
    # e (degree 0, level 1), g (degree 1, level 0), f (degree 1, level 1),
    # h (degree 2, level 1); d(e) = g drops the level, d(f) = h keeps it,
    # so the complex is filtered but not minimal.
    slots = {0: [Slot("e", 0)], 1: [Slot("g", 0), Slot("f", 0)],
             2: [Slot("h", 0)]}
    diffs = {0: Matrix(2, 1, {(0, 0): 1}), 1: Matrix(1, 2, {(0, 1): 1})}
    return FilteredComplex(FiniteComplex("cochain", slots, diffs),
                           {0: [1], 1: [0, 1], 2: [1]}, source="worked")


def test_worked_fixture_minimal_model():
    v = worked_fixture()
    assert not v.is_minimal()
    assert v.total_dim() == 4
    assert e1_spectral_dims(v) == {(0, 1): 1, (-1, 1): 1}

    mm = minimal_model(v)
    model = mm.model
    assert [model.dim(n) for n in (0, 1, 2)] == [1, 1, 0]
    assert model.filtration == {0: [1], 1: [0]}
    assert model.is_minimal()
    assert model.complex.diff(0).entries == {(0, 0): 1}
    # the lift of e needs no correction and g is already minimal
    assert mm.inclusion[0].column(0) == {0: 1}
    assert mm.inclusion[1].column(0) == {0: 1}
    assert e1_spectral_dims(model) == e1_spectral_dims(v)


def test_elementary_pieces():
    s = one_term_complex(2, 1)
    assert s.is_minimal()
    assert e1_spectral_dims(s) == {(-1, 3): 1}
    mm = minimal_model(s)
    assert mm.model.level_dims() == {(2, 1): 1}
    assert mm.inclusion[2] == Matrix.identity(1)

    pair = contractible_pair(3, 2)
    assert not pair.is_minimal()
    assert e1_spectral_dims(pair) == {}
    assert minimal_model(pair).model.total_dim() == 0

    assert contractible_pair(0, 5).total_dim() == 0

    both = direct_sum(one_term_complex(2, 1), contractible_pair(3, 1))
    mm = minimal_model(both)
    assert mm.model.level_dims() == {(2, 1): 1}
    assert not mm.model.complex.diffs
    assert e1_spectral_dims(both) == {(-1, 3): 1}

    overlap = direct_sum(contractible_pair(2, 2), one_term_complex(2, 0))
    mm = minimal_model(overlap)
    assert mm.model.level_dims() == {(2, 0): 1}
    assert e1_spectral_dims(overlap) == {(0, 2): 1}


def test_trivial_filtration_is_cohomology():
    # with every index 0 the only graded piece is the complex itself
    v = direct_sum(direct_sum(one_term_complex(0, 0), one_term_complex(2, 0)),
                   contractible_pair(1, 0))
    assert e1_spectral_dims(v) == {(0, 0): 1, (0, 2): 1}


def test_minimal_input_is_its_own_model():
    v = minimal_model(worked_fixture()).model
    again = minimal_model(v)
    assert again.model.filtration == v.filtration
    assert again.model.complex.diffs == v.complex.diffs
    for n in v.degrees():
        assert again.inclusion[n] == Matrix.identity(v.dim(n))


def test_minimal_model_random_sweep():
    rng = random.Random(20260818)
    for trial in range(30):
        doc, expected = random_filtered_fixture(rng)
        v = parse_filtered_document(doc)
        assert v.total_dim() <= 12
        mm = minimal_model(v)    # internally asserts the chain map and
        # the level-by-level graded cohomology comparison
        assert mm.model.is_minimal()
        assert e1_spectral_dims(v) == expected["e1"], trial
        assert e1_spectral_dims(mm.model) == expected["e1"], trial
        assert mm.model.level_dims() == expected["model"], trial
        again = minimal_model(mm.model)
        assert again.model.filtration == mm.model.filtration
        assert again.model.complex.diffs == mm.model.complex.diffs
        for n in mm.model.degrees():
            assert again.inclusion[n] == Matrix.identity(mm.model.dim(n))


def test_filtration_validation():
    slots = {0: [Slot("a", 0)], 1: [Slot("b", 0)]}
    diffs = {0: Matrix(1, 1, {(0, 0): 1})}
    cx = FiniteComplex("cochain", slots, diffs)
    with pytest.raises(InputError, match="raises the filtration"):
        FilteredComplex(cx, {0: [0], 1: [1]})
    with pytest.raises(InputError, match="non-negative"):
        FilteredComplex(cx, {0: [-1], 1: [0]})
    with pytest.raises(InputError, match="non-negative"):
        FilteredComplex(cx, {0: [True], 1: [0]})
    with pytest.raises(InputError, match="filtration indices"):
        FilteredComplex(cx, {0: [0, 0], 1: [0]})
    with pytest.raises(InputError, match="empty degree"):
        FilteredComplex(FiniteComplex("cochain", {}, {}), {3: [0]})
    chain = FiniteComplex("chain", {0: [Slot("a", 0)]}, {})
    with pytest.raises(InputError, match="cochain"):
        FilteredComplex(chain, {0: [0]})


def test_document_roundtrip_and_rejection():
    doc = filtered_document(worked_fixture())
    v = parse_filtered_document(doc)
    assert filtered_document(v) == doc
    assert v.filtration == {0: [1], 1: [0, 1], 2: [1]}

    with pytest.raises(InputError, match="filtered-complex"):
        parse_filtered_document({"kind": "algebra"})
    with pytest.raises(InputError, match="bad coefficient"):
        parse_filtered_document({
            "kind": "filtered-complex",
            "terms": {"0": [{"label": "a"}], "1": [{"label": "b"}]},
            "differential": {"0": [[0, 0, "0.5"]]}})
    with pytest.raises(InputError, match="outside"):
        parse_filtered_document({
            "kind": "filtered-complex",
            "terms": {"0": [{"label": "a"}]},
            "differential": {"0": [[0, 0, 1]]}})
    # a three-step identity chain has d(d(a)) = c != 0
    with pytest.raises(InputError, match="bad filtered complex"):
        parse_filtered_document({
            "kind": "filtered-complex",
            "terms": {"0": [{"label": "a"}], "1": [{"label": "b"}],
                      "2": [{"label": "c"}]},
            "differential": {"0": [[0, 0, 1]], "1": [[0, 0, 1]]}})


def test_check_mixed_sphere():
    report = homotopy_groups(builtin_example("sphere-2"), max_degree=5)
    verdict = check_mixed(report)
    assert verdict.mixed and bool(verdict)
    assert verdict.violations == []
    assert verdict.weights == {2: {-2: 1}, 3: {-4: 1}}


def test_check_mixed_p1_minus_3():
    report = homotopy_groups(builtin_example("p1-minus-3-points"),
                             max_degree=2, max_length=4)
    verdict = check_mixed(report)
    assert verdict.mixed
    # every generator sits in weight -2, so grade l is pure of weight -2l,
    # the bottom edge of its window
    assert verdict.weights == {1: {-2: 2, -4: 1, -6: 2, -8: 3}}


def test_check_mixed_reweighted_violation():
    doc = {"name": "reweighted", "kind": "algebra",
           "classes": [{"id": "1", "degree": 0, "weight": 0},
                       {"id": "x", "degree": 2, "weight": 0}],
           "products": []}
    report = homotopy_groups(parse_algebra(doc), max_degree=3)
    verdict = check_mixed(report)
    assert not verdict.mixed and not bool(verdict)
    assert (2, 0, (-2, -2)) in verdict.violations


def test_check_mixed_custom_mode():
    report = homotopy_groups(builtin_example("sphere-3"), max_degree=4)
    assert check_mixed(report, mode="custom",
                       window=lambda n: (-n, -n)).mixed
    with pytest.raises(InputError, match="unknown mixedness mode"):
        check_mixed(report, mode="nonsense")
    with pytest.raises(InputError, match="window"):
        check_mixed(report, mode="custom")
    surf = homotopy_groups(builtin_example("genus-1-curve"),
                           max_degree=2, max_length=2)
    with pytest.raises(InputError, match="pi1 window"):
        check_mixed(surf, mode="custom", window=lambda n: (-2 * n, -n))

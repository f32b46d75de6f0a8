"""Rank-3 coverage: the cube condition as a real gate, and the full pipeline
(measure, operators, wavelets) on a 3-graph with a twisted color pair."""

import numpy as np
import pytest

from kgraphwave import (
    CylinderFn,
    MeasureSpec,
    ValidationError,
    build_wavelet_family,
    check_ck_relations,
    cylinder_fns_equal,
    cylinder_measure,
    enumerate_paths,
    load_kgraph,
    normal_form,
    pf_data,
    segment,
    wavelet_basis,
)
from helpers import check_confluence, path_count


def skeleton_doc(squares):
    return {
        "k": 3,
        "vertices": ["v"],
        "edges": [
            {"id": "e", "color": 1, "source": "v", "range": "v"},
            {"id": "f1", "color": 2, "source": "v", "range": "v"},
            {"id": "f2", "color": 2, "source": "v", "range": "v"},
            {"id": "g1", "color": 3, "source": "v", "range": "v"},
            {"id": "g2", "color": 3, "source": "v", "range": "v"},
        ],
        "squares": squares,
    }


# bijective pair data that is NOT associative: found by exhaustive search
# over all bijection choices on this skeleton, witness word (g1, f1, e)
CUBE_VIOLATING_SQUARES = [
    {"left": ["e", "f1"], "right": ["f1", "e"]},
    {"left": ["e", "f2"], "right": ["f2", "e"]},
    {"left": ["e", "g1"], "right": ["g2", "e"]},
    {"left": ["e", "g2"], "right": ["g1", "e"]},
    {"left": ["f1", "g1"], "right": ["g1", "f1"]},
    {"left": ["f1", "g2"], "right": ["g1", "f2"]},
    {"left": ["f2", "g1"], "right": ["g2", "f1"]},
    {"left": ["f2", "g2"], "right": ["g2", "f2"]},
]

# the same skeleton with compatible choices: colors (1,2) twisted, the rest
# commuting identically
VALID_SQUARES = [
    {"left": ["e", "f1"], "right": ["f2", "e"]},
    {"left": ["e", "f2"], "right": ["f1", "e"]},
    {"left": ["e", "g1"], "right": ["g1", "e"]},
    {"left": ["e", "g2"], "right": ["g2", "e"]},
    {"left": ["f1", "g1"], "right": ["g1", "f1"]},
    {"left": ["f1", "g2"], "right": ["g2", "f1"]},
    {"left": ["f2", "g1"], "right": ["g1", "f2"]},
    {"left": ["f2", "g2"], "right": ["g2", "f2"]},
]


@pytest.fixture(scope="module")
def rank3():
    return load_kgraph(skeleton_doc(VALID_SQUARES))


def test_cube_violation_rejected():
    with pytest.raises(ValidationError) as exc:
        load_kgraph(skeleton_doc(CUBE_VIOLATING_SQUARES))
    assert exc.value.reason == "cube_condition"


def test_valid_rank3_loads_and_is_confluent(rank3):
    assert rank3.k == 3
    assert check_confluence(rank3, (1, 1, 1)) > 0


def test_rank3_normal_forms(rank3):
    # g edges commute past everything; the (1,2) twist still applies
    assert normal_form(rank3, ["g1", "e", "f1"]).word == ("e", "f1", "g1")
    assert normal_form(rank3, ["f1", "e", "g2"]).word == ("e", "f2", "g2")
    assert normal_form(rank3, ["g2", "f2", "e"]).word == ("e", "f1", "g2")


def test_rank3_segments(rank3):
    p = normal_form(rank3, ["e", "f1", "g2"])
    assert segment(p, (0, 0, 0), (0, 0, 1)).word == ("g2",)
    assert segment(p, (0, 0, 0), (0, 1, 0)).word == ("f2",)  # f1 e = e f2 twist
    assert segment(p, (1, 0, 0), p.degree).word == ("f1", "g2")


def test_rank3_pf_and_measure(rank3):
    pf = pf_data(rank3)
    assert np.allclose(pf.rho, [1.0, 2.0, 2.0], atol=1e-12)
    assert np.allclose(pf.x_lambda, [1.0], atol=1e-12)
    spec = MeasureSpec.perron_frobenius(rank3, pf, exact=True)
    from fractions import Fraction

    assert cylinder_measure(spec, normal_form(rank3, ["e", "f1", "g1"])) \
        == Fraction(1, 4)
    assert cylinder_measure(spec, normal_form(rank3, ["e"])) == Fraction(1)


def test_rank3_ck_relations(rank3):
    spec = MeasureSpec.perron_frobenius(rank3)
    assert check_ck_relations(spec, rank3, (1, 1, 1)).max_deviation < 1e-12


def test_rank3_wavelets_complete(rank3):
    family = build_wavelet_family(rank3, shape=(1, 1, 1))
    # D_v = four paths e f_i g_j, so three zero-mean wavelets
    assert len(family.wavelets) == 3
    words = ["".join(p.word) for p in family.blocks["v"].paths]
    assert words == ["ef1g1", "ef1g2", "ef2g1", "ef2g2"]
    (_, psi), = [w for w in family.wavelets if w[0] == (1, "v")]
    # leaf masses are 1/4, so the paired difference normalizes to sqrt(2)
    root2 = np.sqrt(2.0)
    expected = CylinderFn.combination([
        (normal_form(rank3, ["e", "f1", "g1"]), root2),
        (normal_form(rank3, ["e", "f1", "g2"]), -root2)])
    assert cylinder_fns_equal(psi, expected, tol=1e-12)
    for depth in (1, 2):
        basis = wavelet_basis(family, depth)
        level = (depth, depth, depth)
        assert len(basis.labels) == path_count(rank3, level) \
            == len(enumerate_paths(rank3, level))
        dim = len(basis.labels)
        assert np.max(np.abs(basis.gram() - np.eye(dim))) < 1e-12

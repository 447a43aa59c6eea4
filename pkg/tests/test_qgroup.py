import pytest

from qgauss.qgroup import (PRESET_NAMES, block_failures, c_conditions, canonical_name, canonical_relation,
                           corner_property, eliminate_dependents, frt_relations, metric_element, preset,
                           relation_listing, same_span, super_block_property, vanishes)
from qgauss.qlinalg import centrality_check
from qgauss.rmat import build_bcd, build_gl, build_super_gl
from qgauss.scalar import LAMBDA, ONE, qpow


def lines(name):
    return [r for _, r in relation_listing(preset(name))]


GL2 = [
    "a b - q b a = 0",
    "a c - q c a = 0",
    "b c - c b = 0",
    "b d - q d b = 0",
    "c d - q d c = 0",
    "a d - d a - (q - q^-1) b c = 0",
]


def test_gl2_relations_in_order():
    assert lines("gl2") == GL2


def test_frt_relations_gl2_count():
    assert len(frt_relations(build_gl(2))) == 6


@pytest.mark.parametrize("name,count", [("gl2", 6), ("gl3", 36), ("gl1|1", 8), ("gl2|1", 40)])
def test_frt_relation_counts(name, count):
    # one relation per unordered pair of generators, plus the odd squares
    assert len(preset(name).relations) == count


def test_gl11_relations():
    rel = lines("gl1|1")
    for r in ("beta beta = 0", "gamma gamma = 0", "beta gamma + gamma beta = 0",
              "a beta - q beta a = 0", "a d - d a + (q - q^-1) beta gamma = 0"):
        assert r in rel


def test_sp2_relations_include_row_rules():
    g = preset("sp2")
    a = g.alphabet
    for i in range(1, 5):
        p = g.t(i, 1) * g.t(i, 4) - (g.t(i, 4) * g.t(i, 1)).scale(qpow(2))
        assert not g.nf(p)
        p = (g.t(i, 2) * g.t(i, 3) - (g.t(i, 3) * g.t(i, 2)).scale(qpow(2))
             - (g.t(i, 1) * g.t(i, 4)).scale(LAMBDA))
        assert not g.nf(p), i
    assert len(a) == 16


@pytest.mark.parametrize("name,gens,grading", [
    ("gl2", 4, (0, 0)), ("sp2", 16, (0, 0, 0, 0)), ("gl2|1", 9, (0, 0, 1)), ("so3", 9, (0, 0, 0)),
])
def test_presets(name, gens, grading):
    g = preset(name)
    assert len(g.alphabet) == gens
    assert g.grading == grading


@pytest.mark.parametrize("text,name", [("gl(2)", "gl2"), ("GL2", "gl2"), ("gl(1|1)", "gl1|1"), ("SO(3)", "so3"),
                                       ("gl2|0", "gl2")])
def test_canonical_name(text, name):
    assert canonical_name(text) == name


def test_unknown_group():
    with pytest.raises(KeyError):
        preset("e8")


def test_preset_names_build():
    assert set(PRESET_NAMES) == {"gl2", "gl3", "gl4", "gl1|1", "gl2|1", "sp2", "so3"}


def test_frt_closure():
    for name in ("gl2", "gl3", "gl2|1", "sp2"):
        g = preset(name)
        assert all(not g.nf(p) for p in g.relations)


def test_canonical_relation_scales_first_term():
    g = preset("gl2")
    p = g.t(2, 1) * g.t(1, 1) - g.t(1, 1) * g.t(2, 1)
    assert canonical_relation(p.scale(-ONE))[1] == canonical_relation(p)[1]


@pytest.mark.parametrize("name", ["sp2", "so3"])
def test_metric_element_central(name):
    g = preset(name)
    Q = metric_element(g)
    assert Q == g.metric
    assert centrality_check(g, Q)


def test_c_conditions_sp2_inhomogeneous_count():
    # rows and columns with i = j' have a nonzero right-hand side
    rels = c_conditions(preset("sp2"))
    assert sum(1 for r in rels if r.rhs) == 8


def test_c_conditions_hold_modulo_metric():
    g = preset("sp2")
    for r in c_conditions(g):
        assert vanishes(g, r.poly())


def test_frt_relations_hold_under_metric():
    # adding the metric conditions keeps every FRT relation at 0
    g = preset("so3")
    assert all(vanishes(g, p) for p in g.relations)


def test_vanishes_detects_nonzero():
    g = preset("sp2")
    assert not vanishes(g, g.t(1, 1))
    assert not vanishes(g, g.metric - ONE * 2)
    assert vanishes(g, g.metric - ONE)


def test_eliminate_dependents():
    assert eliminate_dependents(preset("gl3")) == {}
    sub = eliminate_dependents(preset("sp2"))
    assert sub["A33"] == "A22^-1" and sub["A44"] == "A11^-1"
    assert sub["l43"] == "-1 l21" and sub["u34"] == "-1 u12"
    assert set(sub) == {"A33", "A44", "l42", "l43", "u24", "u34"}


@pytest.mark.parametrize("name", ["gl3", "gl4"])
def test_corner_property(name):
    res = corner_property(preset(name))
    assert len(res) == {3: 9, 4: 36}[preset(name).N]
    assert not any(res.values())


def test_subalgebra_property_gl4():
    assert not any(corner_property(preset("gl4"), 3).values())


def test_corner_property_detects_wrong_block():
    # a block with reversed columns is not a GL_q(2) matrix
    g = preset("gl3")
    assert block_failures(g, preset("gl2"), (1, 2), (2, 1))


def test_super_blocks():
    res = super_block_property(preset("gl2|1"))
    assert ("gl2", (1, 2), (1, 2)) in res
    assert sum(1 for k in res if k[0] == "gl1|1") == 4
    assert not any(res.values())


def test_super_block_with_wrong_group_fails():
    g = preset("gl2|1")
    assert block_failures(g, preset("gl2"), (1, 3), (1, 3))


def test_same_span():
    a = frt_relations(build_gl(2))
    assert same_span(a, list(reversed(a)))
    assert not same_span(a, a[:-1])


def test_super_frt_contains_odd_squares():
    rel = frt_relations(build_super_gl(1, 1))
    assert any(len(p) == 1 and next(iter(p.terms)) in ((1, 1), (2, 2)) for p in rel)


def test_bcd_rewrite_uses_c2():
    assert build_bcd("C", 2).N == 4

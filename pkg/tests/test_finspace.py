import pytest
from hypothesis import given, settings

from relcoh.errors import ContainmentError, NotContinuous, NotMorphism, NotOpen, ValidationError
from relcoh.finspace import (ContinuousMap, FinSpace, Sheaf, SheafComplex, SheafMorphism, cokernel_projection,
                             counit_morphism, inverse_image, kernel_inclusion, pushforward, restrict,
                             restriction_chain_map, unit_morphism)
from relcoh.ratlin import Matrix

from conftest import circle, pairs_with_open, posets, sierpinski


def components(sp, u):
    """Connected components of the comparability graph on u (union-find)."""
    parent = {x: x for x in u}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x in u:
        for y in sp.up[x]:
            if y in u:
                parent[find(x)] = find(y)
    return len({find(x) for x in u})


def test_minimal_opens_of_the_circle(pc):
    assert sorted(pc.names(pc.up[pc._idx("c")])) == ["a", "b", "c"]
    assert pc.height == 1
    assert len(pc.all_opens()) == 7


def test_open_rejects_non_up_sets(pc):
    with pytest.raises(NotOpen):
        pc.open("c")


def test_unknown_point_is_a_validation_error(pc):
    with pytest.raises(ValidationError):
        pc.points(["z"])


def test_non_t0_relation_rejected():
    with pytest.raises(ValidationError):
        FinSpace("ab", [("a", "b"), ("b", "a")])


def test_continuity_is_checked(pc):
    pt2 = FinSpace("xy")
    with pytest.raises(NotContinuous):
        ContinuousMap(pc, pt2, ["x", "x", "y", "y"])


def test_constant_sections_over_arcs(const_pc, pc):
    assert const_pc.sections(pc.whole).dim == 1
    assert const_pc.sections(pc.open("ab")).dim == 2
    assert const_pc.sections(pc.whole, pc.open("abc")).dim == 0


def test_malformed_restriction_cites_functoriality():
    sp = FinSpace("xyz", [("x", "y"), ("y", "z")])
    res = {("x", "y"): Matrix([[1]]), ("y", "z"): Matrix([[1]]), ("x", "z"): Matrix([[2]])}
    with pytest.raises(ValidationError) as err:
        Sheaf(sp, [1, 1, 1], res)
    assert err.value.invariant == "functoriality"


def test_restriction_shape_checked():
    sp = sierpinski()
    with pytest.raises(ValidationError):
        Sheaf(sp, {"o": 1, "c": 1}, {("c", "o"): Matrix([[1, 1]])})


def test_vanishing_set_must_be_inside():
    sp = sierpinski()
    with pytest.raises(ContainmentError):
        Sheaf.constant(sp).sections(sp.points(["o"]), sp.whole)


def test_skyscraper_and_extension_by_zero():
    sp = sierpinski()
    sky = Sheaf.skyscraper(sp, "c")
    assert sky.dims == (0, 1)
    assert sky.sections(sp.whole).dim == 1
    e = Sheaf(sp, {"o": 1, "c": 0})
    assert e.sections(sp.whole).dim == 0
    assert e.sections(sp.points(["o"])).dim == 1


def test_kernel_and_cokernel_of_skyscraper_projection():
    sp = sierpinski()
    q = Sheaf.constant(sp)
    sky = Sheaf.skyscraper(sp, "c")
    proj = SheafMorphism(q, sky, [Matrix.zeros(0, 1), Matrix([[1]])])
    k, inc = kernel_inclusion(proj)
    assert k.dims == (1, 0)
    cok, pi, _ = cokernel_projection(proj)
    assert cok.dims == (0, 0)


def test_morphism_naturality_checked():
    sp = sierpinski()
    q = Sheaf.constant(sp)
    with pytest.raises(NotMorphism):
        SheafMorphism(q, q, [Matrix([[1]]), Matrix([[2]])])


def test_pushforward_to_a_point_is_global_sections(pc, const_pc):
    pt = FinSpace(["p"])
    f = ContinuousMap(pc, pt, ["p"] * 4)
    assert pushforward(f, const_pc).dims == (1,)


def test_unit_and_counit_for_an_open_inclusion(pc, const_pc):
    arc, inc = pc.subspace(pc.open("abc"))
    u = unit_morphism(inc, const_pc)
    assert u.target.dims == (1, 1, 1, 2)
    c = counit_morphism(inc, inverse_image(inc, const_pc))
    assert all(c[y] == Matrix.identity(1) for y in range(arc.n))


def test_restriction_chain_map_is_a_chain_map(pc, const_pc):
    k = SheafComplex.single(const_pc)
    r = restriction_chain_map(k, pc.whole, (), pc.open("ab"), ())
    assert r[0] == Matrix([[1], [1]])


@settings(max_examples=60, deadline=None)
@given(pairs_with_open())
def test_constant_sections_count_components(data):
    sp, u = data
    s = Sheaf.constant(sp)
    assert s.sections(u).dim == components(sp, u)


@settings(max_examples=60, deadline=None)
@given(posets())
def test_opens_form_a_topology(sp):
    opens = set(sp.all_opens())
    assert frozenset() in opens and sp.whole in opens
    for a in opens:
        for b in opens:
            assert a | b in opens and a & b in opens


@settings(max_examples=40, deadline=None)
@given(pairs_with_open())
def test_restriction_composes(data):
    sp, u = data
    s = Sheaf.constant(sp, 2)
    for v in sp.all_opens():
        if v <= u:
            for w in sp.all_opens():
                if w <= v:
                    assert s.restriction(v, w) @ s.restriction(u, v) == s.restriction(u, w)


@settings(max_examples=40, deadline=None)
@given(pairs_with_open())
def test_restricting_to_an_open_keeps_sections(data):
    sp, u = data
    if not u:
        return
    s = Sheaf.constant(sp)
    r, inc = restrict(s, u)
    assert r.sections(r.space.whole).dim == s.sections(u).dim

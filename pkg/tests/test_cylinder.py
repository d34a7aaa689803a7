import pytest

from relcoh.cylinder import (cohom_of_morphism, co_mapping_cylinder, godement_triple, mapping_cylinder,
                             sheaf_co_mapping_cone, triple_identity, verify_propcmc, verify_th2, zstar_sheaf)
from relcoh.errors import NotMorphism
from relcoh.finspace import (ContinuousMap, FinSpace, Sheaf, SheafMorphism, inverse_image, pushforward,
                             unit_morphism)
from relcoh.godement import godement_resolve
from relcoh.oracle import space_betti
from relcoh.ratlin import Matrix

from conftest import circle, cone, sierpinski


def collapse():
    pc = circle()
    pt = FinSpace(["p"])
    return ContinuousMap(pc, pt, ["p"] * 4)


def arc_inclusion():
    pc = circle()
    return pc.subspace(pc.open("abc"))[1]


def unit_triple(f):
    s = Sheaf.constant(f.target)
    eta = unit_morphism(f, s)
    return s, eta.target.base, eta


def test_cylinder_of_the_collapse_is_the_cone():
    cyl = mapping_cylinder(collapse())
    assert cyl.z.labels == ("p", "a'", "b'", "c'", "d'")
    assert cyl.z.up == cone().up
    assert cyl.z.is_closed(cyl.x_part) and cyl.z.is_open(cyl.y_part)
    assert space_betti(cyl.z, (), 2) == (1, 0, 0)


def test_cylinder_projection_and_inclusions():
    f = arc_inclusion()
    cyl = mapping_cylinder(f)
    assert cyl.p.compose(cyl.nu).image == f.image
    assert set(cyl.basis()) <= set(cyl.z.all_opens())


def test_zstar_of_a_unit_is_the_pulled_back_sheaf():
    f = arc_inclusion()
    cyl = mapping_cylinder(f)
    s, t, eta = unit_triple(f)
    zs = zstar_sheaf(cyl, s, t, eta)
    assert zs.sheaf == inverse_image(cyl.p, s)


def test_zstar_rejects_foreign_morphisms():
    f = collapse()
    cyl = mapping_cylinder(f)
    s = Sheaf.constant(f.target)
    t = Sheaf.constant(f.source, 2)
    with pytest.raises(NotMorphism):
        zstar_sheaf(cyl, s, t, SheafMorphism.identity(s))


def test_cone_map_cohomology():
    f = collapse()
    cyl = mapping_cylinder(f)
    s, t, eta = unit_triple(f)
    mc = cohom_of_morphism(cyl, zstar_sheaf(cyl, s, t, eta))
    assert mc.dims[:3] == (0, 0, 1)
    assert mc.report.passed


def test_zero_morphism_splits_the_sequence():
    f = collapse()
    cyl = mapping_cylinder(f)
    s = Sheaf.constant(f.target)
    t = Sheaf.constant(f.source)
    pushed = pushforward(f, t)
    zero = SheafMorphism(s, pushed, [Matrix.zeros(pushed.dim(0), 1)])
    mc = cohom_of_morphism(cyl, zstar_sheaf(cyl, s, t, zero))
    # H(X;S) = (1,0), H(Y;T) = (1,1): with eta = 0 the groups are H^q(X) + H^{q-1}(Y)
    assert mc.dims[:3] == (1, 1, 1)


def test_arc_embedding_cohomology():
    f = arc_inclusion()
    cyl = mapping_cylinder(f)
    s, t, eta = unit_triple(f)
    assert cohom_of_morphism(cyl, zstar_sheaf(cyl, s, t, eta)).dims[:2] == (0, 1)


@pytest.mark.parametrize("make, expected", [(collapse, (0, 0, 1)), (arc_inclusion, (0, 1, 0))])
def test_generalized_comparison(make, expected):
    f = make()
    cyl = mapping_cylinder(f)
    s, t, eta = unit_triple(f)
    g = godement_triple(cyl, s, t, eta)
    assert verify_propcmc(cyl, g.k, g.l, g.phi).passed
    assert sheaf_co_mapping_cone(g.k, g.l, g.phi, f).global_check.passed
    rep = verify_th2(cyl, s, t, eta, g.k, g.l, g.phi, g.iota, g.jota)
    assert rep.passed, rep.failures()
    assert rep.dims["H(f;eta)"][:3] == expected
    assert rep.dims["H(M*)"][:3] == expected


def test_co_mapping_cylinder_differential_squares_to_zero():
    f = collapse()
    cyl = mapping_cylinder(f)
    s, t, eta = unit_triple(f)
    g = godement_triple(cyl, s, t, eta)
    zc = co_mapping_cylinder(cyl, g.k, g.l, g.phi)
    for q in range(zc.complex.top - 1):
        assert zc.complex.d(q + 1).compose(zc.complex.d(q)).is_zero()


@pytest.mark.parametrize("sub", ["ab", "abc", "a", ""])
def test_three_models_of_the_embedding_complex(sub):
    pc = circle()
    k = godement_resolve(Sheaf.constant(pc)).as_complex()
    rep = triple_identity(k, pc.open(sub))
    assert rep.passed, rep.failures()


def test_three_models_on_sierpinski():
    sp = sierpinski()
    k = godement_resolve(Sheaf(sp, {"o": 1, "c": 0})).as_complex()
    assert triple_identity(k, sp.points(["o"])).passed

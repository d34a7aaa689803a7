import pytest
from hypothesis import given, settings

from relcoh.errors import BoundError, HypothesisFailed, NotFlabby, ValidationError
from relcoh.finspace import Sheaf, SheafComplex, SheafMorphism
from relcoh.godement import (GodementTotal, flabby_check, flabby_witness, godement_map, godement_resolve,
                             hypercohomology, open_embedding_complex, product_sheaf, rel_cohomology,
                             verify_casflasque, verify_propfl, verify_theorem_th)
from relcoh.homalg import is_quasi_iso
from relcoh.oracle import space_betti
from relcoh.ratlin import Matrix

from conftest import circle, pairs_with_open, sierpinski, sphere


def test_circle_values(pc, const_pc):
    assert rel_cohomology(const_pc).dims == (1, 1, 0)
    assert rel_cohomology(const_pc, pc.open("ab")).dims == (0, 2, 0)
    assert rel_cohomology(const_pc, pc.open("ab"), u=pc.open("abc")).dims == (0, 1, 0)


def test_sphere_degree_two():
    sp = sphere()
    assert rel_cohomology(Sheaf.constant(sp)).dims == (1, 0, 1, 0)


def test_bound_below_height_rejected(const_pc):
    with pytest.raises(BoundError):
        rel_cohomology(const_pc, bound=2)
    with pytest.raises(BoundError):
        godement_resolve(const_pc, bound=0)


def test_bound_plus_one_changes_nothing(const_pc, pc):
    a = rel_cohomology(const_pc, pc.open("abc"))
    b = rel_cohomology(const_pc, pc.open("abc"), bound=a.resolution.bound + 1)
    assert b.dims[:len(a.dims)] == a.dims
    assert not any(b.dims[len(a.dims):])


def test_flabbiness(const_pc, pc):
    assert not flabby_check(const_pc)
    assert flabby_witness(const_pc) is not None
    c0, eps = product_sheaf(const_pc)
    assert flabby_check(c0)
    assert c0.dims == (1, 1, 3, 3)
    assert eps.is_injective()


def test_resolution_is_exact_and_flabby(const_pc):
    r = godement_resolve(const_pc)
    assert r.complete
    assert r.exactness_audit() == []
    assert all(flabby_check(t) for t in r.terms)


def test_resolution_of_a_morphism_commutes():
    sp = sierpinski()
    e = Sheaf(sp, {"o": 1, "c": 0})
    q = Sheaf.constant(sp)
    m = SheafMorphism(e, q, [Matrix([[1]]), Matrix.zeros(1, 0)])
    re, rq = godement_resolve(e), godement_resolve(q)
    phi = godement_map(re, rq, m)
    assert phi[0].compose(re.aug) == rq.aug.compose(m)


def test_hypercohomology_of_a_single_sheaf(const_pc):
    h = hypercohomology(SheafComplex.single(const_pc))
    assert h.dims == (1, 1, 0)
    assert all(h.chi(q).rows == h.dims[q] for q in range(3))


def test_embedding_into_canonical_total_complex_is_a_qis(const_pc, pc):
    k = godement_resolve(const_pc).as_complex()
    g = GodementTotal(k)
    assert is_quasi_iso(g.kappa.on_sections(pc.whole))
    assert is_quasi_iso(g.kappa.on_sections(pc.whole, pc.open("abc")))


def test_embedding_complex_needs_an_open(const_pc, pc):
    k = godement_resolve(const_pc).as_complex()
    with pytest.raises(ValidationError):
        open_embedding_complex(k, pc.points(["c"]))


def test_casflasque_requires_flabby_terms(const_pc, pc):
    with pytest.raises(NotFlabby):
        verify_casflasque(SheafComplex.single(const_pc), pc.open("abc"))


def test_comparison_refuses_non_acyclic_complexes(const_pc, pc):
    with pytest.raises(HypothesisFailed) as err:
        verify_theorem_th(SheafComplex.single(const_pc), pc.open("abc"))
    assert err.value.witness is not None


@pytest.mark.parametrize("sub", ["", "a", "ab", "abc", "abd"])
def test_comparison_on_every_circle_pair(const_pc, pc, sub):
    k = godement_resolve(const_pc).as_complex()
    rep = verify_theorem_th(k, pc.open(sub))
    assert rep.passed, rep.failures()
    assert rep.dims["H(K(i))"] == rep.dims["H(X,X';S)"]


def test_short_exact_sequence_on_sierpinski():
    sp = sierpinski()
    e = Sheaf(sp, {"o": 1, "c": 0})
    q = Sheaf.constant(sp)
    sky = Sheaf.skyscraper(sp, "c")
    inc = SheafMorphism(e, q, [Matrix([[1]]), Matrix.zeros(1, 0)])
    proj = SheafMorphism(q, sky, [Matrix.zeros(0, 1), Matrix([[1]])])
    rep = verify_propfl(q, sp.points(["o"]), (), (inc, proj))
    assert rep.passed, rep.failures()


@settings(max_examples=50, deadline=None)
@given(pairs_with_open())
def test_constant_coefficients_match_the_order_complex(data):
    sp, u = data
    rc = rel_cohomology(Sheaf.constant(sp), u)
    assert rc.dims == space_betti(sp, u, len(rc.dims) - 1)


@settings(max_examples=25, deadline=None)
@given(pairs_with_open(4))
def test_properties_hold_on_random_pairs(data):
    sp, u = data
    rep = verify_propfl(Sheaf.constant(sp), u)
    assert rep.passed, rep.failures()


@settings(max_examples=15, deadline=None)
@given(pairs_with_open(4))
def test_comparison_theorem_on_random_pairs(data):
    sp, u = data
    k = godement_resolve(Sheaf.constant(sp)).as_complex()
    rep = verify_theorem_th(k, u)
    assert rep.passed, rep.failures()

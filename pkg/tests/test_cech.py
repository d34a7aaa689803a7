import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcoh.cech import (ALTERNATING, FULL, CoveringPair, DiscretePartitionOfUnity, bq_simplify, cech_complex,
                         correspondence_chain, cover_comparison, excision, good_cover_defects, phi_cover,
                         pou_coboundary, propinvtwo_inverse, propsp_homotopy, psi_cover,
                         relative_sections_report, sort_with_sign, special_case_two_check, theorem_32rel_map,
                         total_complex, triple_les, two_set_relative, verify_leray, verify_propuni)
from relcoh.errors import (HypothesisFailed, NoFullSet, NotClosed, NotCocycle, NotContaining, NotCovering,
                           NotProductType)
from relcoh.finspace import Sheaf, SheafComplex
from relcoh.godement import godement_resolve, open_embedding_complex, product_sheaf
from relcoh.ratlin import Matrix, kernel

from conftest import circle, random_fraction, sierpinski, sphere


def arcs(sp):
    return CoveringPair(sp, [sp.open("abc"), sp.open("abd")])


def godement(sp):
    return godement_resolve(Sheaf.constant(sp)).as_complex()


def random_cocycle(rng, d, q):
    basis = kernel(d.d(q)).vectors()
    if not basis:
        return None
    coeffs = [random_fraction(rng) for _ in basis]
    if not any(coeffs):
        coeffs[0] = 1
    return tuple(sum(c * v[i] for c, v in zip(coeffs, basis)) for i in range(d.dim(q)))


def test_sort_with_sign():
    assert sort_with_sign((2, 0, 1)) == ((0, 1, 2), 1)
    assert sort_with_sign((1, 0)) == ((0, 1), -1)
    assert sort_with_sign((1, 1)) == (None, 0)


def test_cover_must_cover(pc):
    with pytest.raises(NotCovering):
        CoveringPair(pc, [pc.open("abc")])


def test_arc_cover_values(pc, const_pc):
    pair = arcs(pc)
    assert cech_complex(pair, const_pc).cohomology_dims() == (1, 1)
    assert cech_complex(pair, const_pc, FULL).cohomology_dims() == (1, 1, 0)
    t = total_complex(pair, godement(pc))
    assert t.cohomology_dims()[:3] == (1, 1, 0)
    assert special_case_two_check(t) == {}
    assert cover_comparison(t).passed


def test_modes_agree_on_small_covers(pc):
    k = godement(pc)
    for pair in [arcs(pc), CoveringPair(pc, [pc.open("abc"), pc.open("abd"), pc.open("ab")], {2})]:
        a = total_complex(pair, k, ALTERNATING).cohomology_dims()
        f = total_complex(pair, k, FULL).cohomology_dims()
        n = min(len(a), len(f))
        assert a[:n] == f[:n]


def test_two_set_complex_is_the_embedding_complex(pc):
    k = godement(pc)
    for sub in ["ab", "abc", "a"]:
        assert two_set_relative(k, pc.whole, pc.open(sub)) == open_embedding_complex(k, pc.open(sub)).complex


def test_relative_sections_report(pc):
    rep = relative_sections_report(godement(pc), pc.open("abc"))
    assert rep.passed, rep.failures()
    assert rep.dims["H_D(X,X')"][:2] == (0, 1)


def test_uniqueness_needs_suitable_coefficients(pc, const_pc):
    rep = verify_propuni(godement(pc), pc.open("abd"), pc.open("abc"))
    assert rep.passed
    with pytest.raises(HypothesisFailed):
        verify_propuni(SheafComplex.single(const_pc), pc.open("abd"), pc.open("abc"))


def test_excision(pc):
    k = godement(pc)
    assert excision(k, pc.points(["d"]), pc.open("abd")).passed
    with pytest.raises(NotClosed):
        excision(k, pc.points(["a"]), pc.whole)
    with pytest.raises(NotContaining):
        excision(k, pc.points(["c", "d"]), pc.open("abd"))


def test_triple_sequence(pc):
    tr = triple_les(godement(pc), pc.open("abc"), pc.open("ab"))
    assert tr.les.is_exact
    assert tr.formula_agrees


def test_leray_good_and_bad_covers(pc, const_pc):
    assert verify_leray(arcs(pc), const_pc).passed
    s2 = sphere()
    bad = CoveringPair(s2, [s2.open("abcdp"), s2.open("abcdq")])
    assert good_cover_defects(bad, Sheaf.constant(s2))
    with pytest.raises(HypothesisFailed) as err:
        verify_leray(bad, Sheaf.constant(s2))
    assert err.value.witness["degree"] == 1


def test_relative_cover_comparison(pc):
    pair = CoveringPair(pc, [pc.open("abc"), pc.open("abd"), pc.open("ab")], {2})
    m, rep = theorem_32rel_map(godement(pc), pair)
    assert rep.passed
    assert rep.dims["H(W,W')"][:2] == (0, 2)


def test_complete_member_required(pc):
    d = total_complex(arcs(pc), godement(pc))
    with pytest.raises(NoFullSet):
        propsp_homotopy(d, 0, (0,) * d.dim(0))


def test_non_cocycles_rejected(pc):
    d = total_complex(CoveringPair(pc, [pc.open("ab"), pc.whole]), godement(pc))
    v = next(tuple(1 if i == j else 0 for i in range(d.dim(0))) for j in range(d.dim(0))
             if any(d.total.d(0) @ tuple(1 if i == j else 0 for i in range(d.dim(0)))))
    with pytest.raises(NotCocycle):
        propsp_homotopy(d, 0, v)


def test_partition_of_unity_needs_product_sheaves(pc, const_pc):
    pair = arcs(pc)
    d = cech_complex(pair, const_pc)
    v = kernel(d.total.d(1)).vectors()[0]
    with pytest.raises(NotProductType):
        pou_coboundary(d, DiscretePartitionOfUnity(pair), 1, v)


def test_correspondence_on_the_arc_cover(pc):
    d = total_complex(arcs(pc), godement(pc))
    phi, ps = phi_cover(d), psi_cover(d)
    s = phi.source.cohomology(1).reps.column(0)
    h = d.total.cohomology(1)
    target = h.projector @ (phi[1] @ s)
    sigma_class = (h.projector @ ps.map[1] @ ps.cech.total.cohomology(1).reps)
    coeff = [t / sigma_class[0, 0] for t in target]
    sigma = tuple(coeff[0] * x for x in ps.cech.total.cohomology(1).reps.column(0))
    c = correspondence_chain(d, 1, s, sigma)
    assert c is not None and all(c.lines.values())
    assert correspondence_chain(d, 1, s, tuple(0 for _ in sigma)) is None


# --- random cocycles -----------------------------------------------------------

def _homotopy_cases():
    pc, sier = circle(), sierpinski()
    return [
        (CoveringPair(pc, [pc.open("ab"), pc.whole]), godement(pc)),
        (CoveringPair(pc, [pc.open("abc"), pc.whole, pc.open("ab")], {2}), godement(pc)),
        (CoveringPair(sier, [sier.points(["o"]), sier.whole], {0}), godement(sier)),
    ]


HOMOTOPY_CASES = _homotopy_cases()


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(range(len(HOMOTOPY_CASES))), st.sampled_from([ALTERNATING, FULL]))
def test_complete_member_homotopy_on_random_cocycles(seed, case, mode):
    pair, k = HOMOTOPY_CASES[case]
    d = total_complex(pair, k, mode)
    rng = random.Random(seed)
    q = rng.choice(list(d.valid_degrees()))
    xi = random_cocycle(rng, d.total, q)
    if xi is None:
        return
    ab, eta = propsp_homotopy(d, q, xi)
    assert len(eta) == (ab.dim(q - 1) if q >= 1 else 0)


def _pou_case():
    pc = circle()
    pair = arcs(pc)
    pou = DiscretePartitionOfUnity(pair)
    c0 = product_sheaf(Sheaf.constant(pc))[0]
    return pair, pou, cech_complex(pair, c0), total_complex(pair, godement(pc))


POU = _pou_case()


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_partition_of_unity_contracts_random_cocycles(seed):
    pair, pou, dc, _ = POU
    rng = random.Random(seed)
    sigma = random_cocycle(rng, dc.total, 1)
    tau = pou_coboundary(dc, pou, 1, sigma)
    assert dc.total.d(0) @ tau == sigma


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_gluing_inverts_restriction_on_random_cocycles(seed):
    pair, pou, _, t = POU
    rng = random.Random(seed)
    q = rng.choice([0, 1, 2])
    xi = random_cocycle(rng, t.total, q)
    if xi is None:
        return
    s = propinvtwo_inverse(t, pou, q, xi)
    phi = phi_cover(t)
    h = t.total.cohomology(q)
    assert h.projector @ (phi[q] @ s) == h.projector @ xi


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_coboundaries_simplify(seed):
    pair, pou, _, t = POU
    rng = random.Random(seed)
    q = rng.choice([1, 2])
    eta = tuple(random_fraction(rng) for _ in range(t.dim(q - 1)))
    xi = t.total.d(q - 1) @ eta
    if not any(xi):
        return
    e0, e1 = bq_simplify(t, pou, q, xi)
    k = t.k
    assert k.d(q - 1).on_sections(pair.opens[0]) @ e0 == t.components(q, xi)[(0, (0,))]

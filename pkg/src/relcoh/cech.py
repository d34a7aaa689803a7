"""Čech double complexes of covering pairs and their comparison maps.

A covering pair is a family of open sets W_0, ..., W_{n-1} together with a
subfamily I' whose union is the subspace X'.  Cochains live on the
intersections W_t of index tuples t; the relative complex drops every
tuple made only of indices from I'.  Cochains of a complex of sheaves form
a double complex and the total differential is

    D = δ̌ + (-1)^{q1} d     on C^{q1}(W, W'; K^{q2}).

Alternating cochains (strictly increasing tuples) are the default.  The
full mode keeps every ordered tuple with repeats, truncated at a chosen
Čech degree, and is used to cross-check signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .errors import (ContainmentError, HypothesisFailed, NoFullSet, NotClosed, NotCoboundary, NotCocycle,
                     NotContaining, NotCovering, NotProductType, ValidationError)
from .finspace import FinSpace, Sheaf, SheafComplex, SheafMorphism, kernel_inclusion, restrict_complex, restriction_chain_map
from .homalg import ChainMap, Complex, LongExactSequence, LesNode, co_mapping_cone, is_quasi_iso, les_from_ses
from .ratlin import ZERO, Matrix, Subspace, solve
from .report import VerificationReport, first_difference

ALTERNATING = "alternating"
FULL = "full"


class CoveringPair:
    """Open sets W_i covering `base`, with sub_index I' covering X'."""

    def __init__(self, space: FinSpace, opens: Sequence[Iterable[int]], sub_index: Iterable[int] = (),
                 base: Iterable[int] | None = None, names: Sequence[str] | None = None):
        self.space = space
        self.opens = tuple(frozenset(w) for w in opens)
        if not self.opens:
            raise NotCovering("a cover needs at least one open set")
        for i, w in enumerate(self.opens):
            if not space.is_open(w):
                raise NotCovering(f"member {i} is not open")
        self.sub_index = frozenset(sub_index)
        if not self.sub_index <= set(range(len(self.opens))):
            raise NotCovering("sub_index refers to a missing member")
        self.base = space.whole if base is None else frozenset(base)
        union = frozenset().union(*self.opens)
        if union != self.base:
            raise NotCovering(f"members cover {space.names(union)}, not {space.names(self.base)}")
        self.sub_space = frozenset().union(*(self.opens[i] for i in self.sub_index))
        self.names = tuple(names) if names is not None else tuple(f"W{i}" for i in range(len(self.opens)))
        self._meet = {}

    @property
    def size(self) -> int:
        return len(self.opens)

    def intersection(self, t: Sequence[int]) -> frozenset:
        key = frozenset(t)
        if key not in self._meet:
            w = self.base
            for i in key:
                w = w & self.opens[i]
            self._meet[key] = w
        return self._meet[key]

    def in_sub(self, t: Sequence[int]) -> bool:
        return all(i in self.sub_index for i in t)

    def absolute(self) -> "CoveringPair":
        return CoveringPair(self.space, self.opens, (), self.base, self.names)

    def sub_cover(self) -> "CoveringPair":
        """The members indexed by I', as a cover of X'."""
        idx = sorted(self.sub_index)
        return CoveringPair(self.space, [self.opens[i] for i in idx], (), self.sub_space,
                            [self.names[i] for i in idx])

    def __repr__(self):
        return f"CoveringPair({[self.space.names(w) for w in self.opens]}, sub={sorted(self.sub_index)})"


def sort_with_sign(t: Sequence[int]):
    """(sorted tuple, sign of the sorting permutation), or (None, 0) on a repeat."""
    if len(set(t)) != len(t):
        return None, 0
    t = list(t)
    sign = 1
    for i in range(len(t)):
        for j in range(len(t) - 1 - i):
            if t[j] > t[j + 1]:
                t[j], t[j + 1] = t[j + 1], t[j]
                sign = -sign
    return tuple(t), sign


@dataclass(frozen=True)
class Block:
    q1: int
    q2: int
    t: tuple
    offset: int
    dim: int


class CechComplexData:
    """Double complex C^{q1}(W, W'; K^{q2}) and its total complex."""

    def __init__(self, pair: CoveringPair, k: SheafComplex, mode: str = ALTERNATING, max_q1: int | None = None):
        if mode not in (ALTERNATING, FULL):
            raise ValidationError("cochain mode", f"unknown mode {mode!r}")
        self.pair = pair
        self.k = k
        self.mode = mode
        n = pair.size
        if mode == ALTERNATING:
            self.q1_max = n - 1 if max_q1 is None else min(max_q1, n - 1)
        else:
            self.q1_max = 3 if max_q1 is None else max_q1
        self.tuples = {}
        for q1 in range(self.q1_max + 1):
            it = combinations(range(n), q1 + 1) if mode == ALTERNATING else product(range(n), repeat=q1 + 1)
            self.tuples[q1] = [t for t in it if not pair.in_sub(t)]
        self.top = self.q1_max + k.top
        self.blocks = []
        self.index = []
        for q in range(self.top + 1):
            off, bl, ix = 0, [], {}
            for q1 in range(self.q1_max + 1):
                q2 = q - q1
                if not 0 <= q2 <= k.top:
                    continue
                for t in self.tuples[q1]:
                    dim = self.section_space(q2, t).dim
                    b = Block(q1, q2, t, off, dim)
                    bl.append(b)
                    ix[(q1, t)] = b
                    off += dim
            self.blocks.append(bl)
            self.index.append(ix)
        self.total = Complex(0, [self.dim(q) for q in range(self.top + 1)],
                             {q: self._total_d(q) for q in range(self.top)})

    # layout

    def dim(self, q: int) -> int:
        if not 0 <= q <= self.top:
            return 0
        return sum(b.dim for b in self.blocks[q])

    def section_space(self, q2: int, t: Sequence[int]):
        return self.k.terms[q2].sections(self.pair.intersection(t))

    def block(self, q: int, q1: int, t: Sequence[int]) -> Block | None:
        if not 0 <= q <= self.top:
            return None
        return self.index[q].get((q1, tuple(t)))

    def components(self, q: int, vec: Sequence) -> dict:
        return {(b.q1, b.t): tuple(vec[b.offset:b.offset + b.dim]) for b in self.blocks[q]}

    def assemble(self, q: int, parts: Mapping) -> tuple:
        vec = [ZERO] * self.dim(q)
        for key, vals in parts.items():
            b = self.index[q].get((key[0], tuple(key[1])))
            if b is None:
                if any(vals):
                    raise ValidationError("cochain layout", f"no component {key} in degree {q}")
                continue
            vec[b.offset:b.offset + b.dim] = list(vals)
        return tuple(vec)

    def valid_degrees(self) -> range:
        """Total degrees whose cohomology is unaffected by truncating the Čech direction."""
        if self.mode == ALTERNATING:
            return range(self.top + 1)
        return range(min(self.q1_max, self.top + 1))

    def cohomology_dims(self) -> tuple:
        return tuple(self.total.cohomology(q).dim for q in self.valid_degrees())

    def double_dims(self) -> dict:
        out = {}
        for q in range(self.top + 1):
            for b in self.blocks[q]:
                out[(b.q1, b.q2)] = out.get((b.q1, b.q2), 0) + b.dim
        return out

    # differentials

    def _faces(self, t: tuple):
        for nu in range(len(t)):
            yield nu, t[:nu] + t[nu + 1:]

    def _restrict(self, q2: int, src_t, tgt_t) -> Matrix:
        return self.k.terms[q2].restriction(self.pair.intersection(src_t), self.pair.intersection(tgt_t))

    def _place(self, entries: dict, m: Matrix, r0: int, c0: int, sign: int = 1) -> None:
        for i, row in enumerate(m.sparse_rows()):
            for j, v in row:
                key = (r0 + i, c0 + j)
                entries[key] = entries.get(key, ZERO) + sign * v

    def _cech_entries(self, q: int, entries: dict, only_q2: int | None = None) -> None:
        for tb in self.blocks[q + 1]:
            if tb.q1 == 0 or (only_q2 is not None and tb.q2 != only_q2):
                continue
            for nu, face in self._faces(tb.t):
                sb = self.index[q].get((tb.q1 - 1, face))
                if sb is None or not sb.dim or not tb.dim:
                    continue
                self._place(entries, self._restrict(tb.q2, face, tb.t), tb.offset, sb.offset, (-1) ** nu)

    def _total_d(self, q: int) -> Matrix:
        entries = {}
        self._cech_entries(q, entries)
        for sb in self.blocks[q]:
            if sb.q2 >= self.k.top or not sb.dim:
                continue
            tb = self.index[q + 1].get((sb.q1, sb.t))
            if tb is None or not tb.dim:
                continue
            m = self.k.diffs[sb.q2].on_sections(self.pair.intersection(sb.t))
            self._place(entries, m, tb.offset, sb.offset, -1 if sb.q1 % 2 else 1)
        return Matrix.from_sparse(self.dim(q + 1), self.dim(q), {k: v for k, v in entries.items() if v})

    def cech_part(self, q: int) -> Matrix:
        """The δ̌ summand of D in total degree q."""
        entries = {}
        self._cech_entries(q, entries)
        return Matrix.from_sparse(self.dim(q + 1), self.dim(q), {k: v for k, v in entries.items() if v})

    def d_part(self, q: int) -> Matrix:
        return self.total.d(q) - self.cech_part(q)

    def absolute(self) -> "CechComplexData":
        return CechComplexData(self.pair.absolute(), self.k, self.mode, self.q1_max)

    def cochain_value(self, q: int, vec: Sequence, q1: int, t: Sequence[int]) -> tuple:
        """Component at an arbitrary ordered tuple, extended antisymmetrically in alternating mode."""
        q2 = q - q1
        dim = self.section_space(q2, t).dim if 0 <= q2 <= self.k.top else 0
        if self.mode == FULL:
            b = self.block(q, q1, t)
            return tuple(vec[b.offset:b.offset + b.dim]) if b else (ZERO,) * dim
        s, sign = sort_with_sign(t)
        b = self.block(q, q1, s) if s is not None else None
        if b is None:
            return (ZERO,) * dim
        return tuple(sign * v for v in vec[b.offset:b.offset + b.dim])


def cech_complex(pair: CoveringPair, s: Sheaf, mode: str = ALTERNATING, max_q1: int | None = None) -> CechComplexData:
    return CechComplexData(pair, SheafComplex.single(s), mode, max_q1)


def total_complex(pair: CoveringPair, k: SheafComplex, mode: str = ALTERNATING,
                  max_q1: int | None = None) -> CechComplexData:
    return CechComplexData(pair, k, mode, max_q1)


def _coefficient(k) -> SheafComplex:
    return k if isinstance(k, SheafComplex) else SheafComplex.single(k)


# --- maps between Čech complexes ---------------------------------------------

def pullback(src: CechComplexData, tgt: CechComplexData, index_map: Sequence[int]) -> ChainMap:
    """Cochain map induced by j -> index_map[j] with W^tgt_j inside W^src_{index_map[j]}.

    Both complexes must share the coefficient complex.  Components are
    restricted to the smaller intersections; in alternating mode the image
    tuple is sorted with its sign and repeated indices give zero.
    """
    if src.k is not tgt.k and src.k.terms != tgt.k.terms:
        raise ValidationError("same coefficients", "pullback needs one coefficient complex")
    for j, i in enumerate(index_map):
        if not tgt.pair.opens[j] <= src.pair.opens[i]:
            raise ContainmentError(f"member {j} is not inside member {i} of the source cover")
    comps = {}
    for q in range(tgt.top + 1):
        entries = {}
        for tb in tgt.blocks[q]:
            mt = tuple(index_map[j] for j in tb.t)
            sign = 1
            if src.mode == ALTERNATING:
                mt, sign = sort_with_sign(mt)
                if mt is None:
                    continue
            sb = src.block(q, tb.q1, mt)
            if sb is None or not sb.dim or not tb.dim:
                continue
            m = src.k.terms[tb.q2].restriction(src.pair.intersection(mt), tgt.pair.intersection(tb.t))
            src._place(entries, m, tb.offset, sb.offset, sign)
        comps[q] = Matrix.from_sparse(tgt.dim(q), src.dim(q), {k: v for k, v in entries.items() if v})
    return ChainMap(src.total, tgt.total, comps)


def phi_cover(data: CechComplexData) -> ChainMap:
    """K(base, X') -> total complex, restricting a section to each member."""
    pair, k = data.pair, data.k
    sc = k.sections_complex(pair.base, pair.sub_space)
    comps = {}
    for q in range(min(k.top, data.top) + 1):
        entries = {}
        for tb in data.blocks[q]:
            if tb.q1 != 0 or not tb.dim:
                continue
            m = k.terms[q].restriction(pair.base, pair.intersection(tb.t), pair.sub_space, ())
            data._place(entries, m, tb.offset, 0)
        comps[q] = Matrix.from_sparse(data.dim(q), sc.complex.dim(q), entries)
    return ChainMap(sc.complex, data.total, comps)


@dataclass
class CoverPsi:
    sheaf: Sheaf
    inclusion: SheafMorphism
    cech: CechComplexData
    map: ChainMap


def psi_cover(data: CechComplexData) -> CoverPsi:
    """C(W, W'; S) -> total complex through S = ker d^0 inside K^0."""
    k = data.k
    if k.top >= 1:
        s, iota = kernel_inclusion(k.d(0))
    else:
        s, iota = k.terms[0], SheafMorphism.identity(k.terms[0])
    sd = CechComplexData(data.pair, SheafComplex.single(s), data.mode, data.q1_max)
    comps = {}
    for q in range(sd.top + 1):
        entries = {}
        for sb in sd.blocks[q]:
            tb = data.block(q, sb.q1, sb.t)
            if tb is None or not sb.dim:
                continue
            data._place(entries, iota.on_sections(data.pair.intersection(sb.t)), tb.offset, sb.offset)
        comps[q] = Matrix.from_sparse(data.dim(q), sd.dim(q), entries)
    return CoverPsi(s, iota, sd, ChainMap(sd.total, data.total, comps))


def good_cover_defects(pair: CoveringPair, k, bound: int | None = None) -> list:
    """(tuple, q1, q2) with H^{q2}(W_t; K^{q1}) nonzero for some q2 >= 1."""
    from .godement import godement_resolve, rel_cohomology
    k = _coefficient(k)
    bad = []
    for q1, term in enumerate(k.terms):
        res = godement_resolve(term, bound)
        for r in range(1, pair.size + 1):
            for t in combinations(range(pair.size), r):
                w = pair.intersection(t)
                if not w:
                    continue
                dims = rel_cohomology(term, (), bound, u=w, resolution=res).dims
                for q2 in range(1, len(dims)):
                    if dims[q2]:
                        bad.append((t, q1, q2))
    return bad


def resolution_defects(pair: CoveringPair, k: SheafComplex) -> list:
    """(tuple, q) where the section complex over W_t has cohomology in degree q >= 1."""
    bad = []
    for r in range(1, pair.size + 1):
        for t in combinations(range(pair.size), r):
            w = pair.intersection(t)
            if not w:
                continue
            c = k.sections_complex(w).complex
            for q in range(1, k.top + 1):
                if c.cohomology(q).dim:
                    bad.append((t, q))
    return bad


def cover_comparison(data: CechComplexData) -> VerificationReport:
    """Report on phi, psi and chi = psi^{-1} phi for a total complex."""
    rep = VerificationReport("cover comparison")
    phi = phi_cover(data)
    ps = psi_cover(data)
    degs = data.valid_degrees()
    phi_ok = all(_iso_at(phi, q) for q in degs)
    psi_ok = all(_iso_at(ps.map, q) for q in degs)
    rep.check("phi is an isomorphism on cohomology", phi_ok)
    rep.check("psi is an isomorphism on cohomology", psi_ok)
    rep.data.update(phi=phi, psi=ps)
    rep.dims["total"] = data.cohomology_dims()
    rep.dims["sections"] = phi.source.betti(0, max(degs, default=0))
    rep.dims["cech of S"] = tuple(ps.cech.total.cohomology(q).dim for q in degs)
    return rep


def _iso_at(phi: ChainMap, q: int) -> bool:
    m = phi.on_cohomology(q)
    return m.rows == m.cols and m.rank() == m.rows


# --- the complete-member homotopy -------------------------------------------

def propsp_homotopy(data: CechComplexData, q: int, xi: Sequence) -> tuple:
    """eta with xi - eps(xi) = D eta when some member equals the base.

    eps(xi) restricts the degree-(0, q) component at that member to every
    member; eta_t = xi_{alpha t}.  Works in the absolute complex: a relative
    cocycle is first included there.  Returns (absolute data, eta).
    """
    pair = data.pair
    full = [i for i, w in enumerate(pair.opens) if w == pair.base]
    if not full:
        raise NoFullSet("no member of the cover equals the whole space")
    alpha = full[0]
    xi = tuple(xi)
    if any(data.total.d(q) @ xi):
        raise NotCocycle(f"input is not a cocycle in degree {q}")
    ab = data if not pair.sub_index else data.absolute()
    if ab is not data:
        xi = pullback(data, ab, range(pair.size))[q] @ xi
    parts = {}
    for b in ab.blocks[q - 1] if q >= 1 else []:
        parts[(b.q1, b.t)] = ab.cochain_value(q, xi, b.q1 + 1, (alpha,) + b.t)
    eta = ab.assemble(q - 1, parts) if q >= 1 else ()
    s = ab.cochain_value(q, xi, 0, (alpha,))
    eps = {}
    for b in ab.blocks[q]:
        if b.q1 == 0:
            m = ab._restrict(b.q2, (alpha,), b.t)
            eps[(0, b.t)] = m @ s
    lhs = tuple(a - e for a, e in zip(xi, ab.assemble(q, eps)))
    rhs = ab.total.d(q - 1) @ eta if q >= 1 else (ZERO,) * ab.dim(q)
    if tuple(lhs) != tuple(rhs):
        raise ValidationError("homotopy identity", "xi - eps(xi) differs from D eta")
    return ab, eta


# --- two-set relative complexes ----------------------------------------------

def _two_set_pair(k: SheafComplex, v1, x_prime) -> CoveringPair:
    sp = k.space
    v1, x_prime = frozenset(v1), frozenset(x_prime)
    if v1 | x_prime != sp.whole:
        raise NotCovering("V1 and X' do not cover the space")
    return CoveringPair(sp, [x_prime, v1], {0}, names=("X'", "V1"))


def two_set_relative_data(k, v1, x_prime) -> CechComplexData:
    k = _coefficient(k)
    return CechComplexData(_two_set_pair(k, v1, x_prime), k)


def two_set_relative(k, v1, x_prime) -> Complex:
    """K(V1) + K[-1](V1 ∩ X') with D(a, b) = (da, a| - db)."""
    return two_set_relative_data(k, v1, x_prime).total


def special_case_two_check(data: CechComplexData) -> dict:
    """Compare D on a two-set absolute cover with (dξ0, dξ1, ξ1 - ξ0 - dξ01); returns failing degrees."""
    if data.pair.size != 2 or data.pair.sub_index or data.mode != ALTERNATING:
        raise ValidationError("two-set absolute cover", "formula check needs an absolute two-set cover")
    k, pair = data.k, data.pair
    w0, w1, w01 = pair.opens[0], pair.opens[1], pair.intersection((0, 1))
    bad = {}
    for q in range(data.top):
        sec = lambda p, u: k.term(p).sections(u).dim
        d = lambda p, u: k.d(p).on_sections(u)
        rows = [sec(q + 1, w0), sec(q + 1, w1), sec(q, w01)]
        cols = [sec(q, w0), sec(q, w1), sec(q - 1, w01) if q >= 1 else 0]
        grid = [[d(q, w0), None, None],
                [None, d(q, w1), None],
                [-k.term(q).restriction(w0, w01), k.term(q).restriction(w1, w01),
                 -d(q - 1, w01) if q >= 1 else None]]
        formula = Matrix.block(grid, rows, cols)
        if formula != data.total.d(q):
            bad[q] = first_difference(formula, data.total.d(q))
    return bad


@dataclass
class RelativeSections:
    data: CechComplexData
    dims: tuple
    les: LongExactSequence
    connecting: dict          # q -> H^q(K(X')) -> H^{q+1}_D(X, X')
    restriction: ChainMap
    projection: ChainMap


def rel_sections_cohomology(k, x_prime) -> RelativeSections:
    """H_D(X, X') from the two-set complex with V1 = X, with its long exact sequence."""
    k = _coefficient(k)
    sp = k.space
    x_prime = frozenset(x_prime)
    data = two_set_relative_data(k, sp.whole, x_prime)
    single = CechComplexData(CoveringPair(sp, [sp.whole]), k)
    proj = pullback(data, single, [1])                       # (a, b) -> a, landing in K(X)
    proj = ChainMap(data.total, k.sections_complex(sp.whole).complex, {q: proj[q] for q in range(data.top + 1)})
    res = restriction_chain_map(k, sp.whole, (), x_prime, ())
    sub = res.target
    conn = {}
    for q in range(-1, k.top + 1):
        h = sub.cohomology(q)
        target = data.total.cohomology(q + 1)
        if not h.dim or not target.dim:
            conn[q] = Matrix.zeros(target.dim, h.dim)
            continue
        b = data.block(q + 1, 1, (0, 1))
        cols = []
        for c in h.reps.columns():
            vec = [ZERO] * data.dim(q + 1)
            vec[b.offset:b.offset + b.dim] = [-v for v in c]
            cols.append(vec)
        conn[q] = target.projector @ Matrix.from_columns(cols, data.dim(q + 1))
    nodes, maps = [], []
    top = data.top
    for q in range(0, top + 1):
        if nodes:
            maps.append(conn[q - 1])
        nodes.append(LesNode("D(X,X')", q, data.total.cohomology(q).dim))
        maps.append(proj.on_cohomology(q))
        nodes.append(LesNode("d(X)", q, proj.target.cohomology(q).dim))
        maps.append(res.on_cohomology(q))
        nodes.append(LesNode("d(X')", q, sub.cohomology(q).dim))
    les = LongExactSequence(nodes, maps)
    dims = tuple(data.total.cohomology(q).dim for q in range(top + 1))
    return RelativeSections(data, dims, les, conn, res, proj)


def relative_sections_report(k, x_prime) -> VerificationReport:
    from .godement import open_embedding_complex
    k = _coefficient(k)
    rs = rel_sections_cohomology(k, x_prime)
    rep = VerificationReport("relative cohomology of sections")
    rep.check("sequence of the pair is exact", rs.les.is_exact, rs.les.witness())
    e = open_embedding_complex(k, x_prime)
    rep.check("two-set complex equals the complex of the embedding", rs.data.total == e.complex)
    for q, delta in rs.connecting.items():
        beta = e.beta_star.on_cohomology(q + 1)
        rep.check(f"connecting map is -beta* (degree {q})", delta == -beta, first_difference(delta, -beta))
    rep.dims["H_D(X,X')"] = rs.dims
    return rep


def verify_propuni(k, v1, x_prime) -> VerificationReport:
    """Restricting from {X', X} to {X', V1} preserves the relative cohomology of sections."""
    k = _coefficient(k)
    sp = k.space
    big = two_set_relative_data(k, sp.whole, x_prime)
    small = two_set_relative_data(k, v1, x_prime)
    absolute = CechComplexData(small.pair.absolute(), k)
    phi = phi_cover(absolute)
    if not is_quasi_iso(phi):
        bad = [q for q in range(absolute.top + 1) if not _iso_at(phi, q)]
        raise HypothesisFailed("sections over the cover {X', V1} do not compute the sections cohomology of X",
                               witness={"degrees": bad})
    rep = VerificationReport("restriction of two-set covers")
    r = pullback(big, small, [0, 1])
    rep.check("restriction is a quasi-isomorphism", is_quasi_iso(r))
    rep.dims["X"] = big.cohomology_dims()
    rep.dims["V"] = small.cohomology_dims()
    return rep


def excision(k, s_closed, v) -> VerificationReport:
    k = _coefficient(k)
    sp = k.space
    s_closed, v = frozenset(s_closed), frozenset(v)
    if not sp.is_closed(s_closed):
        raise NotClosed(f"{sp.names(s_closed)} is not closed")
    if not s_closed <= v:
        raise NotContaining(f"{sp.names(v)} does not contain {sp.names(s_closed)}")
    if not sp.is_open(v):
        raise ValidationError("open sets are up-sets", f"{sp.names(v)} is not open")
    rest = sp.whole - s_closed
    rep = VerificationReport("excision")
    cover = CechComplexData(CoveringPair(sp, [rest, v], {0}), k)
    kv, inc = restrict_complex(k, v)
    sub = inc.source
    local = two_set_relative(kv, sub.whole, inc.preimage(v - s_closed))
    rep.check("cochains over the cover equal the cochains of (V, V - S)", cover.total == local)
    big = two_set_relative_data(k, sp.whole, rest)
    r = pullback(big, cover, [0, 1])
    rep.check("restriction to the cover is a quasi-isomorphism", is_quasi_iso(r))
    h_x = big.cohomology_dims()
    h_v = tuple(local.cohomology(q).dim for q in range(local.hi + 1))
    n = max(len(h_x), len(h_v))
    pad = lambda h: h + (0,) * (n - len(h))
    rep.check("dimensions agree", pad(h_x) == pad(h_v), {"X": h_x, "V": h_v})
    rep.dims["H_D(X, X-S)"] = h_x
    rep.dims["H_D(V, V-S)"] = h_v
    return rep


@dataclass
class TripleSequence:
    les: LongExactSequence
    connecting: dict
    formula_agrees: bool
    dims: list


def triple_les(k, x_prime, x_second) -> TripleSequence:
    """Exact sequence of (X, X', X'') built on the cover {X'', X', X}."""
    k = _coefficient(k)
    sp = k.space
    x_prime, x_second = frozenset(x_prime), frozenset(x_second)
    if not (x_second <= x_prime):
        raise ContainmentError("X'' is not inside X'")
    for u in (x_prime, x_second):
        if not sp.is_open(u):
            raise ValidationError("open sets are up-sets", f"{sp.names(u)} is not open")
    opens = [x_second, x_prime, sp.whole]
    a = CechComplexData(CoveringPair(sp, opens, {0, 1}), k)            # (X, X')
    b = CechComplexData(CoveringPair(sp, opens, {0}), k)               # (X, X'')
    c = CechComplexData(CoveringPair(sp, opens[:2], {0}, base=x_prime), k)   # (X', X'')
    inc = pullback(a, b, [0, 1, 2])
    proj = pullback(b, c, [0, 1])
    ses = les_from_ses(inc, proj, labels=("(X,X')", "(X,X'')", "(X',X'')"))
    ok = True
    for q, delta in ses.connecting.items():
        hc = c.total.cohomology(q - 1)
        ha = a.total.cohomology(q)
        if not hc.dim or not ha.dim:
            continue
        cols = []
        for rep in hc.reps.columns():
            parts = c.components(q - 1, rep)
            th1 = parts.get((0, (1,)), ())
            th01 = parts.get((1, (0, 1)), ())
            cols.append(a.assemble(q, {(1, (1, 2)): [-x for x in th1], (2, (0, 1, 2)): th01}))
        formula = ha.projector @ Matrix.from_columns(cols, a.dim(q))
        ok = ok and formula == delta
    return TripleSequence(ses.les, ses.connecting, ok, ses.les.dims())


# --- discrete partitions of unity ------------------------------------------

class DiscretePartitionOfUnity:
    """rho_alpha keeps the product coordinates owned by points assigned to alpha."""

    def __init__(self, pair: CoveringPair, assign: Mapping | None = None):
        sp = pair.space
        self.pair = pair
        a = {}
        for x in sorted(pair.base):
            a[x] = min(i for i, w in enumerate(pair.opens) if x in w)
        for x, i in (assign or {}).items():
            x = sp._idx(x)
            if x not in pair.base:
                raise ValidationError("assignment", f"{sp.labels[x]} is not covered")
            if x not in pair.opens[i]:
                raise ValidationError("every point lies in its assigned set",
                                      f"{sp.labels[x]} is not in member {i}")
            a[x] = i
        self.assign = a

    def extend(self, sheaf: Sheaf, alpha: int, src, tgt, coords: Sequence) -> tuple:
        """rho_alpha times a section over src, extended by zero to tgt (section coordinates)."""
        if sheaf.owners is None:
            raise NotProductType("the partition of unity acts only on product-of-stalks sheaves")
        pos = sheaf.product_positions()
        s_src = sheaf.sections(src)
        s_tgt = sheaf.sections(tgt)
        amb = s_src.embedding @ tuple(coords) if s_src.dim else (ZERO,) * s_src.ambient_dim
        vec = [ZERO] * s_tgt.ambient_dim
        for x in s_tgt.points:
            for c, y in enumerate(sheaf.owners[x]):
                if self.assign.get(y) == alpha and y in s_src.offsets:
                    vec[s_tgt.offsets[x] + c] = amb[s_src.offsets[y] + pos[x][c]]
        if not s_tgt.dim:
            return ()
        return tuple(s_tgt.coords(Matrix.from_columns([vec], s_tgt.ambient_dim)).column(0))


def _require_product(k: SheafComplex, degrees: Iterable[int]):
    for q in degrees:
        if 0 <= q <= k.top and k.terms[q].owners is None:
            raise NotProductType(f"term {q} is not a product-of-stalks sheaf")


def pou_coboundary(data: CechComplexData, pou: DiscretePartitionOfUnity, q: int, sigma: Sequence) -> tuple:
    """tau with δ̌ tau = sigma, tau_t = sum over alpha of rho_alpha sigma_{alpha t}."""
    if data.k.top != 0:
        raise ValidationError("single sheaf", "expects the Čech complex of one sheaf")
    if data.pair.sub_index:
        raise ValidationError("absolute cover", "the contraction is defined on absolute covers")
    s = data.k.terms[0]
    if s.owners is None:
        raise NotProductType("the partition of unity acts only on product-of-stalks sheaves")
    sigma = tuple(sigma)
    if q < 1:
        raise ValidationError("positive degree", "degree-0 cocycles are global sections")
    if any(data.total.d(q) @ sigma):
        raise NotCocycle(f"sigma is not a cocycle in degree {q}")
    parts = {}
    for b in data.blocks[q - 1]:
        acc = [ZERO] * b.dim
        for alpha in range(data.pair.size):
            t = (alpha,) + b.t
            val = data.cochain_value(q, sigma, q, t)
            if not any(val):
                continue
            ext = pou.extend(s, alpha, data.pair.intersection(t), data.pair.intersection(b.t), val)
            acc = [x + y for x, y in zip(acc, ext)]
        parts[(b.q1, b.t)] = acc
    tau = data.assemble(q - 1, parts)
    if tuple(data.total.d(q - 1) @ tau) != sigma:
        raise ValidationError("δ̌ tau = sigma", "contraction failed")
    return tau


def _two_set_parts(data: CechComplexData, q: int, xi):
    if data.pair.size != 2 or data.pair.sub_index or data.mode != ALTERNATING:
        raise ValidationError("two-set absolute cover", "expects an absolute alternating two-set cover")
    c = data.components(q, xi)
    return c.get((0, (0,)), ()), c.get((0, (1,)), ()), c.get((1, (0, 1)), ())


def propinvtwo_inverse(data: CechComplexData, pou: DiscretePartitionOfUnity, q: int, xi: Sequence) -> tuple:
    """Glue xi0 + d(rho1 xi01) on W0 and xi1 - d(rho0 xi01) on W1 into a global cocycle."""
    k, pair = data.k, data.pair
    xi = tuple(xi)
    if any(data.total.d(q) @ xi):
        raise NotCocycle(f"xi is not a cocycle in degree {q}")
    x0, x1, x01 = _two_set_parts(data, q, xi)
    w0, w1, w01 = pair.opens[0], pair.opens[1], pair.intersection((0, 1))
    glued0, glued1 = tuple(x0), tuple(x1)
    if q >= 1 and x01 and any(x01):
        _require_product(k, [q - 1])
        t = k.terms[q - 1]
        e1 = pou.extend(t, 1, w01, w0, x01)
        e0 = pou.extend(t, 0, w01, w1, x01)
        glued0 = tuple(a + b for a, b in zip(x0, k.d(q - 1).on_sections(w0) @ e1))
        glued1 = tuple(a - b for a, b in zip(x1, k.d(q - 1).on_sections(w1) @ e0))
    term = k.terms[q]
    if term.restriction(w0, w01) @ glued0 != term.restriction(w1, w01) @ glued1:
        raise ValidationError("the two local expressions agree on the overlap")
    s0, s1 = term.sections(w0), term.sections(w1)
    a0 = s0.embedding @ glued0 if s0.dim else (ZERO,) * s0.ambient_dim
    a1 = s1.embedding @ glued1 if s1.dim else (ZERO,) * s1.ambient_dim
    parts = {x: a0[s0.offsets[x]:s0.offsets[x] + term.dim(x)] for x in s0.points}
    parts.update({x: a1[s1.offsets[x]:s1.offsets[x] + term.dim(x)] for x in s1.points})
    whole = term.sections(pair.base)
    amb = term.section_from_stalks(pair.base, parts)
    s = tuple(whole.coords(Matrix.from_columns([amb], whole.ambient_dim)).column(0)) if whole.dim else ()
    if q < k.top and any(k.d(q).on_sections(pair.base) @ s):
        raise ValidationError("glued section is closed")
    return s


def bq_simplify(data: CechComplexData, pou: DiscretePartitionOfUnity, q: int, xi: Sequence) -> tuple:
    """(eta0, eta1) with xi = (d eta0, d eta1, eta1 - eta0) for a coboundary xi."""
    k, pair = data.k, data.pair
    xi = tuple(xi)
    _two_set_parts(data, q, xi)
    eta = solve(data.total.d(q - 1), xi) if q >= 1 else None
    if eta is None:
        raise NotCoboundary(f"xi is not a coboundary in degree {q}")
    e0, e1, e01 = _two_set_parts(data, q - 1, eta)
    w0, w1, w01 = pair.opens[0], pair.opens[1], pair.intersection((0, 1))
    if q >= 2 and e01 and any(e01):
        _require_product(k, [q - 2])
        t = k.terms[q - 2]
        e0 = tuple(a + b for a, b in zip(e0, k.d(q - 2).on_sections(w0) @ pou.extend(t, 1, w01, w0, e01)))
        e1 = tuple(a - b for a, b in zip(e1, k.d(q - 2).on_sections(w1) @ pou.extend(t, 0, w01, w1, e01)))
    x0, x1, x01 = _two_set_parts(data, q, xi)
    d0 = k.d(q - 1).on_sections(w0) @ e0 if e0 else ()
    d1 = k.d(q - 1).on_sections(w1) @ e1 if e1 else ()
    term = k.terms[q - 1]
    diff = tuple(a - b for a, b in zip(term.restriction(w1, w01) @ e1, term.restriction(w0, w01) @ e0))
    if tuple(d0) != tuple(x0) or tuple(d1) != tuple(x1) or diff != tuple(x01):
        raise ValidationError("simplified primitive", "(d eta0, d eta1, eta1 - eta0) differs from xi")
    return tuple(e0), tuple(e1)


# --- comparison of relative section cohomology with a cover -------------------

def theorem_32rel_map(k, pair: CoveringPair, mode: str = ALTERNATING) -> tuple[ChainMap, VerificationReport]:
    """K(V*, V') -> K(W, W'): 0 on I', xi1 on I - I', signed xi01 on mixed pairs."""
    k = _coefficient(k)
    for q, t in enumerate(k.terms):
        if t.owners is None:
            raise HypothesisFailed(f"term {q} has no partition-of-unity action", witness={"term": q})
    DiscretePartitionOfUnity(pair)
    sp = k.space
    src = two_set_relative_data(k, sp.whole, pair.sub_space)
    tgt = CechComplexData(pair, k, mode)
    m = pullback(src, tgt, [0 if i in pair.sub_index else 1 for i in range(pair.size)])
    rep = VerificationReport("comparison of the pair with a cover")
    degs = tgt.valid_degrees()
    rep.check("map induces an isomorphism", all(_iso_at(m, q) for q in degs))
    rep.check("cover of X computes the sections cohomology", all(_iso_at(phi_cover(tgt.absolute()), q) for q in degs))
    if pair.sub_index:
        sub = CechComplexData(pair.sub_cover(), k, mode)
        rep.check("cover of X' computes the sections cohomology",
                  all(_iso_at(phi_cover(sub), q) for q in sub.valid_degrees()))
    rep.dims["H_D(X,X')"] = src.cohomology_dims()
    rep.dims["H(W,W')"] = tgt.cohomology_dims()
    return m, rep


@dataclass
class Correspondence:
    chain: tuple
    components: dict       # q1 -> component vectors keyed by tuple
    lines: dict            # description -> bool


def correspondence_chain(data: CechComplexData, q: int, s: Sequence, sigma: Sequence) -> Correspondence | None:
    """chi with phi(s) - psi(sigma) = D chi, or None when the classes differ."""
    s, sigma = tuple(s), tuple(sigma)
    phi = phi_cover(data)
    ps = psi_cover(data)
    if any(phi.source.d(q) @ s):
        raise NotCocycle("s is not closed")
    if any(ps.cech.total.d(q) @ sigma):
        raise NotCocycle("sigma is not a Čech cocycle")
    rhs = tuple(a - b for a, b in zip(phi[q] @ s, ps.map[q] @ sigma))
    if q == 0:
        return Correspondence((), {}, {"s - sigma = 0": not any(rhs)}) if not any(rhs) else None
    chi = solve(data.total.d(q - 1), rhs)
    if chi is None:
        return None
    comps = {}
    for b in data.blocks[q - 1]:
        comps.setdefault(b.q1, {})[b.t] = tuple(chi[b.offset:b.offset + b.dim])
    cech = data.cech_part(q - 1) @ chi
    dk = data.d_part(q - 1) @ chi
    lines = {}
    for b in data.blocks[q]:
        got_c = cech[b.offset:b.offset + b.dim]
        got_d = dk[b.offset:b.offset + b.dim]
        want = rhs[b.offset:b.offset + b.dim]
        lines[(b.q1, b.t)] = tuple(x + y for x, y in zip(got_c, got_d)) == tuple(want)
    return Correspondence(tuple(chi), comps, lines)


def verify_leray(pair: CoveringPair, s: Sheaf, bound: int | None = None, mode: str = ALTERNATING) -> VerificationReport:
    """Čech cohomology of an acyclic cover agrees with sheaf cohomology."""
    from .godement import godement_resolve, rel_cohomology
    sp = pair.space
    bad = good_cover_defects(pair, s, bound)
    if bad:
        t, _, q2 = bad[0]
        raise HypothesisFailed(f"H^{q2} of the intersection {sp.names(pair.intersection(t))} is nonzero",
                               witness={"tuple": list(t), "open": sp.names(pair.intersection(t)), "degree": q2})
    res = godement_resolve(s, bound)
    c = res.as_complex()
    data = CechComplexData(pair, c, mode)
    rep = VerificationReport("acyclic cover comparison")
    phi = phi_cover(data)
    ps = psi_cover(data)
    degs = [q for q in data.valid_degrees() if q < res.bound]
    rep.check("phi is an isomorphism", all(_iso_at(phi, q) for q in degs))
    rep.check("psi is an isomorphism", all(_iso_at(ps.map, q) for q in degs))
    h_cech = tuple(ps.cech.total.cohomology(q).dim for q in degs)
    h_sheaf = rel_cohomology(s, pair.sub_space, res.bound, u=pair.base, resolution=res).dims[:len(degs)]
    pad = lambda h: tuple(h) + (0,) * (len(degs) - len(h))
    rep.check("dimensions agree", pad(h_cech) == pad(h_sheaf), {"cech": h_cech, "sheaf": h_sheaf})
    rep.dims["Čech"] = pad(h_cech)
    rep.dims["sheaf"] = pad(h_sheaf)
    return rep

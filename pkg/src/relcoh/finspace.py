"""Finite T0 spaces as posets, and sheaves of rational spaces on them.

A point x lies below y (x <= y) when every open set containing x contains
y, so open sets are up-sets and the smallest open neighbourhood of x is
U_x = {y : x <= y}.  A sheaf is then a covariant functor on the poset:
the stalk F_x is F(U_x) and r_{x->y}: F_x -> F_y is restriction from U_x to
the smaller open U_y.  Sections over an open U are compatible tuples.

Points are indexed 0..n-1 internally and carry string labels.  Ambient
coordinates over an open U concatenate the stalks of the points of U in
increasing index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ContainmentError, NotContinuous, NotMorphism, NotOpen, ShapeError, ValidationError
from .homalg import ChainMap, Complex
from .ratlin import Matrix, Subspace, kernel, quotient, ZERO

OpenSet = frozenset


class FinSpace:
    def __init__(self, labels: Sequence[str], relations: Iterable[tuple] = ()):
        self.labels = tuple(str(l) for l in labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("point labels are unique")
        self.index = {l: i for i, l in enumerate(self.labels)}
        n = len(self.labels)
        above = [{i} for i in range(n)]
        for x, y in relations:
            above[self._idx(x)].add(self._idx(y))
        changed = True
        while changed:
            changed = False
            for i in range(n):
                new = set().union(*(above[j] for j in above[i]))
                if new != above[i]:
                    above[i] = new
                    changed = True
        for i in range(n):
            for j in above[i]:
                if j != i and i in above[j]:
                    raise ValidationError("order is antisymmetric (T0)",
                                          f"{self.labels[i]} and {self.labels[j]} are indistinguishable")
        self.up = tuple(frozenset(a) for a in above)
        self.down = tuple(frozenset(j for j in range(n) if i in self.up[j]) for i in range(n))
        covers = []
        for x in range(n):
            for y in sorted(self.up[x] - {x}):
                if not any(z != x and z != y and y in self.up[z] for z in self.up[x]):
                    covers.append((x, y))
        self.covers = tuple(covers)
        self.successors = tuple(tuple(y for (a, y) in covers if a == x) for x in range(n))
        self.whole = frozenset(range(n))
        self._opens = None

    def _idx(self, p) -> int:
        if isinstance(p, int) and not isinstance(p, bool):
            if not 0 <= p < len(self.labels):
                raise ValidationError("points exist", f"index {p}")
            return p
        try:
            return self.index[str(p)]
        except KeyError:
            raise ValidationError("points exist", f"unknown point {p!r}") from None

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def leq(self, x, y) -> bool:
        return self._idx(y) in self.up[self._idx(x)]

    def minimal_open(self, x) -> frozenset:
        return self.up[self._idx(x)]

    @property
    def height(self) -> int:
        memo = {}

        def longest(x):
            if x not in memo:
                memo[x] = max((1 + longest(y) for y in self.successors[x]), default=0)
            return memo[x]

        return max((longest(x) for x in range(self.n)), default=0)

    def is_open(self, pts: Iterable[int]) -> bool:
        s = set(pts)
        return all(self.up[x] <= s for x in s)

    def is_closed(self, pts: Iterable[int]) -> bool:
        return self.is_open(self.whole - set(pts))

    def open(self, pts: Iterable) -> frozenset:
        s = frozenset(self._idx(p) for p in pts)
        if not self.is_open(s):
            raise NotOpen(f"{sorted(self.labels[i] for i in s)} is not an up-set")
        return s

    def points(self, pts: Iterable) -> frozenset:
        return frozenset(self._idx(p) for p in pts)

    def names(self, pts: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(pts)]

    def all_opens(self) -> list[frozenset]:
        if self._opens is None:
            found = {frozenset()}
            frontier = [frozenset()]
            while frontier:
                nxt = []
                for s in frontier:
                    for x in range(self.n):
                        if x not in s:
                            t = s | self.up[x]
                            if t not in found:
                                found.add(t)
                                nxt.append(t)
                frontier = nxt
            self._opens = sorted(found, key=lambda s: (len(s), sorted(s)))
        return list(self._opens)

    def topological_order(self) -> list[int]:
        """Points ordered so that x comes before y whenever x < y."""
        return sorted(range(self.n), key=lambda x: (-len(self.up[x]), x))

    def subspace(self, pts: Iterable) -> tuple["FinSpace", "ContinuousMap"]:
        keep = sorted(self._idx(p) for p in pts)
        rel = [(self.labels[x], self.labels[y]) for x in keep for y in keep if y in self.up[x] and x != y]
        sub = FinSpace([self.labels[x] for x in keep], rel)
        return sub, ContinuousMap(sub, self, keep)

    def __eq__(self, other):
        return isinstance(other, FinSpace) and self.labels == other.labels and self.up == other.up

    def __hash__(self):
        return hash((self.labels, self.up))

    def __repr__(self):
        return f"FinSpace({list(self.labels)})"


class ContinuousMap:
    """Order-preserving map of finite spaces (source Y -> target X)."""

    def __init__(self, source: FinSpace, target: FinSpace, mapping: Sequence | Mapping):
        self.source = source
        self.target = target
        if isinstance(mapping, Mapping):
            img = [None] * source.n
            for k, v in mapping.items():
                img[source._idx(k)] = target._idx(v)
            if any(v is None for v in img):
                raise NotContinuous("map is not defined on every point")
        else:
            img = [target._idx(v) for v in mapping]
            if len(img) != source.n:
                raise NotContinuous("map is not defined on every point")
        self.image = tuple(img)
        for (y, y2) in source.covers:
            if not target.leq(self.image[y], self.image[y2]):
                raise NotContinuous(f"{source.labels[y]} <= {source.labels[y2]} is not preserved")

    def __call__(self, y: int) -> int:
        return self.image[y]

    def preimage(self, u: Iterable[int]) -> frozenset:
        u = set(u)
        return frozenset(y for y in range(self.source.n) if self.image[y] in u)

    @classmethod
    def identity(cls, space: FinSpace) -> "ContinuousMap":
        return cls(space, space, list(range(space.n)))

    def compose(self, other: "ContinuousMap") -> "ContinuousMap":
        """self after other."""
        return ContinuousMap(other.source, self.target, [self.image[other.image[z]] for z in range(other.source.n)])


@dataclass(frozen=True)
class SectionSpace:
    """Sections of a sheaf over an open set, optionally vanishing on a smaller open."""
    sheaf: "Sheaf"
    open: frozenset
    vanish: frozenset
    points: tuple
    offsets: dict
    sub: Subspace

    @property
    def dim(self) -> int:
        return self.sub.dim

    @property
    def ambient_dim(self) -> int:
        return self.sub.ambient_dim

    @property
    def embedding(self) -> Matrix:
        return self.sub.basis

    def coords(self, m: Matrix) -> Matrix:
        return self.sub.coords_of(m)

    def stalk_part(self, m: Matrix, x: int) -> Matrix:
        off = self.offsets[x]
        return m.submatrix(off, off + self.sheaf.dim(x), 0, m.cols)


class Sheaf:
    """Sheaf on a finite space given by stalks and restrictions along the order.

    ``res`` maps pairs (x, y) with x < y (usually the covering pairs) to
    matrices F_x -> F_y.  Missing pairs are filled in by composition and
    every pair reachable in two ways is checked to agree.  ``owners`` marks
    product-of-stalks sheaves: owners[x][c] is the point whose stalk the c-th
    coordinate of F_x was copied from.
    """

    def __init__(self, space: FinSpace, stalk_dims: Sequence[int] | Mapping,
                 res: Mapping | None = None, owners: Sequence | None = None, check: bool = True):
        self.space = space
        if isinstance(stalk_dims, Mapping):
            dims = [0] * space.n
            for k, v in stalk_dims.items():
                dims[space._idx(k)] = int(v)
        else:
            dims = [int(v) for v in stalk_dims]
        if len(dims) != space.n or any(d < 0 for d in dims):
            raise ValidationError("stalk dimensions are given for every point")
        self.dims = tuple(dims)
        given = {}
        for (x, y), m in (res or {}).items():
            x, y = space._idx(x), space._idx(y)
            if not isinstance(m, Matrix):
                m = Matrix(m, cols=dims[x])
            if y not in space.up[x]:
                raise ValidationError("restrictions follow the order",
                                      f"{space.labels[x]} is not below {space.labels[y]}")
            if m.shape != (dims[y], dims[x]):
                raise ValidationError("restriction shapes match stalks",
                                      f"{space.labels[x]}->{space.labels[y]} has shape {m.shape}")
            given[(x, y)] = m
        self._res = self._complete(given, check)
        self.owners = tuple(tuple(o) for o in owners) if owners is not None else None
        self._sections = {}
        self._restrictions = {}

    def _complete(self, given: dict, check: bool) -> dict:
        sp = self.space
        full = {}
        for x in sorted(range(sp.n), key=lambda p: (len(sp.up[p]), p)):
            full[(x, x)] = Matrix.identity(self.dims[x])
            for y in sp.successors[x]:
                if (x, y) in given:
                    step = given[(x, y)]
                elif self.dims[x] == 0 or self.dims[y] == 0:
                    step = Matrix.zeros(self.dims[y], self.dims[x])
                else:
                    raise ValidationError("functoriality",
                                          f"missing restriction {sp.labels[x]}->{sp.labels[y]}")
                for z in sp.up[y]:
                    cand = full[(y, z)] @ step
                    old = full.get((x, z))
                    if old is None:
                        full[(x, z)] = cand
                    elif check and old != cand:
                        raise ValidationError("functoriality",
                                              f"paths {sp.labels[x]}->{sp.labels[z]} disagree")
            if check:
                for (a, z), m in given.items():
                    if a == x and full[(x, z)] != m:
                        raise ValidationError("functoriality",
                                              f"given {sp.labels[x]}->{sp.labels[z]} is not the composite")
        return full

    def dim(self, x: int) -> int:
        return self.dims[x]

    def r(self, x: int, y: int) -> Matrix:
        return self._res[(x, y)]

    def res_items(self):
        return self._res.items()

    def is_zero(self) -> bool:
        return not any(self.dims)

    def __eq__(self, other):
        return (isinstance(other, Sheaf) and self.space == other.space and self.dims == other.dims
                and self._res == other._res)

    def __hash__(self):
        return hash((self.space, self.dims))

    def __repr__(self):
        return f"Sheaf(dims={list(self.dims)})"

    # sections

    def layout(self, u: Iterable[int]) -> tuple[tuple, dict, int]:
        pts = tuple(sorted(u))
        offsets, total = {}, 0
        for x in pts:
            offsets[x] = total
            total += self.dims[x]
        return pts, offsets, total

    def sections(self, u: Iterable[int], vanish: Iterable[int] = ()) -> SectionSpace:
        u = frozenset(u)
        vanish = frozenset(vanish)
        key = (u, vanish)
        if key not in self._sections:
            if not vanish <= u:
                raise ContainmentError("vanishing set is not inside the open set")
            pts, offsets, total = self.layout(u)
            rows = []
            for (x, y) in self.space.covers:
                if x in u and y in u:
                    m = self._res[(x, y)]
                    for i in range(self.dims[y]):
                        row = {}
                        for j, v in enumerate(m.row(i)):
                            if v:
                                row[offsets[x] + j] = v
                        row[offsets[y] + i] = row.get(offsets[y] + i, ZERO) - 1
                        rows.append(row)
            for x in sorted(vanish):
                for i in range(self.dims[x]):
                    rows.append({offsets[x] + i: 1})
            constraint = Matrix.from_sparse(len(rows), total,
                                            {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
            self._sections[key] = SectionSpace(self, u, vanish, pts, offsets, kernel(constraint))
        return self._sections[key]

    def restriction(self, u: Iterable[int], v: Iterable[int], u_vanish=(), v_vanish=()) -> Matrix:
        """Matrix of sections(u, u_vanish) -> sections(v, v_vanish) for v inside u."""
        src = self.sections(u, u_vanish)
        tgt = self.sections(v, v_vanish)
        key = (src.open, src.vanish, tgt.open, tgt.vanish)
        if key not in self._restrictions:
            if not tgt.open <= src.open:
                raise ContainmentError("restriction to a set that is not contained")
            idx = [src.offsets[x] + i for x in tgt.points for i in range(self.dims[x])]
            amb = src.embedding.select_rows(idx)
            self._restrictions[key] = tgt.coords(amb)
        return self._restrictions[key]

    def relative_sections(self, u: Iterable[int], u_prime: Iterable[int]) -> Subspace:
        """Sections over u vanishing on u_prime, as a subspace of sections(u) coordinates."""
        u, u_prime = frozenset(u), frozenset(u_prime)
        if not u_prime <= u:
            raise ContainmentError("u_prime is not inside u")
        whole = self.sections(u)
        rel = self.sections(u, u_prime)
        return Subspace.span(whole.coords(rel.embedding).columns(), whole.dim)

    def section_from_stalks(self, u: Iterable[int], parts: Mapping[int, Sequence]) -> tuple:
        pts, offsets, total = self.layout(u)
        vec = [ZERO] * total
        for x, vals in parts.items():
            for i, v in enumerate(vals):
                vec[offsets[x] + i] = v
        return tuple(vec)

    def product_positions(self):
        """For product-of-stalks sheaves: pos[x][c] = index of coordinate c of F_x inside F_owner."""
        if self.owners is None:
            return None
        pos = []
        for x in range(self.space.n):
            row = []
            for c, y in enumerate(self.owners[x]):
                r = self._res[(x, y)]
                hits = [j for j in range(r.rows) if r[j, c] == 1]
                if len(hits) != 1 or self.owners[y][hits[0]] != y:
                    raise ValidationError("product structure", f"coordinate {c} at {self.space.labels[x]}")
                row.append(hits[0])
            pos.append(tuple(row))
        return tuple(pos)

    # constructors

    @classmethod
    def constant(cls, space: FinSpace, n: int = 1) -> "Sheaf":
        ident = Matrix.identity(n)
        return cls(space, [n] * space.n, {e: ident for e in space.covers})

    @classmethod
    def zero(cls, space: FinSpace) -> "Sheaf":
        return cls(space, [0] * space.n, {})

    @classmethod
    def skyscraper(cls, space: FinSpace, point, n: int = 1) -> "Sheaf":
        """G(U) = Q^n when the point lies in U: stalk Q^n at points below it."""
        p = space._idx(point)
        dims = [n if p in space.up[x] else 0 for x in range(space.n)]
        ident = Matrix.identity(n)
        return cls(space, dims, {(x, y): ident for (x, y) in space.covers if dims[x] and dims[y]})


class SheafMorphism:
    def __init__(self, source: Sheaf, target: Sheaf, comps: Mapping | Sequence, check: bool = True):
        if source.space != target.space:
            raise NotMorphism("sheaves live on different spaces")
        self.source = source
        self.target = target
        sp = source.space
        if isinstance(comps, Mapping):
            data = [None] * sp.n
            for k, m in comps.items():
                data[sp._idx(k)] = m
        else:
            data = list(comps)
        out = []
        for x in range(sp.n):
            m = data[x] if x < len(data) else None
            if m is None:
                m = Matrix.zeros(target.dim(x), source.dim(x))
            elif not isinstance(m, Matrix):
                m = Matrix(m, cols=source.dim(x))
            if m.shape != (target.dim(x), source.dim(x)):
                raise NotMorphism(f"component at {sp.labels[x]} has shape {m.shape}")
            out.append(m)
        self.comps = tuple(out)
        if check:
            for (x, y) in sp.covers:
                if target.r(x, y) @ self.comps[x] != self.comps[y] @ source.r(x, y):
                    raise NotMorphism(f"does not commute with restriction {sp.labels[x]}->{sp.labels[y]}")

    def __getitem__(self, x: int) -> Matrix:
        return self.comps[x]

    def ambient(self, u: Iterable[int]) -> Matrix:
        pts = sorted(u)
        return Matrix.diag([self.comps[x] for x in pts])

    def on_sections(self, u, vanish=(), t_vanish=None) -> Matrix:
        src = self.source.sections(u, vanish)
        tgt = self.target.sections(u, vanish if t_vanish is None else t_vanish)
        return tgt.coords(self.ambient(src.open) @ src.embedding)

    def compose(self, other: "SheafMorphism") -> "SheafMorphism":
        """self after other."""
        return SheafMorphism(other.source, self.target,
                             [self.comps[x] @ other.comps[x] for x in range(self.source.space.n)], check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps)

    def is_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.comps)

    def is_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.comps)

    def __neg__(self):
        return SheafMorphism(self.source, self.target, [-m for m in self.comps], check=False)

    def __eq__(self, other):
        return isinstance(other, SheafMorphism) and self.comps == other.comps

    @classmethod
    def identity(cls, s: Sheaf) -> "SheafMorphism":
        return cls(s, s, [Matrix.identity(d) for d in s.dims], check=False)

    @classmethod
    def zero(cls, source: Sheaf, target: Sheaf) -> "SheafMorphism":
        return cls(source, target, [], check=False)


@dataclass(frozen=True)
class SectionComplex:
    complex: Complex
    spaces: dict


class SheafComplex:
    """Complex of sheaves in degrees 0..top."""

    def __init__(self, terms: Sequence[Sheaf], diffs: Sequence[SheafMorphism] | None = None, check: bool = True):
        if not terms:
            raise ValidationError("complexes have at least one term")
        self.terms = tuple(terms)
        self.space = terms[0].space
        diffs = list(diffs or [])
        while len(diffs) < len(terms) - 1:
            q = len(diffs)
            diffs.append(SheafMorphism.zero(terms[q], terms[q + 1]))
        self.diffs = tuple(diffs[:len(terms) - 1])
        for q, m in enumerate(self.diffs):
            if m.source is not self.terms[q] or m.target is not self.terms[q + 1]:
                if m.source != self.terms[q] or m.target != self.terms[q + 1]:
                    raise ValidationError("differentials connect consecutive terms", f"degree {q}")
        if check:
            for q in range(len(self.diffs) - 1):
                if not self.diffs[q + 1].compose(self.diffs[q]).is_zero():
                    raise ValidationError("d∘d = 0", f"sheaf complex fails at degree {q}")
        self._sections = {}
        self._zero = None

    @property
    def top(self) -> int:
        return len(self.terms) - 1

    def term(self, q: int) -> Sheaf:
        if 0 <= q <= self.top:
            return self.terms[q]
        if self._zero is None:
            self._zero = Sheaf.zero(self.space)
        return self._zero

    def d(self, q: int) -> SheafMorphism:
        if 0 <= q < self.top:
            return self.diffs[q]
        return SheafMorphism.zero(self.term(q), self.term(q + 1))

    def sections_complex(self, u: Iterable[int], vanish: Iterable[int] = ()) -> SectionComplex:
        u, vanish = frozenset(u), frozenset(vanish)
        key = (u, vanish)
        if key not in self._sections:
            spaces = {q: self.terms[q].sections(u, vanish) for q in range(self.top + 1)}
            diffs = {q: self.diffs[q].on_sections(u, vanish) for q in range(self.top)}
            self._sections[key] = SectionComplex(
                Complex(0, [spaces[q].dim for q in range(self.top + 1)], diffs), spaces)
        return self._sections[key]

    def stalk_complex(self, x: int) -> Complex:
        return Complex(0, [t.dim(x) for t in self.terms], {q: m[x] for q, m in enumerate(self.diffs)})

    @classmethod
    def single(cls, s: Sheaf) -> "SheafComplex":
        return cls([s])


class SheafComplexMap:
    def __init__(self, source: SheafComplex, target: SheafComplex, comps: Mapping[int, SheafMorphism],
                 check: bool = True):
        self.source = source
        self.target = target
        self.comps = dict(comps)
        if check:
            top = max(source.top, target.top)
            for q in range(-1, top + 1):
                lhs = target.d(q).compose(self[q])
                rhs = self[q + 1].compose(source.d(q))
                if lhs.comps != rhs.comps:
                    raise NotMorphism(f"map of complexes does not commute with d in degree {q}")

    def __getitem__(self, q: int) -> SheafMorphism:
        m = self.comps.get(q)
        if m is None:
            return SheafMorphism.zero(self.source.term(q), self.target.term(q))
        return m

    def on_sections(self, u, vanish=(), t_vanish=None) -> ChainMap:
        src = self.source.sections_complex(u, vanish)
        tgt = self.target.sections_complex(u, vanish if t_vanish is None else t_vanish)
        top = max(self.source.top, self.target.top)
        comps = {q: self[q].on_sections(u, vanish, t_vanish) for q in range(top + 1)
                 if src.complex.dim(q) or tgt.complex.dim(q)}
        return ChainMap(src.complex, tgt.complex, comps)

    def compose(self, other: "SheafComplexMap") -> "SheafComplexMap":
        top = max(self.target.top, other.source.top)
        return SheafComplexMap(other.source, self.target,
                               {q: self[q].compose(other[q]) for q in range(top + 1)}, check=False)


def restriction_chain_map(k: SheafComplex, u, u_vanish, v, v_vanish) -> ChainMap:
    """K(u, u') -> K(v, v') for v inside u and v' inside u'."""
    u, u_vanish, v, v_vanish = map(frozenset, (u, u_vanish, v, v_vanish))
    if not (v <= u and v_vanish <= u_vanish):
        raise ContainmentError("restriction requires v <= u and v' <= u'")
    src = k.sections_complex(u, u_vanish)
    tgt = k.sections_complex(v, v_vanish)
    comps = {q: k.terms[q].restriction(u, v, u_vanish, v_vanish) for q in range(k.top + 1)}
    return ChainMap(src.complex, tgt.complex, comps)


# --- kernels, cokernels, sums ---------------------------------------------

def kernel_inclusion(m: SheafMorphism) -> tuple[Sheaf, SheafMorphism]:
    sp = m.source.space
    bases = [kernel(m.comps[x]) for x in range(sp.n)]
    res = {}
    for (x, y) in sp.covers:
        image_in_y = m.source.r(x, y) @ bases[x].basis
        res[(x, y)] = bases[y].coords_of(image_in_y)
    k = Sheaf(sp, [b.dim for b in bases], res)
    return k, SheafMorphism(k, m.source, [b.basis for b in bases])


def kernel_sheaf(m: SheafMorphism) -> Sheaf:
    return kernel_inclusion(m)[0]


def cokernel_projection(m: SheafMorphism) -> tuple[Sheaf, SheafMorphism, tuple]:
    """Cokernel sheaf, the projection from the target, and representatives per point.

    The pointwise cokernels form a functor on the poset.  Its sheafification
    takes U_x to the limit over the points of U_x; since x is the least point
    of U_x that limit is the value at x, so no further correction is needed.
    """
    sp = m.target.space
    quos = []
    for x in range(sp.n):
        whole = Subspace.full(m.target.dim(x))
        quos.append(quotient(whole, Subspace.span(m.comps[x].columns(), m.target.dim(x))))
    res = {(x, y): quos[y].projector @ m.target.r(x, y) @ quos[x].reps for (x, y) in sp.covers}
    q = Sheaf(sp, [qu.dim for qu in quos], res)
    return q, SheafMorphism(m.target, q, [qu.projector for qu in quos]), tuple(qu.reps for qu in quos)


def cokernel_sheaf(m: SheafMorphism) -> Sheaf:
    return cokernel_projection(m)[0]


def direct_sum(sheaves: Sequence[Sheaf]) -> Sheaf:
    sp = sheaves[0].space
    dims = [sum(s.dim(x) for s in sheaves) for x in range(sp.n)]
    res = {e: Matrix.diag([s.r(*e) for s in sheaves]) for e in sp.covers}
    owners = None
    if all(s.owners is not None for s in sheaves):
        owners = [sum((s.owners[x] for s in sheaves), ()) for x in range(sp.n)]
    return Sheaf(sp, dims, res, owners=owners, check=False)


def block_morphism(source: Sheaf, target: Sheaf, src_parts: Sequence[Sheaf], tgt_parts: Sequence[Sheaf],
                   grid: Mapping[tuple[int, int], SheafMorphism], check: bool = False) -> SheafMorphism:
    """Morphism between direct sums from blocks grid[(i, j)]: src_parts[j] -> tgt_parts[i]."""
    sp = source.space
    comps = []
    for x in range(sp.n):
        rows = [p.dim(x) for p in tgt_parts]
        cols = [p.dim(x) for p in src_parts]
        g = [[grid[(i, j)].comps[x] if (i, j) in grid else None for j in range(len(src_parts))]
             for i in range(len(tgt_parts))]
        comps.append(Matrix.block(g, rows, cols))
    return SheafMorphism(source, target, comps, check=check)


# --- direct and inverse images ----------------------------------------------

class PushforwardSheaf(Sheaf):
    """f_*T with stalk at x equal to T(f^{-1} U_x), in section coordinates."""

    def __init__(self, f: ContinuousMap, t: Sheaf):
        if t.space != f.source:
            raise ValidationError("sheaf lives on the source of the map")
        self.f = f
        self.base = t
        x_space = f.target
        self.preimages = tuple(f.preimage(x_space.up[x]) for x in range(x_space.n))
        dims = [t.sections(p).dim for p in self.preimages]
        res = {(x, y): t.restriction(self.preimages[x], self.preimages[y]) for (x, y) in x_space.covers}
        super().__init__(x_space, dims, res, check=False)

    def evaluate(self, x: int, y: int) -> Matrix:
        """Stalk (f_*T)_x -> T_y, value of a section at a point y of f^{-1}U_x."""
        sec = self.base.sections(self.preimages[x])
        return sec.stalk_part(sec.embedding, y)

    def extend(self, x: int) -> Matrix:
        """Stalk (f_*T)_x -> ambient coordinates over f^{-1}U_x."""
        return self.base.sections(self.preimages[x]).embedding


def pushforward(f: ContinuousMap, t: Sheaf) -> PushforwardSheaf:
    return PushforwardSheaf(f, t)


def pushforward_morphism(f: ContinuousMap, m: SheafMorphism,
                         source: PushforwardSheaf | None = None,
                         target: PushforwardSheaf | None = None) -> SheafMorphism:
    src = source or pushforward(f, m.source)
    tgt = target or pushforward(f, m.target)
    return SheafMorphism(src, tgt, [m.on_sections(src.preimages[x]) for x in range(f.target.n)], check=False)


def pushforward_complex(f: ContinuousMap, l: SheafComplex) -> SheafComplex:
    terms = [pushforward(f, t) for t in l.terms]
    diffs = [pushforward_morphism(f, l.diffs[q], terms[q], terms[q + 1]) for q in range(l.top)]
    return SheafComplex(terms, diffs, check=False)


def inverse_image(f: ContinuousMap, s: Sheaf) -> Sheaf:
    if s.space != f.target:
        raise ValidationError("sheaf lives on the target of the map")
    ysp = f.source
    dims = [s.dim(f(y)) for y in range(ysp.n)]
    res = {(y, y2): s.r(f(y), f(y2)) for (y, y2) in ysp.covers}
    owners = None
    if s.owners is not None:
        # product structure survives pulling back along the inclusion of an open set
        back = {f(y): y for y in range(ysp.n)}
        if len(back) == ysp.n and all(o in back for y in range(ysp.n) for o in s.owners[f(y)]):
            owners = [tuple(back[o] for o in s.owners[f(y)]) for y in range(ysp.n)]
    return Sheaf(ysp, dims, res, owners=owners, check=False)


def inverse_image_morphism(f: ContinuousMap, m: SheafMorphism, source=None, target=None) -> SheafMorphism:
    src = source or inverse_image(f, m.source)
    tgt = target or inverse_image(f, m.target)
    return SheafMorphism(src, tgt, [m.comps[f(y)] for y in range(f.source.n)], check=False)


def inverse_image_complex(f: ContinuousMap, k: SheafComplex) -> SheafComplex:
    terms = [inverse_image(f, t) for t in k.terms]
    diffs = [inverse_image_morphism(f, k.diffs[q], terms[q], terms[q + 1]) for q in range(k.top)]
    return SheafComplex(terms, diffs, check=False)


def restrict(s: Sheaf, u: Iterable) -> tuple[Sheaf, ContinuousMap]:
    sub, inc = s.space.subspace(u)
    return inverse_image(inc, s), inc


def restrict_complex(k: SheafComplex, u: Iterable) -> tuple[SheafComplex, ContinuousMap]:
    sub, inc = k.space.subspace(u)
    return inverse_image_complex(inc, k), inc


def unit_morphism(f: ContinuousMap, s: Sheaf, pulled: Sheaf | None = None,
                  pushed: PushforwardSheaf | None = None) -> SheafMorphism:
    """S -> f_* f^{-1} S: a germ at x goes to its restrictions at the points of f^{-1}U_x."""
    pulled = pulled or inverse_image(f, s)
    pushed = pushed or pushforward(f, pulled)
    comps = []
    for x in range(f.target.n):
        sec = pulled.sections(pushed.preimages[x])
        blocks = [s.r(x, f(y)) for y in sec.points]
        amb = Matrix.vstack(blocks, cols=s.dim(x)) if blocks else Matrix.zeros(0, s.dim(x))
        comps.append(sec.coords(amb))
    return SheafMorphism(s, pushed, comps)


def counit_morphism(f: ContinuousMap, t: Sheaf) -> SheafMorphism:
    """f^{-1} f_* T -> T: evaluate the section over f^{-1}U_{f(y)} at y."""
    pushed = pushforward(f, t)
    pulled = inverse_image(f, pushed)
    return SheafMorphism(pulled, t, [pushed.evaluate(f(y), y) for y in range(f.source.n)])


def adjunction_units(f: ContinuousMap, s: Sheaf, t: Sheaf) -> tuple[SheafMorphism, SheafMorphism]:
    return unit_morphism(f, s), counit_morphism(f, t)


def unit_complex_map(f: ContinuousMap, k: SheafComplex) -> tuple[SheafComplex, SheafComplex, SheafComplexMap]:
    """K -> f_* f^{-1} K for a complex; returns (f^{-1}K, f_*f^{-1}K, unit)."""
    pulled = inverse_image_complex(f, k)
    pushed = pushforward_complex(f, pulled)
    comps = {q: unit_morphism(f, k.terms[q], pulled.terms[q], pushed.terms[q]) for q in range(k.top + 1)}
    return pulled, pushed, SheafComplexMap(k, pushed, comps)

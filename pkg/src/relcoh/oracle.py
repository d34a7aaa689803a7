"""Independent reference values: simplicial cohomology of order complexes.

The cohomology of a finite T0 space with constant rational coefficients
equals that of its order complex, whose simplices are the chains of the
specialization order.  For an open subspace the chains inside it form a
subcomplex, giving relative cohomology.  Everything here uses plain lists
and its own elimination, sharing no code with the sheaf machinery.
"""

from __future__ import annotations

from fractions import Fraction


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                c = m[i][col] / p
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def chains(up: list[set], points) -> list[list[tuple]]:
    """Chains x0 < x1 < ... inside `points`, grouped by length - 1."""
    pts = sorted(points)
    by_dim = [[(x,) for x in pts]]
    while True:
        nxt = []
        for c in by_dim[-1]:
            for y in pts:
                if y != c[-1] and y in up[c[-1]]:
                    nxt.append(c + (y,))
        if not nxt:
            break
        by_dim.append(sorted(nxt))
    return by_dim


def relative_betti(up: list[set], x_prime=(), top: int | None = None) -> tuple:
    """dim H^q(K(X), K(X')) for q = 0..top, with up[x] the points >= x."""
    n = len(up)
    sub = set(x_prime)
    all_chains = chains(up, range(n))
    cells = [[c for c in layer if not set(c) <= sub] for layer in all_chains]
    top = len(cells) - 1 if top is None else top

    def coboundary(q):
        src = cells[q] if q < len(cells) else []
        tgt = cells[q + 1] if q + 1 < len(cells) else []
        idx = {c: i for i, c in enumerate(src)}
        rows = []
        for t in tgt:
            row = [Fraction(0)] * len(src)
            for i in range(len(t)):
                face = t[:i] + t[i + 1:]
                if face in idx:
                    row[idx[face]] += (-1) ** i
            rows.append(row)
        return rows

    ranks = {q: _rank(coboundary(q)) if q < len(cells) else 0 for q in range(-1, top + 1)}
    ranks[-1] = 0
    out = []
    for q in range(top + 1):
        size = len(cells[q]) if q < len(cells) else 0
        out.append(size - ranks[q] - ranks[q - 1])
    return tuple(out)


def space_betti(space, x_prime=(), top: int | None = None) -> tuple:
    up = [set(space.up[x]) for x in range(space.n)]
    return relative_betti(up, [space._idx(p) if not isinstance(p, int) else p for p in x_prime], top)

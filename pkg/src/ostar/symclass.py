"""Orbits of multi-indices, exact dimensions of symmetry classes, Gram
matrices of decomposable symmetrized tensors, and the generalized matrix
function.

A multi-index is a tuple alpha = (alpha_1, ..., alpha_m) with entries in
1..n.  The group acts on the right through a permutation representation:
(alpha.g)_i = alpha_{sigma^{-1}(i)} with sigma the permutation of g, so that
(alpha.g).h = alpha.(g h).  Orbit scans walk the mixed-radix encoding of
Gamma_{m,n} in increasing order, which makes every representative lex-min
and every report reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycloNum, cyclo_json
from .errors import BudgetError, ConsistencyError
from .groups import PermRep, SemidirectGroup, perm_cycle_count

__all__ = [
    "DEFAULT_INDEX_BUDGET",
    "OrbitRecord",
    "GramMatrix",
    "index_code",
    "index_from_code",
    "act",
    "stabilizer",
    "cycle_count",
    "orbit_scan",
    "dim_symmetry_class",
    "inner_product",
    "coset_transversal",
    "gram",
    "cyclo_rank",
    "explicit_symmetrized_tensor",
    "tensor_inner",
    "generalized_matrix_function",
    "export_orbits_csv",
]

DEFAULT_INDEX_BUDGET = 10**7


def index_code(alpha, n: int) -> int:
    c = 0
    for x in alpha:
        c = c * n + (x - 1)
    return c


def index_from_code(code: int, m: int, n: int):
    out = []
    for _ in range(m):
        code, r = divmod(code, n)
        out.append(r + 1)
    return tuple(reversed(out))


def act(alpha, g, rep: PermRep):
    """Right action: entry i of the result is alpha at sigma^{-1}(i)."""
    if len(alpha) != rep.degree:
        raise ValueError(
            f"multi-index length {len(alpha)} does not match degree {rep.degree}"
        )
    return tuple(alpha[j] for j in rep.inv_perm(g))


def stabilizer(alpha, G: SemidirectGroup, rep: PermRep):
    """G_alpha as a tuple in element-code order."""
    return tuple(g for g in G.elements() if act(alpha, g, rep) == alpha)


def cycle_count(g, rep: PermRep) -> int:
    """Cycles of the permutation of g, fixed points included."""
    return perm_cycle_count(rep.perm(g))


@dataclass
class OrbitRecord:
    """One orbit of Gamma_{m,n}: lex-min representative, size, stabilizer,
    the stabilizer character sum, whether the orbit survives into
    Delta-bar, and the orbital dimension s_alpha."""

    rep: tuple
    orbit_size: int
    stabilizer: tuple
    stab_char_sum: CycloNum
    in_delta_bar: bool
    s_alpha: int


def _orbit_partition(G, rep, m, n, index_budget):
    total = n**m
    if total > index_budget:
        raise BudgetError(
            f"orbit scan refused: n^m = {total} exceeds the index budget "
            f"{index_budget}"
        )
    cache = getattr(rep, "_orbit_cache", None)
    if cache is None:
        cache = {}
        rep._orbit_cache = cache
    key = (m, n)
    parts = cache.get(key)
    if parts is not None:
        return parts
    elems = G.elements()
    invs = [rep.inv_perm(g) for g in elems]
    visited = bytearray(total)
    parts = []
    for code in range(total):
        if visited[code]:
            continue
        alpha = index_from_code(code, m, n)
        codes = set()
        stab = []
        for g, iv in zip(elems, invs):
            beta = tuple(alpha[j] for j in iv)
            bc = index_code(beta, n)
            codes.add(bc)
            if bc == code:
                stab.append(g)
        for bc in codes:
            visited[bc] = 1
        if len(codes) * len(stab) != G.order:
            raise ConsistencyError("orbit-stabilizer count failed on Gamma_{m,n}")
        parts.append((alpha, len(codes), tuple(stab)))
    cache[key] = parts
    return parts


def orbit_scan(G, rep, chi, m, n, index_budget=DEFAULT_INDEX_BUDGET):
    """One record per orbit of Gamma_{m,n}, covering it exactly.

    The orbit partition is independent of the character and cached on the
    representation; the character-dependent fields are recomputed per call.
    """
    records = []
    for alpha, size, stab in _orbit_partition(G, rep, m, n, index_budget):
        s = CycloNum.zero()
        for h in stab:
            s = s + chi.value(h)
        try:
            q = (s * Fraction(chi.degree, len(stab))).as_fraction()
        except ValueError as exc:
            raise ConsistencyError(
                f"stabilizer character sum at {alpha} is not rational: {s}"
            ) from exc
        if q.denominator != 1 or q < 0:
            raise ConsistencyError(
                f"orbital dimension at {alpha} is {q}, not a nonnegative integer"
            )
        records.append(OrbitRecord(alpha, size, stab, s, not s.is_zero(), int(q)))
    return records


def dim_symmetry_class(G, rep, chi, n) -> int:
    """chi(e)/|G| times the sum over the group of chi(g) n^(cycle count);
    must come out an exact nonnegative integer."""
    total = CycloNum.zero()
    for g in G.elements():
        v = chi.value(g)
        if not v.is_zero():
            total = total + v * (n ** cycle_count(g, rep))
    total = total * Fraction(chi.degree, G.order)
    try:
        q = total.as_fraction()
    except ValueError as exc:
        raise ConsistencyError(f"dimension value is not rational: {total}") from exc
    if q.denominator != 1 or q < 0:
        raise ConsistencyError(f"dimension value {q} is not a nonnegative integer")
    return int(q)


def inner_product(alpha, g, chi, G, rep, stab=None) -> CycloNum:
    """<e*_alpha, e*_{alpha.g}> = chi(e)/|G| times the sum of chi(g h) over
    the stabilizer of alpha."""
    if stab is None:
        stab = stabilizer(alpha, G, rep)
    acc = CycloNum.zero()
    for h in stab:
        acc = acc + chi.value(G.mul(g, h))
    return acc * Fraction(chi.degree, G.order)


def inner_product_pair(alpha, beta, chi, G, rep) -> CycloNum:
    """<e*_alpha, e*_beta>: zero when the indices sit in different orbits,
    otherwise routed through inner_product."""
    for g in G.elements():
        if act(alpha, g, rep) == beta:
            return inner_product(alpha, g, chi, G, rep)
    return CycloNum.zero()


def coset_transversal(alpha, G, rep):
    """Lex-min representative of each right coset of G_alpha, in ascending
    element-code order (one coset per orbit index)."""
    seen = set()
    reps = []
    for g in G.elements():
        beta = act(alpha, g, rep)
        if beta not in seen:
            seen.add(beta)
            reps.append(g)
    return reps


@dataclass
class GramMatrix:
    """Exact Gram matrix of the symmetrized tensors over the right cosets
    of the stabilizer of one multi-index."""

    coset_reps: tuple
    entries: tuple

    def rank(self) -> int:
        return cyclo_rank(self.entries)

    def is_hermitian(self) -> bool:
        n = len(self.entries)
        return all(
            self.entries[i][j] == self.entries[j][i].conj()
            for i in range(n)
            for j in range(n)
        )

    def diagonal(self):
        return [self.entries[i][i] for i in range(len(self.entries))]

    def to_json(self):
        return {
            "coset_reps": [[list(a), list(h)] for a, h in self.coset_reps],
            "entries": [[cyclo_json(v) for v in row] for row in self.entries],
        }


def gram(alpha, chi, G, rep) -> GramMatrix:
    """Gram matrix of {e*_{alpha.sigma}} over coset representatives; alpha
    must lie in Delta-bar."""
    stab = stabilizer(alpha, G, rep)
    ssum = CycloNum.zero()
    for h in stab:
        ssum = ssum + chi.value(h)
    if ssum.is_zero():
        raise ValueError(
            f"{alpha} is not in Delta-bar for this character; its symmetrized "
            f"tensor vanishes"
        )
    reps = coset_transversal(alpha, G, rep)
    scale = Fraction(chi.degree, G.order)
    invs = [G.inv(r) for r in reps]
    rows = []
    for i in range(len(reps)):
        row = []
        for j in range(len(reps)):
            g = G.mul(reps[j], invs[i])
            acc = CycloNum.zero()
            for h in stab:
                acc = acc + chi.value(G.mul(g, h))
            row.append(acc * scale)
        rows.append(tuple(row))
    return GramMatrix(tuple(reps), tuple(rows))


def cyclo_rank(rows) -> int:
    """Exact rank over the cyclotomic field: Gaussian elimination with
    explicit field inversion, no floating point anywhere."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if not M[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pivot_inv = M[rank][col].inv()
        prow = M[rank]
        for r in range(rank + 1, nrows):
            c = M[r][col]
            if c.is_zero():
                continue
            f = c * pivot_inv
            M[r] = [
                a if b.is_zero() else a - f * b for a, b in zip(M[r], prow)
            ]
        rank += 1
        if rank == nrows:
            break
    return rank


def explicit_symmetrized_tensor(alpha, chi, G, rep, n=None,
                                index_budget=DEFAULT_INDEX_BUDGET):
    """Coordinates of the symmetrized tensor of alpha in the standard tensor
    basis, as a sparse map {multi-index: exact value}.

    The coefficient of beta is chi(e)/|G| times the sum of chi(sigma) over
    {sigma : alpha.sigma^{-1} = beta}; the support stays inside the orbit of
    alpha, and the map is empty exactly when alpha falls outside Delta-bar.
    """
    if n is not None and n ** len(alpha) > index_budget:
        raise BudgetError(
            f"explicit tensor refused: n^m = {n ** len(alpha)} exceeds the "
            f"index budget {index_budget}"
        )
    acc = {}
    for g in G.elements():
        v = chi.value(g)
        if v.is_zero():
            continue
        beta = act(alpha, G.inv(g), rep)
        prev = acc.get(beta)
        acc[beta] = v if prev is None else prev + v
    scale = Fraction(chi.degree, G.order)
    return {b: v * scale for b, v in acc.items() if not v.is_zero()}


def tensor_inner(u, v) -> CycloNum:
    """Coordinate-wise inner product of two sparse tensors, conjugate-linear
    in the first argument (the convention under which the closed-form
    stabilizer sums reproduce these values exactly)."""
    acc = CycloNum.zero()
    for b, x in u.items():
        y = v.get(b)
        if y is not None:
            acc = acc + x.conj() * y
    return acc


def generalized_matrix_function(M, chi, G, rep) -> CycloNum:
    """Sum over the group of chi(g) times the product of M[i][sigma(i)]."""
    m = rep.degree
    if len(M) != m or any(len(row) != m for row in M):
        raise ValueError(f"expected an {m} x {m} matrix")
    Mc = [[CycloNum.coerce(x) for x in row] for row in M]
    total = CycloNum.zero()
    for g in G.elements():
        p = rep.perm(g)
        prod = None
        for i in range(m):
            e = Mc[i][p[i]]
            if e.is_zero():
                prod = None
                break
            prod = e if prod is None else prod * e
        if prod is not None:
            total = total + chi.value(g) * prod
    return total


def export_orbits_csv(records, stream) -> None:
    """Orbit report: representative, orbit size, stabilizer order, orbital
    dimension, Delta-bar membership."""
    import csv

    w = csv.writer(stream)
    w.writerow(["rep", "orbit_size", "stabilizer_order", "s_alpha", "in_delta_bar"])
    for r in records:
        w.writerow(
            [
                ",".join(map(str, r.rep)),
                r.orbit_size,
                len(r.stabilizer),
                r.s_alpha,
                int(r.in_delta_bar),
            ]
        )

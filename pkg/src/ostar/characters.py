"""Irreducible characters of A x|_phi H for finite abelian A and H.

The dual group of A is acted on by H through phi; every irreducible
character of the product is indexed by a dual orbit [x] together with a
linear character U of the stabilizer H_x, has degree [H : H_x], and
evaluates at (a, h) to

    U(h) / |H_x| * sum over h' in H of x(phi_{h'}(a))   if h lies in H_x,
    0                                                   otherwise.

All values are exact CycloNums.  `character_table` bundles the characters
of a group with the completeness and orthogonality report that guards every
downstream decision.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .cyclotomic import CycloNum, root_of_unity
from .errors import ConsistencyError
from .groups import AbelianGroup, ActionHom, SemidirectGroup

__all__ = [
    "DualChar",
    "DualOrbit",
    "LinearChar",
    "IrredChar",
    "CharTable",
    "TableReport",
    "dual_group",
    "dual_act",
    "dual_orbits",
    "cyclic_decomposition",
    "dual_of_subgroup",
    "irred_chars",
    "char_value_general",
    "validate_table",
    "character_table",
    "zero_set",
    "export_chartable_csv",
]


@dataclass(frozen=True)
class DualChar:
    """Linear character of an abelian group: a |-> prod_i zeta_{n_i}^{c_i a_i},
    held as the exponent tuple (c_1, ..., c_k)."""

    group: AbelianGroup
    exponents: tuple[int, ...]

    def value_exponent(self, a) -> int:
        """The value at a as an exponent of zeta_E, E the group exponent."""
        E = self.group.exponent
        t = 0
        for c, x, n in zip(self.exponents, a, self.group.factors):
            t += c * x * (E // n)
        return t % E

    def value(self, a) -> CycloNum:
        return root_of_unity(self.group.exponent, self.value_exponent(a))

    def code(self) -> int:
        return self.group.code(self.exponents)


def dual_group(A: AbelianGroup) -> tuple[DualChar, ...]:
    """All |A| characters of A, in exponent-code order."""
    return tuple(DualChar(A, e) for e in A.elements())


def dual_act(x: DualChar, h, phi: ActionHom) -> DualChar:
    """h . x = x o phi_h, solved back into exponent form."""
    A = x.group
    E = A.exponent
    aut = phi.automorphism(h)
    gens = A.generators()
    exps = []
    for i, n in enumerate(A.factors):
        t = x.value_exponent(aut.apply(gens[i]))
        step = E // n
        if t % step:
            raise ConsistencyError("dual action did not produce a character")
        exps.append((t // step) % n)
    return DualChar(A, tuple(exps))


class DualOrbit:
    """One H-orbit on the dual of A: lex-min representative, all members,
    and the stabilizer H_x = {h : x o phi_h = x}."""

    def __init__(self, rep, members, stabilizer, phi, H):
        self.rep = rep
        self.members = members
        self.stabilizer = stabilizer
        self.phi = phi
        self.H = H
        self._sums = {}

    def __repr__(self):
        return (
            f"DualOrbit(rep={self.rep.exponents}, size={len(self.members)}, "
            f"stabilizer_order={len(self.stabilizer)})"
        )

    def sum_over_H(self, a) -> CycloNum:
        """Sum of x(phi_h(a)) over every h in H; independent of the choice
        of orbit member, so computed once per a against the representative."""
        v = self._sums.get(a)
        if v is None:
            E = self.rep.group.exponent
            counts = [0] * E
            for h in self.H.elements():
                counts[self.rep.value_exponent(self.phi.apply(h, a))] += 1
            v = CycloNum.from_coeffs(E, counts)
            self._sums[a] = v
        return v


def dual_orbits(A: AbelianGroup, H: AbelianGroup, phi: ActionHom) -> tuple[DualOrbit, ...]:
    """Partition of the dual group under the H-action, orbits listed by
    lex-min representative."""
    seen = set()
    orbits = []
    h_elems = H.elements()
    for x in dual_group(A):
        if x.exponents in seen:
            continue
        members = {}
        stab = []
        for h in h_elems:
            y = dual_act(x, h, phi)
            members[y.exponents] = y
            if y.exponents == x.exponents:
                stab.append(h)
        seen.update(members)
        if len(members) * len(stab) != H.order:
            raise ConsistencyError("orbit-stabilizer count failed on the dual group")
        ordered = tuple(members[e] for e in sorted(members, key=A.code))
        orbits.append(DualOrbit(x, ordered, tuple(stab), phi, H))
    return tuple(orbits)


def cyclic_decomposition(sub, H: AbelianGroup):
    """Generators and orders presenting a subgroup of an abelian group as a
    direct product of cyclic groups.

    Backtracking search: repeatedly adjoin an element of maximal order whose
    cyclic span meets the current span trivially.  Deterministic because
    candidates are tried in (order desc, code asc) order.
    """
    sub = frozenset(sub)
    ident = H.identity
    if sub == {ident}:
        return ()

    def cyc(y):
        out = [ident]
        z = y
        while z != ident:
            out.append(z)
            z = H.add(z, y)
        return out

    cands = sorted(sub, key=lambda y: (-H.order_of(y), H.code(y)))

    def extend(span, gens):
        if len(span) == len(sub):
            return tuple(gens)
        for y in cands:
            if y in span:
                continue
            cy = cyc(y)
            if any(z != ident and z in span for z in cy):
                continue
            wider = {H.add(u, v) for u in span for v in cy}
            got = extend(wider, gens + [(y, len(cy))])
            if got is not None:
                return got
        return None

    got = extend({ident}, [])
    if got is None:
        raise ConsistencyError("no cyclic decomposition found for subgroup")
    return got


class LinearChar:
    """Linear character of a subgroup of an abelian group, relative to a
    cyclic decomposition of that subgroup."""

    degree = 1

    def __init__(self, H, decomposition, exponents, coords):
        self.H = H
        self.gens = tuple(g for g, _ in decomposition)
        self.orders = tuple(d for _, d in decomposition)
        self.exponents = tuple(exponents)
        self.conductor = math.lcm(*self.orders) if self.orders else 1
        self._coords = coords

    def members(self):
        return self._coords.keys()

    def value_exponent(self, h) -> int:
        L = self.conductor
        t = 0
        for u, c, d in zip(self.exponents, self._coords[h], self.orders):
            t += u * c * (L // d)
        return t % L

    def value(self, h) -> CycloNum:
        return root_of_unity(self.conductor, self.value_exponent(h))

    def __repr__(self):
        return f"LinearChar(exponents={self.exponents}, orders={self.orders})"


def dual_of_subgroup(sub, H: AbelianGroup) -> tuple[LinearChar, ...]:
    """All |S| linear characters of the subgroup S, in exponent-code order
    relative to its cyclic decomposition."""
    dec = cyclic_decomposition(sub, H)
    coords = {}
    for cs in iter_product(*(range(d) for _, d in dec)):
        elem = H.identity
        for c, (g, _) in zip(cs, dec):
            elem = H.add(elem, H.mul_scalar(c, g))
        coords[elem] = cs
    if len(coords) != len(frozenset(sub)):
        raise ConsistencyError("cyclic decomposition does not enumerate the subgroup")
    return tuple(
        LinearChar(H, dec, e, coords)
        for e in iter_product(*(range(d) for _, d in dec))
    )


class IrredChar:
    """Irreducible character of G = A x| H attached to a dual orbit [x] and
    a linear character U of the stabilizer H_x; degree [H : H_x]."""

    def __init__(self, G: SemidirectGroup, orbit: DualOrbit, u: LinearChar):
        self.G = G
        self.orbit = orbit
        self.u = u
        self.degree = G.H.order // len(orbit.stabilizer)
        self._stab_set = frozenset(orbit.stabilizer)
        self._by_class = {}

    def __repr__(self):
        return (
            f"IrredChar(degree={self.degree}, orbit={self.orbit.rep.exponents}, "
            f"u={self.u.exponents})"
        )

    def is_linear(self) -> bool:
        return self.degree == 1

    def value(self, g) -> CycloNum:
        """Exact value at g, memoized per conjugacy class."""
        i = self.G.class_index(g)
        v = self._by_class.get(i)
        if v is None:
            v = self.value_uncached(self.G.conjugacy_classes()[i][0])
            self._by_class[i] = v
        return v

    def value_uncached(self, g) -> CycloNum:
        """Direct evaluation at g, bypassing the class memo."""
        a, h = g
        if h not in self._stab_set:
            return CycloNum.zero()
        s = self.orbit.sum_over_H(a)
        return self.u.value(h) * s * Fraction(1, len(self.orbit.stabilizer))


def char_value_general(chi: IrredChar, g) -> CycloNum:
    """Induced-character evaluation through the full conjugation sum
    (1/|H_x|) sum over {h in H : h g_H h^-1 in H_x} of
    x(phi_h(a)) U(h g_H h^-1).

    For abelian H this must coincide with IrredChar.value everywhere; it is
    kept as an independent cross-check of the fast path.
    """
    G = chi.G
    H = G.H
    a, gh = g
    stab = chi._stab_set
    x = chi.orbit.rep
    total = CycloNum.zero()
    for h in H.elements():
        conj = H.add(H.add(h, gh), H.neg(h))
        if conj in stab:
            total = total + x.value(G.phi.apply(h, a)) * chi.u.value(conj)
    return total * Fraction(1, len(stab))


def irred_chars(G: SemidirectGroup) -> tuple[IrredChar, ...]:
    """The complete list of irreducible characters of G, ordered by dual
    orbit representative and then by the stabilizer character."""
    chars = []
    for orbit in dual_orbits(G.A, G.H, G.phi):
        for u in dual_of_subgroup(orbit.stabilizer, G.H):
            chars.append(IrredChar(G, orbit, u))
    if sum(c.degree**2 for c in chars) != G.order:
        raise ConsistencyError("character degrees do not sum in squares to |G|")
    if len(chars) != len(G.conjugacy_classes()):
        raise ConsistencyError("character count differs from the class count")
    return tuple(chars)


@dataclass
class TableReport:
    checks: dict
    failures: list

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def validate_table(chars, G: SemidirectGroup) -> TableReport:
    """Exact completeness, first-orthogonality and conjugate-symmetry checks.

    Any failure here must abort downstream decisions for the group.
    """
    checks = {}
    failures = []

    total = CycloNum.zero()
    for chi in chars:
        v = chi.value(G.identity)
        total = total + v * v
    checks["degree_sum"] = total == G.order
    if not checks["degree_sum"]:
        failures.append(f"sum of squared degrees is {total}, expected {G.order}")

    ortho_ok = True
    elems = G.elements()
    for i in range(len(chars)):
        for j in range(i, len(chars)):
            s = CycloNum.zero()
            for g in elems:
                a = chars[i].value(g)
                if a.is_zero():
                    continue
                b = chars[j].value(g)
                if b.is_zero():
                    continue
                s = s + a * b.conj()
            expected = G.order if i == j else 0
            if s != expected:
                ortho_ok = False
                failures.append(f"orthogonality failed for characters {i}, {j}: {s}")
    checks["orthogonality"] = ortho_ok

    sym_ok = True
    for idx, chi in enumerate(chars):
        for g in elems:
            if chi.value(G.inv(g)) != chi.value(g).conj():
                sym_ok = False
                failures.append(f"conjugate symmetry failed for character {idx} at {g}")
                break
    checks["conjugate_symmetry"] = sym_ok

    return TableReport(checks, failures)


@dataclass
class CharTable:
    group: SemidirectGroup
    chars: tuple
    report: TableReport


def character_table(G: SemidirectGroup) -> CharTable:
    """Characters plus validation report, computed once per group."""
    if G._char_table is None:
        chars = irred_chars(G)
        G._char_table = CharTable(G, chars, validate_table(chars, G))
    return G._char_table


def zero_set(chi: IrredChar) -> frozenset:
    """All group elements where the character vanishes (exact test)."""
    out = []
    for cls in chi.G.conjugacy_classes():
        if chi.value(cls[0]).is_zero():
            out.extend(cls)
    return frozenset(out)


def element_label(g) -> str:
    a, h = g
    return ",".join(map(str, a)) + "|" + ",".join(map(str, h))


def approx_str(z: complex) -> str:
    return f"{z.real:.10g}{z.imag:+.10g}j"


def exact_cell(v: CycloNum) -> str:
    """conductor:coefficient list over the power basis, exact Fractions;
    rational values are presented at conductor 1."""
    if v.is_rational() and v.conductor != 1:
        v = CycloNum.from_rational(v.as_fraction())
    fr = v.rational_coeffs()[: len(v.coeffs)]
    return f"{v.conductor}:" + ";".join(str(f) for f in fr)


def export_chartable_csv(G: SemidirectGroup, chars, stream) -> None:
    """Rows = characters, two columns per conjugacy class: the exact
    coefficient list and a float approximation (the latter marked with a
    trailing ~)."""
    reps = [cls[0] for cls in G.conjugacy_classes()]
    w = csv.writer(stream)
    header = ["character", "degree"]
    for g in reps:
        label = element_label(g)
        header += [f"({label})", f"({label})~"]
    w.writerow(header)
    for idx, chi in enumerate(chars):
        row = [f"chi{idx}", chi.degree]
        for g in reps:
            v = chi.value(g)
            row += [exact_cell(v), approx_str(v.evalf())]
        w.writerow(row)

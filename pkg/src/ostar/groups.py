"""Finite abelian groups, their automorphisms, semidirect and wreath
products, permutation representations, and subgroup enumeration.

Elements of an abelian group are coordinate tuples; elements of a semidirect
product are (a, h) pairs of such tuples.  "Lex-min", coset representatives
and every other ordering refer to the mixed-radix integer encoding of the
coordinate tuples, which keeps results reproducible bit for bit.

Permutations are 0-based image tuples and compose left to right:
(p * q)(x) = q(p(x)).  With that convention the right action on
multi-indices satisfies (alpha.g).h = alpha.(g h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

from .errors import BudgetError
from .cyclotomic import prime_factors

__all__ = [
    "ELEMENT_CAP",
    "SUBGROUP_CAP",
    "AbelianGroup",
    "Automorphism",
    "ActionHom",
    "SemidirectGroup",
    "PermRep",
    "WreathSpec",
    "build_semidirect",
    "build_wreath",
    "dihedral",
    "group_pq",
    "z_group",
    "regular_rep",
    "enumerate_subgroups",
    "multiplicative_order",
    "pmul",
    "pinv",
    "perm_cycle_count",
]

ELEMENT_CAP = 2000   # hard cap for element enumeration
SUBGROUP_CAP = 200   # hard cap for subgroup-lattice enumeration
PAIR_CHECK_CAP = 200 # exhaustive pairwise homomorphism checks up to this order


# -- permutation helpers ------------------------------------------------------


def pmul(p, q):
    """Compose left to right: apply p, then q."""
    return tuple(q[i] for i in p)


def pinv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _ppow(p, k):
    out = tuple(range(len(p)))
    for _ in range(k):
        out = pmul(out, p)
    return out


def perm_cycle_count(p) -> int:
    """Number of cycles, fixed points included."""
    seen = [False] * len(p)
    count = 0
    for i in range(len(p)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return count


def _is_perm(p, degree):
    return len(p) == degree and sorted(p) == list(range(degree))


# -- abelian groups -----------------------------------------------------------


class AbelianGroup:
    """Z_{n_1} x ... x Z_{n_k}, presented by its cyclic factor list."""

    def __init__(self, factors):
        factors = tuple(int(n) for n in factors)
        if any(n < 1 for n in factors):
            raise ValueError(f"cyclic factors must be >= 1, got {list(factors)}")
        self.factors = factors
        self.order = math.prod(factors)
        self.exponent = math.lcm(*factors) if factors else 1
        self.identity = (0,) * len(factors)
        self._elements = None

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"AbelianGroup({list(self.factors)})"

    def elements(self):
        if self._elements is None:
            if self.order > ELEMENT_CAP:
                raise BudgetError(
                    f"refusing to enumerate a group of order {self.order} "
                    f"(cap {ELEMENT_CAP})"
                )
            self._elements = tuple(iter_product(*(range(n) for n in self.factors)))
        return self._elements

    def contains(self, a):
        return len(a) == len(self.factors) and all(
            0 <= x < n for x, n in zip(a, self.factors)
        )

    def code(self, a) -> int:
        c = 0
        for x, n in zip(a, self.factors):
            c = c * n + x
        return c

    def element_at(self, code: int):
        out = []
        for n in reversed(self.factors):
            code, r = divmod(code, n)
            out.append(r)
        return tuple(reversed(out))

    def add(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.factors))

    def neg(self, a):
        return tuple((-x) % n for x, n in zip(a, self.factors))

    def mul_scalar(self, c, a):
        return tuple((c * x) % n for x, n in zip(a, self.factors))

    def order_of(self, a) -> int:
        o = 1
        for x, n in zip(a, self.factors):
            o = math.lcm(o, n // math.gcd(n, x))
        return o

    def generators(self):
        gens = []
        for i, n in enumerate(self.factors):
            g = [0] * len(self.factors)
            g[i] = 1 % n
            gens.append(tuple(g))
        return tuple(gens)


class Automorphism:
    """Automorphism of an abelian group, given by generator images.

    Well-definedness is an order-divisibility check; bijectivity is verified
    by full enumeration at construction.
    """

    def __init__(self, group: AbelianGroup, gen_images, check: bool = True):
        self.group = group
        self.gen_images = tuple(tuple(v) for v in gen_images)
        self._map = None
        if len(self.gen_images) != len(group.factors):
            raise ValueError(
                f"expected {len(group.factors)} generator images, "
                f"got {len(self.gen_images)}"
            )
        for i, (img, n) in enumerate(zip(self.gen_images, group.factors)):
            if not group.contains(img):
                raise ValueError(f"generator image {i} = {img} is not in {group}")
            if group.mul_scalar(n, img) != group.identity:
                raise ValueError(
                    f"image of generator {i} must have order dividing {n}; "
                    f"{img} has order {group.order_of(img)}"
                )
        if check:
            if len(set(self._table().values())) != group.order:
                raise ValueError("generator images do not define a bijection")

    def _table(self):
        if self._map is None:
            self._map = {a: self._apply_raw(a) for a in self.group.elements()}
        return self._map

    def _apply_raw(self, a):
        acc = self.group.identity
        for x, img in zip(a, self.gen_images):
            if x:
                acc = self.group.add(acc, self.group.mul_scalar(x, img))
        return acc

    def apply(self, a):
        return self._table()[a]

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        return Automorphism(
            self.group,
            tuple(self.apply(img) for img in other.gen_images),
            check=False,
        )

    def inverse(self) -> "Automorphism":
        back = {v: k for k, v in self._table().items()}
        return Automorphism(
            self.group,
            tuple(back[g] for g in self.group.generators()),
            check=False,
        )

    def is_identity(self) -> bool:
        return self.gen_images == self.group.generators()

    @staticmethod
    def identity(group: AbelianGroup) -> "Automorphism":
        return Automorphism(group, group.generators(), check=False)

    def __eq__(self, other):
        return (
            isinstance(other, Automorphism)
            and self.group == other.group
            and self.gen_images == other.gen_images
        )

    def __hash__(self):
        return hash((self.group, self.gen_images))

    def __repr__(self):
        return f"Automorphism({self.group!r}, {self.gen_images})"


class ActionHom:
    """Homomorphism H -> Aut(A), by automorphism images of the standard
    generators of H; validated at construction."""

    def __init__(self, H: AbelianGroup, A: AbelianGroup, images):
        self.H, self.A = H, A
        self.images = tuple(images)
        if len(self.images) != len(H.factors):
            raise ValueError(
                f"expected {len(H.factors)} automorphisms (one per generator "
                f"of H), got {len(self.images)}"
            )
        for j, (aut, n) in enumerate(zip(self.images, H.factors)):
            if not isinstance(aut, Automorphism) or aut.group != A:
                raise ValueError(f"image {j} is not an automorphism of {A!r}")
            p = Automorphism.identity(A)
            for _ in range(n):
                p = aut.compose(p)
            if not p.is_identity():
                raise ValueError(
                    f"image of H generator {j} must have order dividing {n}"
                )
        for i in range(len(self.images)):
            for j in range(i + 1, len(self.images)):
                a, b = self.images[i], self.images[j]
                if a.compose(b) != b.compose(a):
                    raise ValueError(
                        f"automorphism images {i} and {j} do not commute"
                    )
        self._auts = {}

    @staticmethod
    def trivial(H: AbelianGroup, A: AbelianGroup) -> "ActionHom":
        return ActionHom(H, A, tuple(Automorphism.identity(A) for _ in H.factors))

    def automorphism(self, h) -> Automorphism:
        aut = self._auts.get(h)
        if aut is None:
            aut = Automorphism.identity(self.A)
            for x, img in zip(h, self.images):
                for _ in range(x):
                    aut = img.compose(aut)
            self._auts[h] = aut
        return aut

    def apply(self, h, a):
        return self.automorphism(h).apply(a)


# -- semidirect products ------------------------------------------------------


class SemidirectGroup:
    """G = A x|_phi H on pairs (a, h); immutable after construction.

    Multiplication: (a1, h1)(a2, h2) = (a1 + phi_{h1}(a2), h1 + h2), written
    additively in both abelian coordinates.
    """

    def __init__(self, A, H, phi, origin="semidirect"):
        if phi.A != A or phi.H != H:
            raise ValueError("action does not match the given factors")
        self.A, self.H, self.phi = A, H, phi
        self.order = A.order * H.order
        self.identity = (A.identity, H.identity)
        self.origin = origin
        self.natural_rep = None
        self._elements = None
        self._classes = None
        self._class_index = None
        self._char_table = None

    def __repr__(self):
        return (
            f"SemidirectGroup(A={list(self.A.factors)}, "
            f"H={list(self.H.factors)}, order={self.order}, origin={self.origin!r})"
        )

    def elements(self):
        if self._elements is None:
            if self.order > ELEMENT_CAP:
                raise BudgetError(
                    f"refusing to enumerate a group of order {self.order} "
                    f"(cap {ELEMENT_CAP})"
                )
            self._elements = tuple(
                (a, h) for a in self.A.elements() for h in self.H.elements()
            )
        return self._elements

    def element_code(self, g) -> int:
        return self.A.code(g[0]) * self.H.order + self.H.code(g[1])

    def element_at(self, code: int):
        ac, hc = divmod(code, self.H.order)
        return (self.A.element_at(ac), self.H.element_at(hc))

    def mul(self, g1, g2):
        a1, h1 = g1
        a2, h2 = g2
        return (self.A.add(a1, self.phi.apply(h1, a2)), self.H.add(h1, h2))

    def inv(self, g):
        a, h = g
        hi = self.H.neg(h)
        return (self.phi.apply(hi, self.A.neg(a)), hi)

    def power(self, g, k: int):
        if k < 0:
            return self.power(self.inv(g), -k)
        acc = self.identity
        for _ in range(k):
            acc = self.mul(acc, g)
        return acc

    def order_of(self, g) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def generators(self):
        e_a, e_h = self.A.identity, self.H.identity
        return tuple((ga, e_h) for ga in self.A.generators()) + tuple(
            (e_a, gh) for gh in self.H.generators()
        )

    def is_abelian(self) -> bool:
        gens = self.generators()
        return all(
            self.mul(x, y) == self.mul(y, x) for x in gens for y in gens
        )

    def cyclic(self, g):
        out = [self.identity]
        x = g
        while x != self.identity:
            out.append(x)
            x = self.mul(x, g)
        return out

    def closure(self, gens):
        gens = list(gens)
        els = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in els:
                        els.add(y)
                        nxt.append(y)
            frontier = nxt
        return els

    def conjugacy_classes(self):
        """Classes as tuples sorted by element code, listed by minimal
        representative; the identity class comes first."""
        if self._classes is None:
            elems = self.elements()
            assigned = {}
            classes = []
            for g in elems:
                if g in assigned:
                    continue
                cls = {g}
                for t in elems:
                    cls.add(self.mul(self.mul(self.inv(t), g), t))
                cls = tuple(sorted(cls, key=self.element_code))
                for x in cls:
                    assigned[x] = len(classes)
                classes.append(cls)
            self._classes = tuple(classes)
            self._class_index = assigned
        return self._classes

    def class_index(self, g) -> int:
        if self._class_index is None:
            self.conjugacy_classes()
        return self._class_index[g]


def build_semidirect(A, H, phi, origin="semidirect") -> SemidirectGroup:
    """Assemble A x|_phi H; phi must already be a validated ActionHom.

    For small orders this also sanity-checks that the two canonical subsets
    are subgroups and that the A-part is normal.
    """
    G = SemidirectGroup(A, H, phi, origin=origin)
    if G.order <= PAIR_CHECK_CAP:
        e_a, e_h = A.identity, H.identity
        a_part = {(a, e_h) for a in A.elements()}
        h_part = {(e_a, h) for h in H.elements()}
        for part in (a_part, h_part):
            for x in part:
                for y in part:
                    if G.mul(x, y) not in part:
                        raise ValueError("canonical subset is not a subgroup")
        for g in G.elements():
            gi = G.inv(g)
            for x in a_part:
                if G.mul(G.mul(gi, x), g) not in a_part:
                    raise ValueError("the A-part is not normal")
    return G


# -- permutation representations ----------------------------------------------


class PermRep:
    """Permutation representation of a semidirect product, by 0-based image
    permutations of the standard generators of A and of H.

    The induced map is checked to be a homomorphism over all element pairs
    for small groups (deterministically sampled pairs beyond that).
    """

    def __init__(self, group, a_images, h_images, kind="explicit", check=True,
                 degree=None):
        self.group = group
        self.a_images = tuple(tuple(p) for p in a_images)
        self.h_images = tuple(tuple(p) for p in h_images)
        self.kind = kind
        degrees = {len(p) for p in self.a_images + self.h_images}
        if degree is not None:
            degrees.add(degree)
        if not degrees:
            raise ValueError("degree cannot be inferred without generator images")
        if len(degrees) != 1:
            raise ValueError("generator images have mixed degrees")
        self.degree = degrees.pop()
        for p in self.a_images + self.h_images:
            if not _is_perm(p, self.degree):
                raise ValueError(f"{p} is not a permutation of 0..{self.degree - 1}")
        if len(self.a_images) != len(group.A.factors):
            raise ValueError("wrong number of A-generator images")
        if len(self.h_images) != len(group.H.factors):
            raise ValueError("wrong number of H-generator images")
        self._perms = {}
        self._invs = {}
        self._faithful = None
        if check and not self.is_homomorphism():
            raise ValueError("generator images do not induce a homomorphism")

    def perm(self, g):
        p = self._perms.get(g)
        if p is None:
            a, h = g
            p = tuple(range(self.degree))
            for x, img in zip(a, self.a_images):
                if x:
                    p = pmul(p, _ppow(img, x))
            for x, img in zip(h, self.h_images):
                if x:
                    p = pmul(p, _ppow(img, x))
            self._perms[g] = p
        return p

    def inv_perm(self, g):
        p = self._invs.get(g)
        if p is None:
            p = pinv(self.perm(g))
            self._invs[g] = p
        return p

    def is_homomorphism(self) -> bool:
        elems = self.group.elements()
        if self.group.order > PAIR_CHECK_CAP:
            sample = elems[:PAIR_CHECK_CAP]
            pairs = [(x, y) for x in sample for y in self.group.generators()]
            pairs += [(y, x) for x in sample for y in self.group.generators()]
        else:
            pairs = [(x, y) for x in elems for y in elems]
        return all(
            self.perm(self.group.mul(x, y)) == pmul(self.perm(x), self.perm(y))
            for x, y in pairs
        )

    def is_faithful(self) -> bool:
        if self._faithful is None:
            ident = tuple(range(self.degree))
            self._faithful = not any(
                self.perm(g) == ident
                for g in self.group.elements()
                if g != self.group.identity
            )
        return self._faithful

    def extended(self, m: int) -> "PermRep":
        """The same representation padded with fixed points up to degree m."""
        if m < self.degree:
            raise ValueError(f"cannot shrink degree {self.degree} to {m}")
        if m == self.degree:
            return self
        pad = tuple(range(self.degree, m))
        return PermRep(
            self.group,
            tuple(p + pad for p in self.a_images),
            tuple(p + pad for p in self.h_images),
            kind=self.kind,
            check=False,
        )


def regular_rep(G: SemidirectGroup) -> PermRep:
    """Right-translation representation on G's own elements in code order;
    faithful of degree |G|."""
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}

    def image(gen):
        return tuple(index[G.mul(g, gen)] for g in elems)

    e_a, e_h = G.A.identity, G.H.identity
    a_images = tuple(image((ga, e_h)) for ga in G.A.generators())
    h_images = tuple(image((e_a, gh)) for gh in G.H.generators())
    return PermRep(G, a_images, h_images, kind="regular", degree=G.order)


# -- named constructions --------------------------------------------------------


def multiplicative_order(r: int, n: int) -> int:
    """Order of r in (Z/n)*; 0 if r is not a unit mod n."""
    if n == 1:
        return 1
    r %= n
    if math.gcd(r, n) != 1:
        return 0
    k, x = 1, r
    while x != 1:
        x = x * r % n
        k += 1
    return k


def dihedral(s: int) -> SemidirectGroup:
    """The dihedral group of order 2s as C_s x| C_2 with the inverting
    action, carrying its natural degree-s representation."""
    if s < 3:
        raise ValueError(f"dihedral requires s >= 3, got {s}")
    A, H = AbelianGroup((s,)), AbelianGroup((2,))
    phi = ActionHom(H, A, (Automorphism(A, (((-1) % s,),)),))
    G = build_semidirect(A, H, phi, origin="dihedral")
    rot = tuple((i + 1) % s for i in range(s))
    ref = tuple((-i) % s for i in range(s))
    G.natural_rep = PermRep(G, (rot,), (ref,), kind="natural")
    return G


def group_pq(p: int, q: int, r: int) -> SemidirectGroup:
    """The non-abelian group of order p*q as C_q x| C_p, where q is prime,
    p is a prime dividing q - 1 and r has multiplicative order exactly p
    mod q; carries its natural affine degree-q representation."""
    if prime_factors(q) != (q,):
        raise ValueError(f"q = {q} is not prime")
    if prime_factors(p) != (p,):
        raise ValueError(f"p = {p} is not prime")
    if (q - 1) % p:
        raise ValueError(f"p = {p} does not divide q - 1 = {q - 1}")
    d = multiplicative_order(r, q)
    if d != p:
        raise ValueError(
            f"r = {r} must be a primitive root of z^{p} = 1 (mod {q}): its "
            f"multiplicative order mod {q} is {d}, not {p}"
        )
    A, H = AbelianGroup((q,)), AbelianGroup((p,))
    phi = ActionHom(H, A, (Automorphism(A, ((r % q,),)),))
    G = build_semidirect(A, H, phi, origin="pq")
    trans = tuple((x + 1) % q for x in range(q))
    rinv = pow(r, -1, q)
    scale = tuple(rinv * x % q for x in range(q))
    G.natural_rep = PermRep(G, (trans,), (scale,), kind="natural")
    return G


def z_group(s: int, t: int, r: int) -> SemidirectGroup:
    """C_s x| C_t with phi_b(a) = a^r, for gcd(s, t) = 1 and r^t = 1 (mod s).

    The natural degree-s affine representation is bundled when it is
    faithful (multiplicative order of r mod s equal to t); otherwise the
    regular representation stands in.
    """
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    if math.gcd(s, t) != 1:
        raise ValueError(f"gcd(s, t) must be 1, got gcd({s}, {t}) = {math.gcd(s, t)}")
    if pow(r, t, s) != 1 % s:
        raise ValueError(
            f"r = {r} must satisfy r^{t} = 1 (mod {s}); got {pow(r, t, s)}"
        )
    A, H = AbelianGroup((s,)), AbelianGroup((t,))
    phi = ActionHom(H, A, (Automorphism(A, ((r % s,),)),))
    G = build_semidirect(A, H, phi, origin="z_group")
    if s > 1 and multiplicative_order(r, s) == t:
        trans = tuple((x + 1) % s for x in range(s))
        rinv = pow(r, -1, s)
        scale = tuple(rinv * x % s for x in range(s))
        G.natural_rep = PermRep(G, (trans,), (scale,), kind="natural")
    else:
        G.natural_rep = regular_rep(G)
    return G


# -- wreath products -------------------------------------------------------------


@dataclass(frozen=True)
class WreathSpec:
    """A wr_Omega H: base group A, top group H, and an H-set Omega of the
    given size with the action recorded per H-generator as a 0-based
    permutation."""

    A: AbelianGroup
    H: AbelianGroup
    omega_size: int
    h_action: tuple[tuple[int, ...], ...]

    @staticmethod
    def regular(A: AbelianGroup, H: AbelianGroup) -> "WreathSpec":
        """Omega = H acting on itself by translation."""
        elems = H.elements()
        perms = tuple(
            tuple(H.code(H.add(e, gen)) for e in elems) for gen in H.generators()
        )
        return WreathSpec(A, H, H.order, perms)


def build_wreath(spec: WreathSpec) -> SemidirectGroup:
    """K x|_phi H with K = A^Omega (componentwise) and phi permuting the
    coordinates through the H-action on Omega; order |A|^|Omega| * |H|.

    Bundles the natural imprimitive representation on |A| * |Omega| points:
    each copy of A translates its own block, H permutes the blocks.
    """
    A, H, om = spec.A, spec.H, spec.omega_size
    if om < 1:
        raise ValueError("Omega must be nonempty")
    if len(spec.h_action) != len(H.factors):
        raise ValueError(
            f"expected {len(H.factors)} Omega-permutations (one per generator "
            f"of H), got {len(spec.h_action)}"
        )
    for j, (sig, n) in enumerate(zip(spec.h_action, H.factors)):
        if not _is_perm(sig, om):
            raise ValueError(f"h_action[{j}] is not a permutation of 0..{om - 1}")
        if _ppow(sig, n) != tuple(range(om)):
            raise ValueError(
                f"h_action[{j}] must have order dividing {n} to extend to an "
                f"H-action"
            )
    for i in range(len(spec.h_action)):
        for j in range(i + 1, len(spec.h_action)):
            a, b = spec.h_action[i], spec.h_action[j]
            if pmul(a, b) != pmul(b, a):
                raise ValueError(f"h_action[{i}] and h_action[{j}] do not commute")

    K = AbelianGroup(A.factors * om)
    k_gens = K.generators()
    k_a = len(A.factors)

    def block_automorphism(sig):
        images = []
        for w in range(om):
            for i in range(k_a):
                images.append(k_gens[sig[w] * k_a + i])
        return Automorphism(K, images, check=False)

    phi = ActionHom(H, K, tuple(block_automorphism(sig) for sig in spec.h_action))
    G = build_semidirect(K, H, phi, origin="wreath")

    aord = A.order
    degree = aord * om
    a_images = []
    for w in range(om):
        for gen in A.generators():
            p = list(range(degree))
            for x in range(aord):
                p[w * aord + x] = w * aord + A.code(A.add(A.element_at(x), gen))
            a_images.append(tuple(p))
    h_images = []
    for sig in spec.h_action:
        siginv = pinv(sig)
        p = [0] * degree
        for w in range(om):
            for x in range(aord):
                p[w * aord + x] = siginv[w] * aord + x
        h_images.append(tuple(p))
    natural = PermRep(G, tuple(a_images), tuple(h_images), kind="natural")
    # an Omega-action with kernel makes the imprimitive action unfaithful;
    # the regular representation stands in then
    G.natural_rep = natural if natural.is_faithful() else regular_rep(G)
    return G


# -- subgroup enumeration ----------------------------------------------------------


def enumerate_subgroups(G: SemidirectGroup, bound: int = SUBGROUP_CAP):
    """The complete subgroup lattice as frozensets of elements, computed by
    closing the cyclic subgroups under pairwise join until a fixpoint.

    Refuses loudly (never answers partially) when |G| exceeds the bound.
    """
    if G.order > bound:
        raise BudgetError(
            f"subgroup enumeration refused: |G| = {G.order} exceeds bound {bound}"
        )
    subs = {frozenset(G.cyclic(g)) for g in G.elements()}
    frontier = list(subs)
    while frontier:
        fresh = []
        for S in frontier:
            for T in list(subs):
                if S <= T or T <= S:
                    continue
                J = frozenset(G.closure(S | T))
                if J not in subs:
                    subs.add(J)
                    fresh.append(J)
        frontier = fresh
    for S in subs:
        for x in S:
            if G.inv(x) not in S:
                raise AssertionError("subgroup closure failed under inverses")
            for y in S:
                if G.mul(x, y) not in S:
                    raise AssertionError("subgroup closure failed under products")
    return tuple(
        sorted(subs, key=lambda S: (len(S), sorted(map(G.element_code, S))))
    )

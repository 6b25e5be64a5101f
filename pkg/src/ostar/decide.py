"""The o*-basis decision layer.

A symmetry class V_chi(G) admits an o*-basis when it has an orthogonal
basis consisting of decomposable symmetrized tensors e*_alpha.  This module
provides:

  * decide_main_theorem - the semidirect-product criterion: when some
    multi-index has trivial stabilizer and |H| avoids the numerical
    semigroup generated by the prime factors of |A|, the class admits an
    o*-basis iff the character is linear;
  * decide_named_family - the same criterion specialized to dihedral groups
    with odd rotation order, non-abelian groups of order pq, and Z-groups,
    with every hypothesis re-verified computationally;
  * decide_subgroup_criterion - non-existence via a subgroup avoiding the
    character's zero set at index below chi(e)^2;
  * brute_force_verify - an independent exact oracle that searches each
    orbital subspace for s_alpha pairwise-orthogonal symmetrized tensors.

Every verdict carries machine-checkable witnesses.  "Proven absent" and
"not found within budget" are always kept distinct.
"""

from __future__ import annotations

from dataclasses import dataclass

from .characters import character_table, zero_set
from .cyclotomic import CycloNum, SemigroupQuery, prime_factors, semigroup_member
from .errors import BudgetError, ConsistencyError
from .groups import (
    dihedral,
    enumerate_subgroups,
    group_pq,
    regular_rep,
    z_group,
    SUBGROUP_CAP,
)
from .symclass import (
    DEFAULT_INDEX_BUDGET,
    coset_transversal,
    dim_symmetry_class,
    index_from_code,
    orbit_scan,
)

__all__ = [
    "ADMITS",
    "NOT_ADMITS",
    "INCONCLUSIVE",
    "LINEAR_CHARACTER",
    "MAIN_THEOREM",
    "WREATH_COROLLARY",
    "NAMED_FAMILY",
    "SUBGROUP_CRITERION",
    "BRUTE_FORCE",
    "Verdict",
    "TrivialStabilizerSearch",
    "find_trivial_stabilizer_alpha",
    "decide_main_theorem",
    "decide_named_family",
    "decide_subgroup_criterion",
    "brute_force_verify",
    "decide_pipeline",
]

ADMITS = "Admits"
NOT_ADMITS = "NotAdmits"
INCONCLUSIVE = "Inconclusive"

LINEAR_CHARACTER = "LinearCharacter"
MAIN_THEOREM = "MainTheorem"
WREATH_COROLLARY = "WreathCorollary"
NAMED_FAMILY = "NamedFamilyCorollary"
SUBGROUP_CRITERION = "SubgroupCriterion"
BRUTE_FORCE = "BruteForce"

DEFAULT_VERTEX_BUDGET = 512


def element_json(g):
    a, h = g
    return [list(a), list(h)]


@dataclass
class Verdict:
    """Decision with its provenance: which procedure produced it and the
    witnesses that make it checkable."""

    status: str
    justification: str
    witness: dict
    per_orbit: list | None = None

    def to_json(self):
        out = {
            "status": self.status,
            "justification": self.justification,
            "witness": self.witness,
            "per_orbit": self.per_orbit,
        }
        return out


@dataclass
class TrivialStabilizerSearch:
    """Outcome of the hunt for alpha with trivial stabilizer.  alpha=None
    with proven_none=True means exhaustively ruled out; alpha=None with
    proven_none=False means the scan was out of budget with no fast path."""

    alpha: tuple | None
    proven_none: bool
    fast_path: bool

    def to_json(self):
        return {
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "status": (
                "found"
                if self.alpha is not None
                else "proven_none" if self.proven_none else "budget_exceeded"
            ),
            "fast_path": self.fast_path,
        }


def find_trivial_stabilizer_alpha(G, rep, n, m=None,
                                  index_budget=DEFAULT_INDEX_BUDGET):
    """Lex-min multi-index with trivial stabilizer, found by an ascending
    scan when n^m fits the budget; beyond the budget the regular
    representation still yields a verified witness (a single distinguished
    letter at the identity's position) without scanning."""
    if m is None:
        m = rep.degree
    if m < rep.degree:
        raise ValueError(f"m = {m} is below the representation degree {rep.degree}")
    total = n**m
    nonid = [g for g in G.elements() if g != G.identity]
    if total <= index_budget:
        invs = [rep.inv_perm(g) for g in nonid]
        for code in range(total):
            alpha = index_from_code(code, m, n)
            base = alpha[: rep.degree]
            for iv in invs:
                if tuple(base[j] for j in iv) == base:
                    break
            else:
                return TrivialStabilizerSearch(alpha, False, False)
        return TrivialStabilizerSearch(None, True, False)
    if rep.kind == "regular" and n >= 2:
        alpha = tuple(2 if i == 0 else 1 for i in range(m))
        base = alpha[: rep.degree]
        for g in nonid:
            if tuple(base[j] for j in rep.inv_perm(g)) == base:
                raise ConsistencyError(
                    "regular-representation fast path produced a stabilized index"
                )
        return TrivialStabilizerSearch(alpha, False, True)
    return TrivialStabilizerSearch(None, False, False)


def _require_validated(G, chi):
    table = character_table(G)
    if not table.report.ok:
        raise ConsistencyError(
            "character table failed validation: " + "; ".join(table.report.failures)
        )
    if chi.G is not G:
        raise ValueError("character does not belong to this group")
    return table


def _semigroup_facts(G):
    primes = prime_factors(G.A.order)
    k = G.H.order
    if primes:
        member = semigroup_member(SemigroupQuery(k, frozenset(primes)))
    else:
        member = k == 0
    return {"k": k, "primes": list(primes), "member": member}


def decide_main_theorem(G, rep, chi, n, m=None,
                        index_budget=DEFAULT_INDEX_BUDGET) -> Verdict:
    """Both hypotheses are established computationally before anything is
    asserted: a trivial-stabilizer multi-index and |H| outside
    N_0<Prime(|A|)>.  Linear characters short-circuit to Admits; a
    zero-dimensional class is reported as such rather than as a vacuous
    Admits."""
    _require_validated(G, chi)
    justification = WREATH_COROLLARY if G.origin == "wreath" else MAIN_THEOREM
    rep_eff = rep if m is None else rep.extended(m)
    dim = dim_symmetry_class(G, rep_eff, chi, n)
    if dim == 0:
        return Verdict(
            INCONCLUSIVE,
            justification,
            {"zero_dimension": True, "dim": 0},
        )
    if chi.degree == 1:
        return Verdict(ADMITS, LINEAR_CHARACTER, {"degree": 1, "dim": dim})
    search = find_trivial_stabilizer_alpha(
        G, rep, n, m=m, index_budget=index_budget
    )
    sg = _semigroup_facts(G)
    witness = {"alpha_search": search.to_json(), "semigroup": sg, "dim": dim}
    if search.alpha is not None and not sg["member"]:
        return Verdict(
            NOT_ADMITS,
            justification,
            {"alpha": list(search.alpha), "fast_path": search.fast_path,
             "semigroup": sg, "dim": dim},
        )
    failed = []
    if search.alpha is None:
        failed.append(
            "no_trivial_stabilizer_alpha"
            if search.proven_none
            else "trivial_stabilizer_search_out_of_budget"
        )
    if sg["member"]:
        failed.append("H_order_in_semigroup")
    witness["failed_hypotheses"] = failed
    return Verdict(INCONCLUSIVE, justification, witness)


_FAMILIES = ("dihedral_odd_s", "pq", "z_group")


def decide_named_family(family, params, chi_index, n, rep_kind="natural",
                        index_budget=DEFAULT_INDEX_BUDGET) -> Verdict:
    """Build the named group, pick the chi_index-th character of its
    deterministic table, and run the semidirect criterion; nothing from the
    family statement is trusted without re-verification."""
    if family == "dihedral_odd_s":
        s = params["s"]
        if s % 2 == 0:
            raise ValueError(f"family dihedral_odd_s requires odd s, got {s}")
        G = dihedral(s)
    elif family == "pq":
        G = group_pq(params["p"], params["q"], params["r"])
    elif family == "z_group":
        G = z_group(params["s"], params["t"], params["r"])
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {_FAMILIES}")
    rep = G.natural_rep if rep_kind == "natural" else regular_rep(G)
    table = character_table(G)
    chi = table.chars[chi_index]
    verdict = decide_main_theorem(G, rep, chi, n, index_budget=index_budget)
    if verdict.status == ADMITS:
        return verdict  # LinearCharacter stands on its own
    witness = {"family": family, "params": dict(params)}
    witness.update(verdict.witness)
    return Verdict(verdict.status, NAMED_FAMILY, witness, verdict.per_orbit)


def decide_subgroup_criterion(G, rep, chi, n, m=None,
                              subgroup_bound=SUBGROUP_CAP,
                              index_budget=DEFAULT_INDEX_BUDGET) -> Verdict:
    """Non-existence when some multi-index has trivial stabilizer and some
    subgroup avoids the character's zero set at index below chi(e)^2."""
    _require_validated(G, chi)
    if chi.degree == 1:
        return Verdict(
            INCONCLUSIVE,
            SUBGROUP_CRITERION,
            {"reason": "no subgroup can have index below 1 (linear character)"},
        )
    search = find_trivial_stabilizer_alpha(G, rep, n, m=m, index_budget=index_budget)
    if search.alpha is None:
        return Verdict(
            INCONCLUSIVE,
            SUBGROUP_CRITERION,
            {"alpha_search": search.to_json(),
             "failed_hypotheses": ["no_trivial_stabilizer_alpha"
                                   if search.proven_none
                                   else "trivial_stabilizer_search_out_of_budget"]},
        )
    try:
        subs = enumerate_subgroups(G, bound=subgroup_bound)
    except BudgetError as exc:
        return Verdict(
            INCONCLUSIVE, SUBGROUP_CRITERION, {"budget_refused": str(exc)}
        )
    zeros = zero_set(chi)
    target = chi.degree**2
    # larger subgroups first: smaller index, stronger witness, deterministic
    for S in sorted(subs, key=lambda S: (-len(S), sorted(map(G.element_code, S)))):
        if G.order >= len(S) * target:
            continue  # index not below chi(e)^2
        if any(g in zeros for g in S):
            continue
        return Verdict(
            NOT_ADMITS,
            SUBGROUP_CRITERION,
            {
                "alpha": list(search.alpha),
                "subgroup": sorted(
                    (element_json(g) for g in S),
                    key=lambda e: (e[0], e[1]),
                ),
                "subgroup_order": len(S),
                "index": G.order // len(S),
                "chi_degree_squared": target,
            },
        )
    return Verdict(
        INCONCLUSIVE,
        SUBGROUP_CRITERION,
        {
            "alpha": list(search.alpha),
            "reason": "every subgroup of index below chi(e)^2 meets the zero set",
        },
    )


def _find_clique(adj, k):
    """Deterministic backtracking k-clique search, greatest-degree-first."""
    nvert = len(adj)
    if k <= 0:
        return []
    deg = [sum(row) for row in adj]
    order = sorted(range(nvert), key=lambda v: (-deg[v], v))

    def grow(clique, cands):
        if len(clique) == k:
            return clique
        if len(clique) + len(cands) < k:
            return None
        for i, v in enumerate(cands):
            got = grow(clique + [v], [u for u in cands[i + 1:] if adj[v][u]])
            if got is not None:
                return got
        return None

    return grow([], order)


def brute_force_verify(G, rep, chi, n, m=None,
                       index_budget=DEFAULT_INDEX_BUDGET,
                       vertex_budget=DEFAULT_VERTEX_BUDGET,
                       threads=1) -> Verdict:
    """Independent exact oracle.

    For every orbit representative alpha in Delta-bar, build the
    orthogonality graph on the right cosets of G_alpha (edge = exactly-zero
    induced inner product) and search for a clique of size s_alpha.  The
    class admits an o*-basis iff every orbit yields one: the orbital
    subspaces are orthogonal to each other and each candidate tensor lives
    in exactly one of them, so no global search across orbits is needed.
    """
    _require_validated(G, chi)
    rep_eff = rep if m is None else rep.extended(m)
    m_eff = rep_eff.degree
    try:
        records = orbit_scan(G, rep_eff, chi, m_eff, n, index_budget=index_budget)
    except BudgetError as exc:
        return Verdict(INCONCLUSIVE, BRUTE_FORCE, {"budget_refused": str(exc)})
    bar = [r for r in records if r.in_delta_bar]
    if sum(r.s_alpha for r in bar) == 0:
        return Verdict(
            INCONCLUSIVE, BRUTE_FORCE, {"zero_dimension": True, "dim": 0}
        )

    def handle(record):
        alpha = record.rep
        reps = coset_transversal(alpha, G, rep_eff)
        if len(reps) > vertex_budget:
            return {
                "rep": list(alpha),
                "s_alpha": record.s_alpha,
                "clique": None,
                "budget_exceeded": True,
            }
        nvert = len(reps)
        invs = [G.inv(r) for r in reps]
        adj = [[False] * nvert for _ in range(nvert)]
        for i in range(nvert):
            for j in range(i + 1, nvert):
                g = G.mul(reps[j], invs[i])
                acc = CycloNum.zero()
                for h in record.stabilizer:
                    acc = acc + chi.value(G.mul(g, h))
                if acc.is_zero():
                    adj[i][j] = adj[j][i] = True
        clique = _find_clique(adj, record.s_alpha)
        return {
            "rep": list(alpha),
            "s_alpha": record.s_alpha,
            "clique": (
                None
                if clique is None
                else [element_json(reps[v]) for v in sorted(clique)]
            ),
        }

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_orbit = list(pool.map(handle, bar))
    else:
        per_orbit = [handle(r) for r in bar]

    out_of_budget = [p for p in per_orbit if p.get("budget_exceeded")]
    if out_of_budget:
        return Verdict(
            INCONCLUSIVE,
            BRUTE_FORCE,
            {"budget_refused": f"{len(out_of_budget)} orbit(s) exceeded the "
                               f"vertex budget {vertex_budget}"},
            per_orbit,
        )
    failures = [p for p in per_orbit if p["clique"] is None]
    if failures:
        # records arrive in lex order of representatives, so the first
        # failure is the lex-min one
        return Verdict(
            NOT_ADMITS,
            BRUTE_FORCE,
            {"failing_orbit": failures[0]["rep"],
             "s_alpha": failures[0]["s_alpha"]},
            per_orbit,
        )
    return Verdict(
        ADMITS, BRUTE_FORCE, {"orbits_in_delta_bar": len(bar)}, per_orbit
    )


def decide_pipeline(G, rep, chi, n, m=None,
                    index_budget=DEFAULT_INDEX_BUDGET,
                    subgroup_bound=SUBGROUP_CAP) -> Verdict:
    """Cheapest sound certificate first: linear short-circuit inside the
    semidirect criterion, then the subgroup criterion; the brute-force
    oracle is separate (see brute_force_verify)."""
    v = decide_main_theorem(G, rep, chi, n, m=m, index_budget=index_budget)
    if v.status != INCONCLUSIVE or v.witness.get("zero_dimension"):
        return v
    v2 = decide_subgroup_criterion(
        G, rep, chi, n, m=m,
        subgroup_bound=subgroup_bound, index_budget=index_budget,
    )
    if v2.status != INCONCLUSIVE:
        return v2
    return Verdict(
        INCONCLUSIVE,
        v2.justification,
        {"main_theorem": v.witness, "subgroup_criterion": v2.witness},
    )

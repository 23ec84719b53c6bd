"""Minimal faithful representations: component counts, minimal bases, rdim.

Three routes to the minimal faithful dimension, used to cross-check each
other: a greedy minimal-basis construction when the socle is a central
p-subgroup, a shortest-generating-system search on the character module of an
abelian socle, and a general branch-and-bound over kernel intersections.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .abelian import (
    AbelianStructure,
    GModule,
    dual_module,
    module_from_subgroup,
    rank_zg,
    structure,
    submodule_span,
)
from .chartab import CharacterTable, Cyclotomic, character_table, kernel
from .errors import (
    HypothesisFailed,
    InternalInconsistency,
    NotSemiFaithful,
    OutOfScope,
    SearchBudgetExceeded,
)
from .fields import (
    FieldDescriptor,
    has_primitive_root,
    is_semi_faithful,
    k_center,
    supports_splitting,
)
from .groups import FiniteGroup, Subgroup, all_subgroups

PATH_C_BUDGET = 10_000_000
ORACLE_ROW_LIMIT = 40


# ---------------------------------------------------------------------------
# component counts


def min_components(g: FiniteGroup, f: FieldDescriptor) -> int:
    """Least number of irreducible components of a faithful representation."""
    if not is_semi_faithful(g, f):
        raise NotSemiFaithful("no completely reducible faithful representation")
    if g.order == 1:
        return 1
    a = g.socle_abelian()
    if f.characteristic > 0 and a.order % f.characteristic == 0:
        raise InternalInconsistency(
            "semi-faithful group with char dividing the abelian socle")
    if a.order == 1:
        return 1
    return max(rank_zg(module_from_subgroup(g, a)), 1)


def min_components_oracle(g: FiniteGroup, f: FieldDescriptor,
                          table: Optional[CharacterTable] = None) -> int:
    """Independent brute force: smallest set of rows with trivial joint kernel."""
    if not supports_splitting(g, f):
        raise OutOfScope("field does not split the group")
    if g.order == 1:
        return 1
    if table is None:
        table = character_table(g)
    n = table.n_classes
    if n > ORACLE_ROW_LIMIT:
        raise SearchBudgetExceeded(f"{n} rows exceed the oracle limit")
    kernels = [frozenset(kernel(table, i).elements) for i in range(n)]
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            acc = kernels[combo[0]]
            for i in combo[1:]:
                acc = acc & kernels[i]
            if acc == frozenset([0]):
                return r
    raise InternalInconsistency("no faithful row combination found")


# ---------------------------------------------------------------------------
# restriction data: characters of an abelian subgroup inside irreducible rows


@dataclass
class RestrictionData:
    """Which characters of an abelian normal subgroup appear in which rows."""

    table: CharacterTable
    subgroup: Subgroup
    st: AbelianStructure
    row_chars: list[frozenset]  # row -> set of character coefficient tuples
    f_min: dict  # char tuple -> (degree, row) of the cheapest containing row

    def f(self, chi: tuple) -> int:
        return self.f_min[chi][0]

    def f_row(self, chi: tuple) -> int:
        return self.f_min[chi][1]


def restriction_data(table: CharacterTable, a: Subgroup) -> RestrictionData:
    g = table.group
    st = structure(a)
    e = table.conductor
    cmap = g.class_map()
    elems = sorted(a.elements)
    inv_n = Fraction(1, len(elems))
    # precompute conj(chi(a)) exponents for each character tuple and element
    char_tuples = list(itertools.product(*[range(d) for d in st.divisors]))
    elem_vecs = {x: st.to_vector(x) for x in elems}
    row_chars = []
    f_min: dict = {}
    for row in range(table.n_classes):
        vals = {x: table.values[row][cmap[x]] for x in elems}
        present = set()
        for ct in char_tuples:
            acc = Cyclotomic.zero(e)
            for x in elems:
                t = sum(c * v * (e // d)
                        for c, v, d in zip(ct, elem_vecs[x], st.divisors)) % e \
                    if st.divisors else 0
                acc = acc + vals[x] * Cyclotomic.zeta_power(e, (-t) % e)
            mult = acc.scale(inv_n)
            if not mult.is_zero():
                present.add(ct)
                deg = table.degrees[row]
                if ct not in f_min or (deg, row) < f_min[ct]:
                    f_min[ct] = (deg, row)
        row_chars.append(frozenset(present))
    return RestrictionData(table, a, st, row_chars, f_min)


# ---------------------------------------------------------------------------
# minimal bases


@dataclass
class MinimalBasis:
    basis: list[tuple]  # character coefficient tuples
    f_values: list[int]
    rows: list[int]


def minimal_basis(divisors: list[int], f: Callable[[tuple], int],
                  row_of: Optional[Callable[[tuple], int]] = None) -> MinimalBasis:
    """Greedy basis of an elementary abelian character group, cheapest first.

    At each step the character minimizing (f value, lexicographic tuple)
    outside the span of the previous picks is chosen.
    """
    if divisors and any(d != divisors[0] for d in divisors):
        raise HypothesisFailed("character group is not elementary abelian")
    p = divisors[0] if divisors else 1
    r = len(divisors)
    all_chars = list(itertools.product(*[range(d) for d in divisors]))
    span = {(0,) * r}
    basis: list[tuple] = []
    f_values: list[int] = []
    rows: list[int] = []
    for _ in range(r):
        candidates = [c for c in all_chars if c not in span]
        chi = min(candidates, key=lambda c: (f(c), c))
        basis.append(chi)
        f_values.append(f(chi))
        if row_of is not None:
            rows.append(row_of(chi))
        # extend span: all combinations of old span with multiples of chi
        new_span = set()
        for s in span:
            for m in range(p):
                new_span.add(tuple((x + m * y) % d
                                   for x, y, d in zip(s, chi, divisors)))
        span = new_span
    return MinimalBasis(basis, f_values, rows)


# ---------------------------------------------------------------------------
# rdim


@dataclass
class RdimWitness:
    value: int
    component_rows: list[int]
    dimension_vector: list[int]
    path: str

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "component_rows": self.component_rows,
            "dimension_vector": self.dimension_vector,
            "path": self.path,
        }


def _verify_witness(table: CharacterTable, rows: list[int]) -> None:
    acc = frozenset(table.group.elements())
    for i in rows:
        acc = acc & kernel(table, i).elements
    if acc != frozenset([0]):
        raise InternalInconsistency("rdim witness rows are not jointly faithful")


def _is_prime_power(n: int) -> Optional[int]:
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            m = n
            while m % p == 0:
                m //= p
            return p if m == 1 else None
        p += 1
    return n


def rdim(g: FiniteGroup, f: FieldDescriptor,
         force_path: Optional[str] = None,
         table: Optional[CharacterTable] = None) -> RdimWitness:
    """Exact least dimension of a faithful representation, with witness rows."""
    if not supports_splitting(g, f):
        raise OutOfScope("field does not split the group")
    if g.order == 1:
        return RdimWitness(0, [], [], "trivial")
    if table is None:
        table = character_table(g)
    soc = g.socle()
    path = force_path
    if path is None:
        if soc.is_central() and _is_prime_power(soc.order):
            path = "A"
        elif soc.is_abelian():
            path = "B"
        else:
            path = "C"
    if path == "A":
        witness = _rdim_path_a(g, table, soc)
    elif path == "B":
        witness = _rdim_path_b(g, table)
    else:
        witness = _rdim_path_c(g, table)
    _verify_witness(table, witness.component_rows)
    return witness


def _rdim_path_a(g: FiniteGroup, table: CharacterTable,
                 soc: Subgroup) -> RdimWitness:
    if not soc.is_central() or _is_prime_power(soc.order) is None:
        raise HypothesisFailed("socle is not a central prime-power subgroup")
    rd = restriction_data(table, soc)
    mb = minimal_basis(rd.st.divisors, rd.f, rd.f_row)
    rows = sorted(mb.rows)
    dims = sorted(mb.f_values)
    return RdimWitness(sum(dims), rows, dims, "A")


def _rdim_path_b(g: FiniteGroup, table: CharacterTable) -> RdimWitness:
    soc = g.socle()
    if not soc.is_abelian():
        raise HypothesisFailed("socle is not abelian")
    rd = restriction_data(table, soc)
    dual = dual_module(module_from_subgroup(g, soc))
    # cheapest generating system of the character module: shortest-path search
    # over submodules, one added character (with its cheapest row) per step
    zero = dual.zero()
    start = submodule_span(dual, [])
    full = frozenset(dual.all_vectors())
    nonzero = [c for c in dual.all_vectors() if c != zero]
    best: dict = {start: (0, [])}
    heap = [(0, 0, start, [])]
    counter = 0
    while heap:
        cost, _, state, picks = heapq.heappop(heap)
        if best.get(state, (cost + 1,))[0] < cost:
            continue
        if state == full:
            rows = sorted(rd.f_row(c) for c in picks)
            dims = sorted(rd.f(c) for c in picks)
            return RdimWitness(cost, rows, dims, "B")
        for chi in nonzero:
            if chi in state:
                continue
            nxt = submodule_span(dual, list(state) + [chi])
            ncost = cost + rd.f(chi)
            if nxt not in best or best[nxt][0] > ncost:
                counter += 1
                best[nxt] = (ncost, picks + [chi])
                heapq.heappush(heap, (ncost, counter, nxt, picks + [chi]))
    raise InternalInconsistency("character module has no generating system")


def _rdim_path_c(g: FiniteGroup, table: CharacterTable,
                 budget: int = PATH_C_BUDGET) -> RdimWitness:
    n = table.n_classes
    order = [i for i in range(n)]
    order.sort(key=lambda i: (table.degrees[i], i))
    kernels = [frozenset(kernel(table, i).elements) for i in order]
    degrees = [table.degrees[i] for i in order]
    trivial = frozenset([0])
    best_sum = [math.inf]
    best_rows: list[Optional[tuple]] = [None]
    nodes = [0]

    # suffix feasibility: intersection of all kernels from position i on
    suffix = [frozenset(g.elements())] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] & kernels[i]

    def dfs(pos: int, ker: frozenset, total: int, chosen: tuple):
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded("kernel-intersection search budget exhausted")
        if ker == trivial:
            if total < best_sum[0] or (total == best_sum[0] and
                                       (best_rows[0] is None or chosen < best_rows[0])):
                best_sum[0] = total
                best_rows[0] = chosen
            return
        if pos == n:
            return
        if ker & suffix[pos] != trivial:
            return  # remaining rows can never finish the job
        if total + degrees[pos] > best_sum[0]:
            return  # admissible bound: at least one more component needed
        # option 1: take row pos (only if it strictly shrinks the kernel)
        nk = ker & kernels[pos]
        if nk != ker:
            dfs(pos + 1, nk, total + degrees[pos], chosen + (order[pos],))
        # option 2: skip row pos
        dfs(pos + 1, ker, total, chosen)

    dfs(0, frozenset(g.elements()), 0, ())
    if best_rows[0] is None:
        raise InternalInconsistency("no faithful combination of rows exists")
    rows = sorted(best_rows[0])
    dims = sorted(table.degrees[i] for i in rows)
    return RdimWitness(int(best_sum[0]), rows, dims, "C")


# ---------------------------------------------------------------------------
# central-extension transfer


@dataclass
class TransferReport:
    equality: bool
    rk_z_group: int
    rk_z_quotient: int
    known_side: str
    known_value: int
    transferred_value: int
    transferred_is_exact: bool
    economical_factor_exponent: int
    quotient_rank_identity: bool


def _direct_factor_exponent(gab: FiniteGroup, image: frozenset) -> int:
    """Least exponent of a direct factor of an abelian group containing a subgroup."""
    best = None
    subs = all_subgroups(gab)
    sub_index = {s: Subgroup(gab, s) for s in subs}
    for s in subs:
        if not image <= s:
            continue
        size = len(s)
        if gab.order % size != 0:
            continue
        comp_size = gab.order // size
        has_complement = any(
            len(t) == comp_size and (s & t) == frozenset([0])
            for t in subs
        )
        if not has_complement:
            continue
        exp = 1
        for x in s:
            exp = math.lcm(exp, gab.element_order(x))
        if best is None or exp < best:
            best = exp
    if best is None:
        raise HypothesisFailed("no direct factor contains the central image")
    return best


def check_transfer_hypotheses(g: FiniteGroup, h: Subgroup,
                              f: FieldDescriptor) -> int:
    """Verify the central-extension hypotheses; returns the factor exponent."""
    if not h.is_central():
        raise HypothesisFailed("H is central in G")
    if not is_semi_faithful(g, f):
        raise HypothesisFailed("G is semi-faithful over k")
    comm = g.commutator_subgroup()
    if (h.elements & comm.elements) != frozenset([0]):
        raise HypothesisFailed("H intersects the commutator subgroup trivially")
    qm = g.quotient(comm)
    image = frozenset(qm.projection[x] for x in h.elements)
    exp_factor = _direct_factor_exponent(qm.target, image)
    if not has_primitive_root(f, exp_factor):
        raise HypothesisFailed(
            f"k contains a primitive root of unity of order {exp_factor}")
    return exp_factor


def central_ext_rdim(g: FiniteGroup, h: Subgroup, f: FieldDescriptor,
                     known_side: str, known_value: int) -> TransferReport:
    """Transfer a representation-dimension value across a central quotient.

    known_side is "group" (value is rdim of g) or "quotient" (rdim of g/h).
    When the socle of g is a central prime-power subgroup the defect
    rdim - rk(scalar center) matches on both sides exactly; otherwise only
    the inequality direction is certified and the transferred value is a bound.
    """
    exp_factor = check_transfer_hypotheses(g, h, f)
    from .abelian import structure as _structure

    rk_g = _structure(k_center(g, f)).rank()
    qm = g.quotient(h)
    quotient = qm.target
    rk_q = _structure(k_center(quotient, f)).rank()

    # quotient rank identity: the scalar center maps onto the quotient's
    zk = k_center(g, f)
    image = frozenset(qm.projection[x] for x in zk.elements)
    zq = k_center(quotient, f)
    identity_holds = image == zq.elements

    soc = g.socle()
    equality = soc.is_central() and _is_prime_power(soc.order) is not None

    if known_side == "quotient":
        transferred = known_value - rk_q + rk_g
    elif known_side == "group":
        transferred = known_value - rk_g + rk_q
    else:
        raise HypothesisFailed("known_side must be 'group' or 'quotient'")
    return TransferReport(
        equality=equality,
        rk_z_group=rk_g,
        rk_z_quotient=rk_q,
        known_side=known_side,
        known_value=known_value,
        transferred_value=transferred,
        transferred_is_exact=equality,
        economical_factor_exponent=exp_factor,
        quotient_rank_identity=identity_holds,
    )

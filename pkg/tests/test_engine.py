"""Bound engine: rules, facts, transfers, covariant dimension, conjecture."""

import pytest

from edimkit.engine import (
    ConjecturalValue,
    EdimResult,
    FactStore,
    conjectural_edim,
    covdim,
    edim,
)
from edimkit.errors import FactConflict, HypothesisFailed, NotSemiFaithful
from edimkit.fields import (
    algebraically_closed,
    cyclotomic_field,
    k_center,
    parse_field,
    rationals,
)
from edimkit.abelian import structure
from edimkit.groups import Subgroup, direct_product
from edimkit.named import cyclic, named_group

KBAR = algebraically_closed(0)


def test_trivial_group():
    r = edim(cyclic(1), rationals())
    assert r.exact and r.lower == 0


def test_nontrivial_lower_bound():
    # S3 over a field with no roots beyond +-1 in char 7 context: lower >= 1
    r = edim(named_group("S3"), parse_field("char=7;zeta=2"))
    assert r.lower >= 1


def test_abelian_rule():
    assert edim(named_group("C2xC2"), rationals()).lower == 2
    assert edim(named_group("C2xC2"), rationals()).exact
    r = edim(named_group("C12"), cyclotomic_field(12))
    assert r.exact and r.lower == 1
    # without the needed roots of unity the abelian rule must not fire
    r = edim(named_group("C3"), rationals())
    assert not (r.exact and r.lower == 1 and
                any(t[0] == "R3" for t in r.trace))


def test_gcd_min_rule_exactness():
    for name, fld, expected in [("Q8", cyclotomic_field(4), 2),
                                ("D4", cyclotomic_field(4), 2),
                                ("Heis3", cyclotomic_field(3), 3)]:
        r = edim(named_group(name), fld)
        assert r.exact and r.lower == expected, name
        assert any(t[0] == "R5" for t in r.trace), name


def test_s3_engine_composition():
    r = edim(named_group("S3"), rationals())
    assert r.exact and r.lower == 1
    rules = {t[0] for t in r.trace}
    assert "R2" in rules and "R4" in rules


def test_product_with_abelian_rule():
    g = named_group("Q8xC3")
    r = edim(g, cyclotomic_field(12))
    assert r.exact and r.lower == 2
    assert any(t[0] == "R7" for t in r.trace)


def test_r6_round_trip_restores_bounds():
    pairs = [("Q8xC2", 2), ("D4xC2", 2), ("Q8xC4", 4),
             ("Heis3xC3", 3), ("C4", 2)]
    k12 = cyclotomic_field(12)
    for name, h_order in pairs:
        g = named_group(name)
        z = g.center()
        comm = g.commutator_subgroup().elements
        h = next(
            Subgroup(g, s, normal=True)
            for s in _central_subgroups(g)
            if len(s) == h_order and (s & comm) == frozenset([0]))
        q = g.quotient(h).target
        rg = edim(g, k12)
        rq = edim(q, k12)
        assert rg.exact and rq.exact, name
        rkg = structure(k_center(g, k12)).rank()
        rkq = structure(k_center(q, k12)).rank()
        # the defect over the scalar-center rank transfers exactly
        assert rg.lower - rkg == rq.lower - rkq, name


def _central_subgroups(g):
    from edimkit.groups import all_subgroups

    z = g.center()
    zg, back = z.as_group()
    out = []
    for s in all_subgroups(zg):
        out.append(frozenset(back[x] for x in s))
    return out


def test_subgroup_lower_bound():
    # C7 : C3 would need R8; here check it fires for a plain case: D5 over
    # a field with 5th roots but testing the cyclic-subgroup machinery
    g = named_group("D5")
    r = edim(g, cyclotomic_field(20))
    # C5 <= D5 gives lower >= 1 - 0 + 0; the exact value needs R5
    assert r.lower >= 1


def test_char_p_estimate_rule():
    # Q8 in char 2: quotient by the center (Klein) has edim 2 there is no
    # elementary abelian route... use C4 in char 2 instead: A = C2,
    # C4/C2 = C2, so the interval is [edim C2, edim C2 + 1]
    f2 = parse_field("char=2;zeta=1")
    r = edim(cyclic(4), f2)
    assert r.lower >= 1
    assert r.upper is not None and r.upper <= 2
    assert any(t[0] == "R10" for t in r.trace)


def test_fact_store_merge_and_conflict():
    s = FactStore()
    s.add("fp", "Q", 2, 3, "a")
    s.add("fp", "Q", 1, 3, "b")
    assert s.data[("fp", "Q")]["lower"] == 2
    assert s.data[("fp", "Q")]["upper"] == 3
    with pytest.raises(FactConflict):
        s.add("fp", "Q", 4, 5, "c")
    with pytest.raises(FactConflict):
        s.add("fp2", "Q", 5, 4, "bad interval")


def test_fact_store_round_trip(tmp_path):
    s = FactStore()
    s.add("fp", "Q", 2, 3, "lit")
    p = tmp_path / "facts.json"
    s.save(str(p))
    s2 = FactStore.load(str(p))
    assert s2.serialize() == s.serialize()


def test_fact_injection_and_conflict_with_derivation():
    g = named_group("C2xC2")
    fp = g.fingerprint(with_generators=False)
    s = FactStore()
    s.add(fp, "Q", 2, 2, "literature")
    r = edim(g, rationals(), facts=s)
    assert r.exact and r.lower == 2
    bad = FactStore()
    bad.add(fp, "Q", 3, 3, "wrong")
    with pytest.raises(FactConflict):
        edim(g, rationals(), facts=bad)


def test_covdim_theorem():
    assert covdim(named_group("S3"), rationals()).lower == 2
    assert covdim(named_group("S3"), rationals()).exact
    r = covdim(named_group("Q8"), cyclotomic_field(4))
    assert r.exact and r.lower == 2  # scalar center nontrivial
    assert covdim(cyclic(1), rationals()).lower == 0


def test_covdim_gate():
    with pytest.raises(NotSemiFaithful):
        covdim(named_group("Q8"), algebraically_closed(2))


def test_conjectural_nilpotent():
    g = named_group("Q8xC3")
    cj = conjectural_edim(g, cyclotomic_field(12))
    assert cj.value == 2 and cj.conjectural
    assert cj.per_prime[2] == (2, 1)
    assert cj.per_prime[3] == (1, 1)
    assert cj.socle_rank == 1  # C2 x C3 is cyclic
    q8 = named_group("Q8")
    assert conjectural_edim(q8, cyclotomic_field(4)).value == 2


def test_conjectural_hypothesis_failure():
    with pytest.raises(HypothesisFailed):
        conjectural_edim(named_group("S3"), KBAR)  # socle not central


def test_monotone_trace():
    r = edim(named_group("Q8xC3"), cyclotomic_field(12))
    lower = 0
    upper = None
    for rule, _, _, bound in r.trace:
        if bound.startswith("lower >= "):
            v = int(bound.split()[-1])
            assert v > lower
            lower = v
        else:
            v = int(bound.split()[-1])
            assert upper is None or v < upper
            upper = v
    assert lower == r.lower and upper == r.upper


def test_r3_r5_consistency():
    # abelian p-group: both the abelian rule and the gcd=min rule apply
    g = named_group("C2xC4")
    k4 = cyclotomic_field(4)
    r = edim(g, k4)
    assert r.exact and r.lower == 2
    from edimkit.repdim import rdim

    assert rdim(g, k4).value == 2

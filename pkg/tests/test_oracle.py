import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import published as pv
from starter_forge import oracle
from starter_forge.cyclotomy import cosets_for
from starter_forge.ffield import field_of_order, residue_sets
from starter_forge.starter import dinitz_betas, dinitz_starter, search_beta_pairs, two_quotient_starter, verify_starter


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25, 27, 29, 41, 49, 121, 125])
def test_oracle_residues(q):
    F = field_of_order(q)
    assert oracle.oracle_residues(F) == residue_sets(F)[0]


def test_oracle_residues_9():
    assert len(oracle.oracle_residues(field_of_order(9))) == 4


def test_oracle_verify_published_starters():
    F = field_of_order(29)
    for pairs in pv.STARTERS_29.values():
        report = oracle.oracle_verify(F, pairs)
        assert report.is_starter and report.is_strong and report.sum_count == 14
    F = field_of_order(41)
    for pairs in pv.STARTERS_41.values():
        assert oracle.oracle_verify(F, pairs).is_strong


def test_oracle_verify_rejects():
    F = field_of_order(7)
    assert not oracle.oracle_verify(F, [(1, 2), (3, 4), (5, 6)]).is_starter
    assert not oracle.oracle_verify(F, [(1, 3), (2, 6)]).is_starter
    report = oracle.oracle_verify(field_of_order(13), [(x, 13 - x) for x in range(1, 7)])
    assert report.is_starter and not report.is_strong


def test_lcg_is_deterministic():
    a, b = oracle.Lcg64(7), oracle.Lcg64(7)
    assert [a.next() for _ in range(5)] == [b.next() for _ in range(5)]
    assert oracle.Lcg64(7).next() != oracle.Lcg64(8).next()


def test_mutation_kinds():
    with pytest.raises(ValueError):
        oracle.MutationSpec("reverse", 0)
    specs = list(oracle.seeded_mutations(8, 100))
    assert [s.kind for s in specs[:4]] == list(oracle.MUTATION_KINDS)
    assert [s.seed for s in specs] == list(range(100, 108))


@pytest.mark.parametrize("q,betas", [(29, (2, 26)), (41, (3, 12)), (49, None)])
def test_mutations_detected_by_both(q, betas):
    sys = cosets_for(q)
    bp = search_beta_pairs(sys)[0] if betas is None else next(b for b in search_beta_pairs(sys) if b.betas == betas)
    pairs = two_quotient_starter(sys, bp).pairs
    for spec in oracle.seeded_mutations(100, base_seed=q):
        bad = oracle.mutate(sys.F, pairs, spec)
        assert not verify_starter(sys.F, bad).is_strong, spec
        assert not oracle.oracle_verify(sys.F, bad).is_strong, spec


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([7, 11, 19, 23, 27, 31]), st.integers(0, 2**32), st.sampled_from(oracle.MUTATION_KINDS))
def test_verdicts_agree_on_mutated_dinitz(q, seed, kind):
    F = field_of_order(q)
    pairs = dinitz_starter(F, dinitz_betas(F)[0]).pairs
    bad = oracle.mutate(F, pairs, oracle.MutationSpec(kind, seed))
    assert verify_starter(F, bad).verdict == oracle.oracle_verify(F, bad).verdict


@pytest.mark.parametrize("q", [13, 25, 29, 41, 49, 81])
def test_beta_sweep_matches_search(q):
    sys = cosets_for(q)
    assert [b.betas for b in oracle.oracle_beta_sweep(sys)] == [b.betas for b in search_beta_pairs(sys)]


def test_census_counts():
    rows = {n: oracle.exhaustive_small_group_census(n) for n in (3, 5, 7, 9, 11)}
    assert [rows[n].starters for n in rows] == [1, 1, 3, 9, 25]
    assert [rows[n].strong for n in rows] == [1, 0, 2, 0, 4]
    assert [rows[n].matchings for n in rows] == [1, 3, 15, 105, 945]
    for row in rows.values():
        assert row.one_quotient + row.two_quotient <= row.starters


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_census_starters_pass_raw_definition(n):
    for pairs in oracle.census_starters(n):
        members = sorted(v for p in pairs for v in p)
        diffs = sorted(d for x, y in pairs for d in ((x - y) % n, (y - x) % n))
        assert members == diffs == list(range(1, n))


def test_census_bounds():
    for n in (4, 1, 13):
        with pytest.raises(ValueError):
            oracle.exhaustive_small_group_census(n)

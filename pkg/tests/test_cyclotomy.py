import pytest
from hypothesis import given
from hypothesis import strategies as st

import published as pv
from starter_forge.cyclotomy import (
    BlockLabel,
    coset_of,
    cosets_for,
    cyclotomic_count,
    cyclotomic_number,
    decompose,
    find_beta_star,
    mixed_beta_witnesses,
    nqr_runs,
    power_coset,
    run_members,
)
from starter_forge.errors import DecompositionError, FieldError
from starter_forge.ffield import field_of_order, residue_sets

VALID = [13, 25, 29, 37, 41, 49, 53, 61, 73, 81, 89, 97, 113, 121, 169]


@pytest.mark.parametrize(
    "q,k,t", [(13, 2, 3), (29, 2, 7), (41, 3, 5), (97, 5, 3), (25, 3, 3), (49, 4, 3), (81, 4, 5)]
)
def test_decompose(q, k, t):
    d = decompose(q)
    assert (d.k, d.t) == (k, t)
    assert q - 1 == 2**k * t
    assert d.delta == 2 ** (k - 1) and d.delta1 == 2 ** (k - 2)


@pytest.mark.parametrize("q", [7, 11, 9, 17, 257, 15, 1, 4])
def test_decompose_rejects(q):
    with pytest.raises(DecompositionError):
        decompose(q)


def test_decompose_points_to_dinitz_for_3_mod_4():
    with pytest.raises(DecompositionError, match="Dinitz"):
        decompose(19)


def test_published_sets_29():
    sys = cosets_for(29)
    qr, nqr = residue_sets(sys.F)
    assert qr == pv.QR_29 and nqr == pv.NQR_29
    assert set(sys.C0) == pv.C0_29
    assert set(sys.Chat0) == pv.CHAT0_29
    coset = {sys.F.mul(2, y) for y in sys.Chat0}
    assert coset == {8, 10, 12, 15, 18, 26, 27}
    # the published listing of 2 * Chat_0 is not a coset of C_0; only its
    # members 10, 15 and 26 belong to 2 * Chat_0
    assert coset & pv.B1_CHAT0_29 == {10, 15, 26}
    assert coset_of(sys, sys.F.div(11, 2)) == BlockLabel("C", 0)
    d = sys.decomp
    assert (d.k, d.t, d.delta, d.delta1, sys.alpha) == tuple(pv.DECOMP_29.values())


def test_published_sets_41_in_listed_order():
    sys = cosets_for(41)
    qr, nqr = residue_sets(sys.F)
    assert qr == pv.QR_41 and nqr == pv.NQR_41
    assert sys.C == (pv.C0_41, pv.C1_41)
    assert sys.Chat == (pv.CHAT0_41, pv.CHAT1_41)
    assert tuple(sys.F.mul(3, y) for y in sys.Chat0) == pv.B1_CHAT0_41
    d = sys.decomp
    assert (d.k, d.t, d.delta, d.delta1, sys.alpha) == tuple(pv.DECOMP_41.values())


@pytest.mark.parametrize("q", VALID)
def test_coset_invariants(q):
    sys = cosets_for(q)
    F = sys.F
    qr, _ = residue_sets(F)
    blocks = list(sys.C) + list(sys.Chat)
    union = [x for b in blocks for x in b]
    assert len(union) == len(set(union)) and set(union) == qr
    assert all(len(b) == sys.decomp.t for b in blocks)
    # C_0 is a subgroup, every block sums to zero
    assert all(F.mul(a, b) in sys.C0 for a in sys.C0 for b in sys.C0)
    for b in blocks:
        total = 0
        for x in b:
            total = F.add(total, x)
        assert total == 0
    # Chat_j = -C_j = alpha^(j + Delta1) C_0
    for j in range(sys.decomp.delta1):
        assert frozenset(sys.Chat[j]) == power_coset(sys, j + sys.decomp.delta1)
        assert frozenset(sys.C[j]) == power_coset(sys, j)


def test_coset_of():
    sys = cosets_for(41)
    assert coset_of(sys, 1) == BlockLabel("C", 0)
    assert coset_of(sys, 2) == BlockLabel("C", 1)
    assert coset_of(sys, 40) == BlockLabel("Chat", 0)
    assert coset_of(sys, 3).kind == "NQR"
    with pytest.raises(FieldError):
        coset_of(sys, 0)


def test_with_betas_partitions_nqr():
    sys = cosets_for(41).with_betas(3, 12)
    _, nqr = residue_sets(sys.F)
    members = [x for b in sys.D + sys.Dhat for x in b]
    assert sorted(members) == sorted(nqr)


def test_cyclotomic_closed_form_small():
    assert cyclotomic_number(14, 0, 0) == 6
    assert cyclotomic_number(14, 1, 1) == 7
    with pytest.raises(ValueError):
        cyclotomic_number(15, 0, 0)


@pytest.mark.parametrize("q", [13, 29, 41, 25, 81])
def test_cyclotomic_counts(q):
    F = field_of_order(q)
    f = (q - 1) // 2
    for i in (0, 1):
        for j in (0, 1):
            assert cyclotomic_count(F, i, j) == cyclotomic_number(f, i, j)


def test_nqr_runs_29():
    F = field_of_order(29)
    runs = nqr_runs(F)
    members = sorted(x for r in runs for x in run_members(F, r))
    assert members == sorted(pv.NQR_29)
    assert [(r.start, r.length) for r in runs][:3] == [(2, 2), (8, 1), (10, 3)]


@pytest.mark.parametrize("q", [9, 25, 27, 49, 81, 125])
def test_nqr_runs_cover_nqr_in_extension_fields(q):
    F = field_of_order(q)
    _, nqr = residue_sets(F)
    members = [x for r in nqr_runs(F) for x in run_members(F, r)]
    assert sorted(members) == sorted(nqr)


@pytest.mark.parametrize("q", VALID)
def test_find_beta_star_is_least(q):
    F = field_of_order(q)
    qr, nqr = residue_sets(F)
    expected = min(
        b for b in nqr if F.mul(F.add(b, 1), F.sub(b, 1)) in nqr and (F.add(b, 1) in nqr or F.sub(b, 1) in nqr)
    )
    assert find_beta_star(F) == expected


def test_find_beta_star_examples():
    assert find_beta_star(field_of_order(29)) == 2
    assert find_beta_star(field_of_order(41)) == 6


@pytest.mark.parametrize("q", VALID)
@pytest.mark.parametrize("sign", [1, -1])
def test_mixed_beta_witnesses(q, sign):
    F = field_of_order(q)
    qr, nqr = residue_sets(F)
    b1, b2 = mixed_beta_witnesses(F, sign)
    shift = 1 if sign == 1 else F.neg(1)
    assert b1 in nqr and F.add(b1, shift) in nqr
    assert b2 in nqr and F.add(b2, shift) in qr
    assert b1 == min(b for b in nqr if F.add(b, shift) in nqr)
    assert b2 == min(b for b in nqr if F.add(b, shift) in qr)


def test_mixed_beta_witness_examples():
    assert mixed_beta_witnesses(field_of_order(29)) == (2, 3)
    assert mixed_beta_witnesses(field_of_order(29), -1) == (3, 2)
    assert mixed_beta_witnesses(field_of_order(41)) == (6, 3)


@given(st.sampled_from(VALID), st.integers(0, 200))
def test_power_coset_periodic(q, i):
    sys = cosets_for(q)
    period = 2 * sys.decomp.delta1
    assert power_coset(sys, i) == power_coset(sys, i % period)

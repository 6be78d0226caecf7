"""Starter constructions (one-quotient Dinitz and two-quotient S(b1, b2)), the
axiom verifier, quotient classification and beta-pair search."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .cyclotomy import BlockLabel, CosetSystem, coset_of
from .errors import ConstructionError, MembershipError, TheoremViolation
from .ffield import FieldSpec, is_quadratic_residue

Pair = tuple[int, int]
MORE = "more"

# cap on the number of witnesses quoted in a failure diagnostic
_MAX_WITNESSES = 8


def canonical_pairs(pairs: Iterable[Sequence[int]]) -> tuple[Pair, ...]:
    """Each pair with the smaller encoding first, pairs sorted lexicographically."""
    return tuple(sorted((min(a, b), max(a, b)) for a, b in ((int(x), int(y)) for x, y in pairs)))


@dataclass(frozen=True)
class Provenance:
    kind: str  # "dinitz", "two-quotient" or "external"
    betas: tuple[int, ...] = ()


@dataclass(frozen=True)
class Starter:
    F: FieldSpec
    pairs: tuple[Pair, ...]
    provenance: Provenance = Provenance("external")

    def __post_init__(self):
        object.__setattr__(self, "pairs", canonical_pairs(self.pairs))


@dataclass(frozen=True)
class Failure:
    axiom: str  # "cover", "differences", "sums" or "nonzero-sums"
    message: str
    witnesses: tuple[int, ...] = ()


@dataclass(frozen=True)
class QuotientProfile:
    ratios: tuple[tuple[Pair, int], ...]  # multiset of ratio classes (r, 1/r), smaller first, with counts
    classes: tuple[Pair, ...]  # distinct classes, sorted
    min_quotient_le2: Union[int, str]  # 1, 2 or "more"
    quotient_set: tuple[int, ...]  # a witnessing Q when |Q| <= 2, else empty


@dataclass(frozen=True)
class VerificationReport:
    is_starter: bool
    is_strong: bool
    sum_count: int
    quotient_profile: QuotientProfile | None
    failures: tuple[Failure, ...] = ()

    @property
    def verdict(self) -> tuple[bool, bool, int]:
        return self.is_starter, self.is_strong, self.sum_count


def _pair_arrays(pairs) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def _row_counts(values: np.ndarray, q: int) -> np.ndarray:
    """Per-row occurrence counts of each encoding; values has shape (rows, n)."""
    rows = values.shape[0]
    flat = (values + q * np.arange(rows, dtype=np.int64)[:, None]).ravel()
    return np.bincount(flat, minlength=rows * q).reshape(rows, q)


def _exactly_nonzero(counts: np.ndarray) -> np.ndarray:
    return (counts[:, 0] == 0) & np.all(counts[:, 1:] == 1, axis=1)


def _coverage_failure(axiom: str, counts: np.ndarray, what: str) -> Failure | None:
    """Every nonzero element must be hit exactly once (and zero never)."""
    expected = np.ones_like(counts)
    expected[0] = 0
    bad = np.flatnonzero(counts != expected)
    if bad.size == 0:
        return None
    missing = [int(x) for x in bad if counts[x] == 0]
    repeated = [int(x) for x in bad if counts[x] > 0]
    parts = []
    if repeated:
        parts.append(f"repeated {what} {repeated[:_MAX_WITNESSES]}")
    if missing:
        parts.append(f"missing {what} {missing[:_MAX_WITNESSES]}")
    return Failure(axiom, "; ".join(parts), tuple((repeated + missing)[:_MAX_WITNESSES]))


def verify_batch(F: FieldSpec, xs, ys, nonzero_sums: bool = False) -> list[VerificationReport]:
    """Verify many pair lists at once; row r of xs, ys holds the pairs of one candidate.

    All rows must have the same number of pairs.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
    ys = np.atleast_2d(np.asarray(ys, dtype=np.int64))
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same shape")
    if xs.size and (min(xs.min(), ys.min()) < 0 or max(xs.max(), ys.max()) >= F.q):
        raise ValueError(f"pair members must be encodings in [0, {F.q})")
    n = xs.shape[1]
    if n == 0:
        return [VerificationReport(False, False, 0, None, (Failure("cover", "empty pair set"),))] * xs.shape[0]

    member_counts = _row_counts(np.concatenate([xs, ys], axis=1), F.q)
    d = F.sub_array(xs, ys)
    diff_counts = _row_counts(np.concatenate([d, F.neg_array(d)], axis=1), F.q)
    sum_counts = _row_counts(F.add_array(xs, ys), F.q)

    cover_ok = _exactly_nonzero(member_counts)
    diff_ok = _exactly_nonzero(diff_counts)
    sum_count = np.count_nonzero(sum_counts, axis=1)
    distinct = (sum_count == n) & (n == (F.q - 1) // 2)
    if nonzero_sums:
        distinct &= sum_counts[:, 0] == 0
    has_zero = np.any(xs == 0, axis=1) | np.any(ys == 0, axis=1)

    reports = []
    for r in range(xs.shape[0]):
        failures = []
        if not cover_ok[r]:
            failures.append(_coverage_failure("cover", member_counts[r], "elements"))
        if not diff_ok[r]:
            failures.append(_coverage_failure("differences", diff_counts[r], "differences"))
        is_starter = bool(cover_ok[r] and diff_ok[r])
        if not distinct[r]:
            dup = np.flatnonzero(sum_counts[r] > 1)[:_MAX_WITNESSES].tolist()
            if dup:
                failures.append(Failure("sums", f"pair sums repeat: {dup}", tuple(dup)))
            if nonzero_sums and sum_counts[r, 0]:
                failures.append(Failure("nonzero-sums", "a pair sums to 0", (0,)))
        profile = None if has_zero[r] else _profile(F, xs[r], ys[r])
        reports.append(
            VerificationReport(is_starter, is_starter and bool(distinct[r]), int(sum_count[r]), profile, tuple(failures))
        )
    return reports


def verify_starter(F: FieldSpec, pairs, nonzero_sums: bool = False) -> VerificationReport:
    """Check the starter axioms and the strong property for an arbitrary pair set.

    Failures are reported in the result, not raised. With ``nonzero_sums`` a
    strong starter must also avoid the sum 0.
    """
    xs, ys = _pair_arrays(pairs)
    return verify_batch(F, xs[None, :], ys[None, :], nonzero_sums)[0]


def _profile(F: FieldSpec, xs: np.ndarray, ys: np.ndarray) -> QuotientProfile:
    inv = F.inverse_table
    r = F.mul_array(ys, inv[xs])
    r_inv = inv[r]
    codes, counts = np.unique(np.minimum(r, r_inv) * F.q + np.maximum(r, r_inv), return_counts=True)
    classes = tuple((int(c) // F.q, int(c) % F.q) for c in codes)
    ratios = tuple(zip(classes, counts.tolist()))
    # inversion classes are disjoint, so Q must pick one member from each class
    if len(classes) <= 2:
        return QuotientProfile(ratios, classes, len(classes), tuple(c[0] for c in classes))
    return QuotientProfile(ratios, classes, MORE, ())


def quotient_classify(F: FieldSpec, pairs) -> QuotientProfile:
    xs, ys = _pair_arrays(pairs)
    if np.any(xs == 0) or np.any(ys == 0):
        raise ValueError("quotients need nonzero pair members")
    return _profile(F, xs, ys)


def _nqr_check(F: FieldSpec, beta: int, name: str = "beta") -> None:
    if beta == 0 or is_quadratic_residue(F, beta):
        raise MembershipError(f"{name} = {beta} is not a non-residue in F_{F.q}")


def dinitz_arrays(F: FieldSpec, betas) -> tuple[np.ndarray, np.ndarray]:
    """Pairs {alpha^i, beta alpha^i}, i = 1..(q-1)/2, for many betas at once: (xs, ys), one row per beta."""
    if F.q % 4 != 3:
        raise ConstructionError(f"q = {F.q} is not 3 mod 4")
    if F.q == 3:
        raise ConstructionError("q = 3 admits no non-residue beta with beta + 1 != 0")
    minus_one = F.neg(1)
    for beta in betas:
        F._check(beta)
        _nqr_check(F, beta)
        if beta == minus_one:
            raise ConstructionError("beta = -1 makes beta + 1 = 0")
    xs = np.asarray(F.qr_powers, dtype=np.int64)
    b = np.asarray(betas, dtype=np.int64)[:, None]
    return np.broadcast_to(xs, (len(b), len(xs))), F.mul_array(b, xs[None, :])


def dinitz_starter(F: FieldSpec, beta: int) -> Starter:
    """One-quotient starter {{alpha^i, beta alpha^i} : i = 1..(q-1)/2} for q = 3 mod 4."""
    xs, ys = dinitz_arrays(F, [beta])
    return Starter(F, zip(xs[0].tolist(), ys[0].tolist()), Provenance("dinitz", (beta,)))


def dinitz_betas(F: FieldSpec) -> list[int]:
    """All admissible betas for the Dinitz construction, ascending."""
    minus_one = F.neg(1)
    return [int(b) for b in np.flatnonzero(F.residue_table == -1) if b != minus_one]


# -- beta pairs ---------------------------------------------------------------


@dataclass(frozen=True)
class BetaPair:
    beta1: int
    beta2: int
    cond_minus_plus: bool  # (b1 - 1)(b2 + 1) in NQR
    cond_plus_minus: bool  # (b1 + 1)(b2 - 1) in NQR

    @property
    def valid(self) -> bool:
        return self.cond_minus_plus and self.cond_plus_minus

    @property
    def betas(self) -> tuple[int, int]:
        return self.beta1, self.beta2


def _is_nqr(F: FieldSpec, x: int) -> bool:
    return x != 0 and not is_quadratic_residue(F, x)


def _membership(sys: CosetSystem, beta1: int, beta2: int) -> None:
    F = sys.F
    F._check(beta1, beta2)
    _nqr_check(F, beta1, "beta1")
    if beta2 == 0 or coset_of(sys, F.div(beta2, beta1)) != BlockLabel("Chat", 0):
        raise MembershipError(f"beta2 = {beta2} is not in beta1 * Chat_0 for beta1 = {beta1}")


def beta_pair_conditions(sys: CosetSystem, beta1: int, beta2: int) -> BetaPair:
    _membership(sys, beta1, beta2)
    F = sys.F
    minus_plus = F.mul(F.sub(beta1, 1), F.add(beta2, 1))
    plus_minus = F.mul(F.add(beta1, 1), F.sub(beta2, 1))
    return BetaPair(beta1, beta2, _is_nqr(F, minus_plus), _is_nqr(F, plus_minus))


def _search_rows(F: FieldSpec, b1: np.ndarray, chat0: np.ndarray) -> np.ndarray:
    table = F.residue_table
    b1c = b1[:, None]
    b2 = F.mul_array(b1c, chat0[None, :])
    ok = table[F.mul_array(F.sub_array(b1c, 1), F.add_array(b2, 1))] == -1
    ok &= table[F.mul_array(F.add_array(b1c, 1), F.sub_array(b2, 1))] == -1
    rows, cols = np.nonzero(ok)
    return np.stack([b1[rows], b2[rows, cols]], axis=1)


def _search_chunk(args) -> np.ndarray:
    return _search_rows(*args)


def search_beta_array(sys: CosetSystem, first_only: bool = False, jobs: int = 1) -> np.ndarray:
    """Every valid ordered pair (b1, b2) as rows of an (n, 2) array, sorted.

    ``first_only`` stops at the least pair. Results do not depend on ``jobs``.
    """
    F = sys.F
    nqr = np.flatnonzero(F.residue_table == -1)
    chat0 = np.asarray(sys.Chat0, dtype=np.int64)
    rows_per_chunk = max(1, 200_000 // len(chat0))
    chunks = [(F, nqr[i : i + rows_per_chunk], chat0) for i in range(0, len(nqr), rows_per_chunk)]
    parts: list[np.ndarray] = []
    if jobs > 1 and not first_only and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search_chunk, chunks))
    else:
        for chunk in chunks:
            parts.append(_search_chunk(chunk))
            if first_only and len(parts[-1]):
                break
    found = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    if len(found) == 0:
        raise TheoremViolation(f"no valid beta pair for q = {F.q}")
    found = found[np.lexsort((found[:, 1], found[:, 0]))]
    return found[:1] if first_only else found


def search_beta_pairs(sys: CosetSystem, first_only: bool = False, jobs: int = 1) -> list[BetaPair]:
    """search_beta_array as a list of BetaPair."""
    found = search_beta_array(sys, first_only, jobs)
    return [BetaPair(b1, b2, True, True) for b1, b2 in found.tolist()]


def symmetric_variants(sys: CosetSystem, bp: BetaPair) -> list[BetaPair]:
    """(b1, b2), (b2, b1), (-b1, -b2), (-b2, -b1), each re-evaluated."""
    F = sys.F
    b1, b2 = bp.beta1, bp.beta2
    n1, n2 = F.neg(b1), F.neg(b2)
    return [beta_pair_conditions(sys, a, b) for a, b in ((b1, b2), (b2, b1), (n1, n2), (n2, n1))]


def coset_pair_table(sys: CosetSystem, betas, sign: int = -1) -> np.ndarray:
    """Least (b1, b2), b1 < b2 in beta * Chat_0 with (b1 + sign)(b2 + sign) in NQR, one row per beta.

    A row is (0, 0) when no such pair exists. The product is a non-residue
    exactly when the two factors differ in residuosity (neither factor is 0,
    since +-1 are residues and the coset holds only non-residues), so b1 is the
    least coset member and b2 the least later member of the other class.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    F = sys.F
    betas = np.asarray(betas, dtype=np.int64)
    coset = np.sort(F.mul_array(betas[:, None], np.asarray(sys.Chat0, dtype=np.int64)[None, :]), axis=1)
    cls = F.residue_table[F.add_array(coset, 1 if sign == 1 else F.neg(1))]
    other = cls != cls[:, :1]
    found = other.any(axis=1)
    j = np.argmax(other, axis=1)
    rows = np.arange(len(betas))
    out = np.zeros((len(betas), 2), dtype=np.int64)
    out[found, 0] = coset[found, 0]
    out[found, 1] = coset[rows[found], j[found]]
    return out


def coset_pair_witnesses(sys: CosetSystem, beta: int, sign: int = -1) -> tuple[int, int]:
    """Least b1 < b2 in beta * Chat_0 with (b1 + sign)(b2 + sign) in NQR.

    Raises TheoremViolation if the coset holds no such pair.
    """
    F = sys.F
    F._check(beta)
    _nqr_check(F, beta)
    b1, b2 = coset_pair_table(sys, [beta], sign)[0].tolist()
    if b1 == 0:
        raise TheoremViolation(f"no b1, b2 in {beta}*Chat_0 with (b1{sign:+d})(b2{sign:+d}) in NQR({F.q})")
    return b1, b2


# -- two-quotient construction --------------------------------------------------


def _require_valid(sys: CosetSystem, bp: BetaPair) -> BetaPair:
    checked = beta_pair_conditions(sys, bp.beta1, bp.beta2)
    if not checked.valid:
        raise ConstructionError(
            f"({bp.beta1}, {bp.beta2}) fails: (b1-1)(b2+1) in NQR is {checked.cond_minus_plus}, "
            f"(b1+1)(b2-1) in NQR is {checked.cond_plus_minus}"
        )
    F = sys.F
    if F.sub(bp.beta1, 1) == 0 or F.add(bp.beta2, 1) == 0:
        raise ConstructionError("degenerate beta pair")
    return checked


def two_quotient_starter(sys: CosetSystem, bp: BetaPair) -> Starter:
    """S(b1, b2): pairs {x, b1 x} for x in C_j and {y, -b2 y} for y in Chat_j."""
    bp = _require_valid(sys, bp)
    F = sys.F
    minus_b2 = F.neg(bp.beta2)
    pairs = []
    for cj, chatj in zip(sys.C, sys.Chat):
        pairs += [(x, F.mul(bp.beta1, x)) for x in cj]
        pairs += [(y, F.mul(minus_b2, y)) for y in chatj]
    return Starter(F, pairs, Provenance("two-quotient", bp.betas))


def construct(sys: CosetSystem, beta1: int, beta2: int) -> Starter:
    return two_quotient_starter(sys, beta_pair_conditions(sys, beta1, beta2))


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    difference_block_sizes: dict[str, int]
    sum_count: int
    residuosity_split: bool
    failures: tuple[str, ...] = field(default=())


def proof_partition_check(sys: CosetSystem, bp: BetaPair) -> PartitionReport:
    """Materialise the difference blocks E_j, E*_j and sum blocks P_j, P*_j of S(b1, b2)
    and check that the E blocks partition F_q* and the P blocks have (q-1)/2 distinct members."""
    bp = _require_valid(sys, bp)
    F = sys.F
    table = F.residue_table
    m1, p2 = F.sub(bp.beta1, 1), F.add(bp.beta2, 1)
    p1, m2 = F.add(bp.beta1, 1), F.sub(bp.beta2, 1)
    failures = []

    blocks: dict[str, set[int]] = {}
    for j, (cj, chatj) in enumerate(zip(sys.C, sys.Chat)):
        blocks[f"E{j}"] = {v for x in cj for v in (F.mul(x, m1), F.neg(F.mul(x, m1)))}
        blocks[f"E{j}*"] = {v for y in chatj for v in (F.mul(y, p2), F.neg(F.mul(y, p2)))}
    sizes = {name: len(b) for name, b in blocks.items()}
    t = sys.decomp.t
    for name, size in sizes.items():
        if size != 2 * t:
            failures.append(f"{name} has {size} elements, expected {2 * t}")
    owner: dict[int, str] = {}
    for name, block in blocks.items():
        for v in sorted(block):
            if v in owner:
                failures.append(f"{name} and {owner[v]} share {v}")
            owner.setdefault(v, name)
    missing = sorted(set(range(1, F.q)) - owner.keys())
    if 0 in owner or missing:
        failures.append(f"difference blocks miss {missing[:_MAX_WITNESSES]}")

    # every E_j is uniform in residuosity, every E*_i the opposite
    e_classes = {int(table[v]) for j in range(len(sys.C)) for v in blocks[f"E{j}"]}
    estar_classes = {int(table[v]) for j in range(len(sys.C)) for v in blocks[f"E{j}*"]}
    split = len(e_classes) == 1 and len(estar_classes) == 1 and e_classes != estar_classes
    if not split:
        failures.append(f"residuosity of E blocks {e_classes} vs E* blocks {estar_classes}")

    sums = []
    for cj, chatj in zip(sys.C, sys.Chat):
        sums += [F.mul(x, p1) for x in cj]
        sums += [F.neg(F.mul(y, m2)) for y in chatj]
    sum_count = len(set(sums))
    if sum_count != (F.q - 1) // 2:
        dup = [v for v, c in Counter(sums).items() if c > 1]
        failures.append(f"sum blocks P, P* collide at {sorted(dup)[:_MAX_WITNESSES]}")
    return PartitionReport(not failures, sizes, sum_count, split, tuple(failures))


def dinitz_form(sys: CosetSystem, a0: int, a1: int, e0: int | None = None, e1: int | None = None) -> Starter:
    """{{x, a0 x} : x in C_0 / (e0 - 1)} with {{y, a1 y} : y in Chat_0 / (e1 - 1)}.

    e0, e1 default to a0, a1 (the usual Dinitz scaling).
    """
    F = sys.F
    s0 = F.inv(F.sub(a0 if e0 is None else e0, 1))
    s1 = F.inv(F.sub(a1 if e1 is None else e1, 1))
    pairs = []
    for x in sys.C0:
        x = F.mul(s0, x)
        pairs.append((x, F.mul(a0, x)))
    for y in sys.Chat0:
        y = F.mul(s1, y)
        pairs.append((y, F.mul(a1, y)))
    return Starter(F, pairs, Provenance("external", (a0, a1)))


def dinitz_equivalence_check(sys: CosetSystem, bp: BetaPair) -> bool | None:
    """Whether the Dinitz-form starter with ratios (b1, -b2) equals S(b1, b2).

    The x-block is C_0 / (b1 - 1) and the y-block Chat_0 / (b2 - 1). Applies
    only when b1 - 1 lies in C_0 and -(b2 - 1) in Chat_0; otherwise None.
    """
    if sys.decomp.k != 2:
        raise ConstructionError(f"the Dinitz form needs q = 4t + 1; q = {sys.q} has k = {sys.decomp.k}")
    bp = _require_valid(sys, bp)
    if not equivalence_applies(sys, bp):
        return None
    hat = dinitz_form(sys, bp.beta1, sys.F.neg(bp.beta2), bp.beta1, bp.beta2)
    return hat.pairs == two_quotient_starter(sys, bp).pairs


def equivalence_applies(sys: CosetSystem, bp: BetaPair) -> bool:
    F = sys.F
    c0, chat0 = BlockLabel("C", 0), BlockLabel("Chat", 0)
    return (
        coset_of(sys, F.sub(bp.beta1, 1)) == c0
        and coset_of(sys, F.neg(F.sub(bp.beta2, 1))) == chat0
    )

"""Brute-force cross-checks that share no logic with the constructions.

Nothing here touches primitive elements, coset indices or Euler's criterion:
residues come from squaring every element, starter axioms from raw sorted
lists, and beta pairs from a full NQR x NQR scan.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cyclotomy import CosetSystem
from .ffield import FieldSpec
from .starter import BetaPair, Failure, VerificationReport

MUTATION_KINDS = ("swap-element", "duplicate-element", "shift-pair", "drop-pair")


def oracle_residues(F: FieldSpec) -> frozenset[int]:
    """QR(q) as the image of y -> y*y over F_q*."""
    ys = np.arange(1, F.q, dtype=np.int64)
    return frozenset(np.unique(F.mul_array(ys, ys)).tolist())


def _qr_mask(F: FieldSpec) -> np.ndarray:
    mask = np.zeros(F.q, dtype=bool)
    mask[list(oracle_residues(F))] = True
    return mask


def oracle_verify_batch(F: FieldSpec, xs, ys) -> list[VerificationReport]:
    """Starter axioms by sorting raw member, difference and sum lists; add, sub and neg only.

    Row r of xs, ys holds the pairs of one candidate.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
    ys = np.atleast_2d(np.asarray(ys, dtype=np.int64))
    rows, n = xs.shape
    nonzero = np.arange(1, F.q)
    if 2 * n != F.q - 1:
        cover = np.zeros(rows, dtype=bool)
        spread = np.zeros(rows, dtype=bool)
    else:
        cover = np.all(np.sort(np.concatenate([xs, ys], axis=1), axis=1) == nonzero, axis=1)
        d = F.sub_array(xs, ys)
        spread = np.all(np.sort(np.concatenate([d, F.neg_array(d)], axis=1), axis=1) == nonzero, axis=1)
    sums = np.sort(F.add_array(xs, ys), axis=1)
    sum_count = 1 + np.count_nonzero(np.diff(sums, axis=1), axis=1) if n else np.zeros(rows, dtype=np.int64)

    reports = []
    for r in range(rows):
        failures = []
        if not cover[r]:
            failures.append(Failure("cover", "members are not F_q* exactly once"))
        if not spread[r]:
            failures.append(Failure("differences", "+-differences are not F_q* exactly once"))
        is_starter = not failures
        strong = is_starter and sum_count[r] == n
        if is_starter and not strong:
            failures.append(Failure("sums", "pair sums repeat"))
        reports.append(VerificationReport(is_starter, bool(strong), int(sum_count[r]), None, tuple(failures)))
    return reports


def oracle_verify(F: FieldSpec, pairs) -> VerificationReport:
    arr = np.asarray([(int(x), int(y)) for x, y in pairs], dtype=np.int64).reshape(-1, 2)
    return oracle_verify_batch(F, arr[None, :, 0], arr[None, :, 1])[0]


def oracle_beta_array(sys: CosetSystem) -> np.ndarray:
    """All (b1, b2) in NQR x NQR with b2 in b1 * Chat_0 and both product conditions, as sorted rows.

    Chat_0 is rebuilt from scratch as the negatives of {x : x^t = 1}.
    """
    F = sys.F
    q = F.q
    t = q - 1
    while t % 2 == 0:
        t //= 2
    qr = _qr_mask(F)
    nqr = np.flatnonzero(~qr[1:]) + 1

    xs = np.arange(1, q, dtype=np.int64)
    power = np.ones_like(xs)
    e, base = t, xs.copy()
    while e:
        if e & 1:
            power = F.mul_array(power, base)
        base = F.mul_array(base, base)
        e >>= 1
    chat0 = F.neg_array(xs[power == 1])

    def is_nqr(v):
        return (v != 0) & ~qr[v]

    found = []
    step = max(1, 200_000 // len(chat0))
    for i in range(0, len(nqr), step):
        b1 = nqr[i : i + step, None]
        b2 = F.mul_array(b1, chat0[None, :])
        good = is_nqr(b2)
        good &= is_nqr(F.mul_array(F.sub_array(b1, 1), F.add_array(b2, 1)))
        good &= is_nqr(F.mul_array(F.add_array(b1, 1), F.sub_array(b2, 1)))
        r, c = np.nonzero(good)
        found.append(np.stack([b1[r, 0], b2[r, c]], axis=1))
    out = np.concatenate(found) if found else np.zeros((0, 2), dtype=np.int64)
    return out[np.lexsort((out[:, 1], out[:, 0]))]


def oracle_beta_sweep(sys: CosetSystem) -> list[BetaPair]:
    return [BetaPair(b1, b2, True, True) for b1, b2 in oracle_beta_array(sys).tolist()]


# -- mutations ------------------------------------------------------------------


class Lcg64:
    """64-bit linear congruential stream (Knuth's MMIX constants), high bits out."""

    A = 6364136223846793005
    C = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & 0xFFFFFFFFFFFFFFFF

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & 0xFFFFFFFFFFFFFFFF
        return self.state >> 33

    def below(self, n: int) -> int:
        return self.next() % n


@dataclass(frozen=True)
class MutationSpec:
    kind: str
    seed: int

    def __post_init__(self):
        if self.kind not in MUTATION_KINDS:
            raise ValueError(f"unknown mutation {self.kind!r}")


def mutate(F: FieldSpec, pairs, spec: MutationSpec) -> list[tuple[int, int]]:
    """Corrupt a starter so that at least one axiom must fail."""
    pairs = [tuple(p) for p in pairs]
    if len(pairs) < 2:
        raise ValueError("mutations need at least two pairs")
    rng = Lcg64(spec.seed)
    i = rng.below(len(pairs))
    j = (i + 1 + rng.below(len(pairs) - 1)) % len(pairs)
    out = list(pairs)
    if spec.kind == "swap-element":
        # one member of pair i replaced by a member of pair j
        keep = out[i][rng.below(2)]
        out[i] = (keep, out[j][rng.below(2)])
    elif spec.kind == "duplicate-element":
        out[j] = out[i]
    elif spec.kind == "shift-pair":
        c = 1 + rng.below(F.q - 1)
        out[i] = (F.add(out[i][0], c), F.add(out[i][1], c))
    else:
        del out[i]
    return out


def seeded_mutations(n: int, base_seed: int = 0):
    """n MutationSpecs cycling through the kinds with consecutive seeds."""
    for s in range(n):
        yield MutationSpec(MUTATION_KINDS[s % len(MUTATION_KINDS)], base_seed + s)


# -- exhaustive census over Z_n -------------------------------------------------


CENSUS_MAX_N = 11


def _matchings(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for tail in _matchings(rest[:k] + rest[k + 1 :]):
            yield [(first, partner), *tail]


def _raw_is_starter(n: int, pairs) -> bool:
    nonzero = list(range(1, n))
    if sorted(v for p in pairs for v in p) != nonzero:
        return False
    return sorted(d for x, y in pairs for d in ((x - y) % n, (y - x) % n)) == nonzero


def _min_quotient(n: int, pairs) -> int | None:
    """Least |Q| <= 2 with each pair {x, y} having y = r x or x = r y for some r in Q."""
    def hit(r, x, y):
        return (r * x - y) % n == 0 or (r * y - x) % n == 0

    units = range(1, n)
    for size in (1, 2):
        for Q in itertools.combinations(units, size):
            if all(any(hit(r, x, y) for r in Q) for x, y in pairs):
                return size
    return None


@dataclass(frozen=True)
class CensusRow:
    n: int
    matchings: int
    starters: int
    strong: int
    one_quotient: int
    two_quotient: int


def exhaustive_small_group_census(n: int) -> CensusRow:
    """Every perfect matching of Z_n*, classified by the raw starter definition."""
    if n % 2 == 0 or not 3 <= n <= CENSUS_MAX_N:
        raise ValueError(f"census needs odd n with 3 <= n <= {CENSUS_MAX_N}")
    counts = dict(matchings=0, starters=0, strong=0, one_quotient=0, two_quotient=0)
    for pairs in _matchings(list(range(1, n))):
        counts["matchings"] += 1
        if not _raw_is_starter(n, pairs):
            continue
        counts["starters"] += 1
        if len({(x + y) % n for x, y in pairs}) == len(pairs):
            counts["strong"] += 1
        k = _min_quotient(n, pairs)
        if k == 1:
            counts["one_quotient"] += 1
        elif k == 2:
            counts["two_quotient"] += 1
    return CensusRow(n, **counts)


def census_starters(n: int):
    """Yield every starter of Z_n found by the census enumeration."""
    for pairs in _matchings(list(range(1, n))):
        if _raw_is_starter(n, pairs):
            yield pairs

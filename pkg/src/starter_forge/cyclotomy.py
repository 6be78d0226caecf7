"""Coset structure of F_q* for q = 2^k * t + 1, cyclotomic numbers of order 2,
and runs of consecutive non-residues."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DecompositionError, FieldError, TheoremViolation
from .ffield import FieldSpec, field_of_order, prime_power


@dataclass(frozen=True)
class Decomposition:
    q: int
    k: int
    t: int
    delta: int  # 2^(k-1): index of C_0 in QR(q)
    delta1: int  # 2^(k-2): number of block indices j


def decompose(q: int) -> Decomposition:
    try:
        p, _ = prime_power(q)
    except FieldError as exc:
        raise DecompositionError(str(exc)) from None
    if p == 2:
        raise DecompositionError(f"{q} is even")
    n, k = q - 1, 0
    while n % 2 == 0:
        n //= 2
        k += 1
    if k < 2:
        raise DecompositionError(
            f"q = {q} has q - 1 = 2 * {n} (k = 1, q = 3 mod 4); use the one-quotient (Dinitz) construction"
        )
    if n == 1:
        raise DecompositionError(f"q = {q} has q - 1 = 2^{k} (t = 1), outside the two-quotient construction")
    return Decomposition(q, k, n, 2 ** (k - 1), 2 ** (k - 2))


@dataclass(frozen=True)
class BlockLabel:
    kind: str  # "C", "Chat", "D", "Dhat" or "NQR"
    j: int | None = None

    def __str__(self):
        return self.kind if self.j is None else f"{self.kind}{self.j}"


NQR_LABEL = BlockLabel("NQR")


@dataclass(frozen=True, eq=False)
class CosetSystem:
    """Partition of QR(q) into C_j, Chat_j (and of NQR(q) into D_j, Dhat_j once betas are fixed).

    Each block is a tuple listing alpha^(delta*i) * alpha^j (times -1 or a beta)
    for i = 1..t, so the last entry of C_0 is 1.
    """

    F: FieldSpec
    decomp: Decomposition
    alpha: int
    C: tuple[tuple[int, ...], ...]
    Chat: tuple[tuple[int, ...], ...]
    labels: tuple[BlockLabel, ...]  # indexed by encoding; labels[0] is None
    betas: tuple[int, int] | None = None
    D: tuple[tuple[int, ...], ...] = ()
    Dhat: tuple[tuple[int, ...], ...] = ()

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def C0(self) -> tuple[int, ...]:
        return self.C[0]

    @property
    def Chat0(self) -> tuple[int, ...]:
        return self.Chat[0]

    def blocks(self):
        """Yield (label, elements) for every populated block."""
        for kind, family in (("C", self.C), ("Chat", self.Chat), ("D", self.D), ("Dhat", self.Dhat)):
            for j, block in enumerate(family):
                yield BlockLabel(kind, j), block

    def with_betas(self, beta1: int, beta2: int) -> CosetSystem:
        """Attach D_j = beta1 * C_j and Dhat_j = beta2 * C_j; NQR must come out partitioned."""
        F = self.F
        D = tuple(tuple(F.mul(beta1, x) for x in c) for c in self.C)
        Dhat = tuple(tuple(F.mul(beta2, x) for x in c) for c in self.C)
        labels = list(self.labels)
        for kind, family in (("D", D), ("Dhat", Dhat)):
            for j, block in enumerate(family):
                for x in block:
                    if labels[x] != NQR_LABEL:
                        raise FieldError(f"{x} lands in {labels[x]} while building {kind}{j}; betas do not split NQR")
                    labels[x] = BlockLabel(kind, j)
        return dataclasses.replace(self, betas=(beta1, beta2), D=D, Dhat=Dhat, labels=tuple(labels))


def build_cosets(F: FieldSpec) -> CosetSystem:
    dec = decompose(F.q)
    g = F.primitive_element
    alpha = F.mul(g, g)
    step = F.pow(alpha, dec.delta)
    c0 = []
    x = 1
    for _ in range(dec.t):
        x = F.mul(x, step)
        c0.append(x)
    if x != 1 or len(set(c0)) != dec.t:
        raise AssertionError(f"alpha^delta does not have order t = {dec.t}")
    C, Chat = [], []
    shift = 1
    for _ in range(dec.delta1):
        C.append(tuple(F.mul(shift, c) for c in c0))
        Chat.append(tuple(F.neg(c) for c in C[-1]))
        shift = F.mul(shift, alpha)

    labels: list = [NQR_LABEL] * F.q
    labels[0] = None
    seen = 0
    for kind, family in (("C", C), ("Chat", Chat)):
        for j, block in enumerate(family):
            for y in block:
                if labels[y] != NQR_LABEL:
                    raise AssertionError(f"coset blocks overlap at {y}")
                labels[y] = BlockLabel(kind, j)
                seen += 1
    table = F.residue_table
    qr_count = int(np.count_nonzero(table == 1))
    if seen != qr_count or any(table[y] != 1 for block in C + Chat for y in block):
        raise AssertionError("coset blocks do not partition QR(q)")
    return CosetSystem(F, dec, alpha, tuple(C), tuple(Chat), tuple(labels))


def cosets_for(q: int) -> CosetSystem:
    return build_cosets(field_of_order(q))


def coset_of(sys: CosetSystem, x: int) -> BlockLabel:
    if x == 0:
        raise FieldError("0 lies in no coset")
    return sys.labels[x]


def power_coset(sys: CosetSystem, i: int) -> frozenset[int]:
    """alpha^i * C_0 for any integer i >= 0 (cosets of C_0 inside QR(q))."""
    F = sys.F
    s = F.pow(sys.alpha, i)
    return frozenset(F.mul(s, x) for x in sys.C0)


def cyclotomic_number(f: int, i: int, j: int) -> int:
    """Order-2 cyclotomic number (i, j) for q = 2f + 1 with f even."""
    if f % 2:
        raise ValueError("closed form needs f even (q = 1 mod 4)")
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError("order-2 indices are 0 or 1")
    return (f - 2) // 2 if (i, j) == (0, 0) else f // 2


def cyclotomic_count(F: FieldSpec, i: int, j: int) -> int:
    """Brute-force |{x in class i : x + 1 in class j}|, class 0 = QR, class 1 = NQR."""
    table = F.residue_table
    want_i = 1 if i == 0 else -1
    want_j = 1 if j == 0 else -1
    xs = np.flatnonzero(table == want_i)
    return int(np.count_nonzero(table[F.add_array(xs, 1)] == want_j))


class Run(NamedTuple):
    start: int
    length: int
    cyclic: bool = False  # the whole additive line x + F_p is non-residue


def _successor_lines(F: FieldSpec):
    """Orbits of x -> x + 1, each in successor order."""
    if F.m == 1:
        yield list(range(F.q))
        return
    for base in range(0, F.q, F.p):
        yield list(range(base, base + F.p))


def nqr_runs(F: FieldSpec) -> list[Run]:
    """Maximal runs a, a+1, ..., a+l-1 of non-residues.

    For q prime the runs follow 1, 2, ..., q-1. For extension fields the +1
    orbits are the lines c + F_p; each is scanned cyclically from a residue (or
    zero), and a line containing no residue is reported as one cyclic run.
    """
    table = F.residue_table
    runs = []
    for line in _successor_lines(F):
        n = len(line)
        anchor = next((i for i in range(n) if table[line[i]] != -1), None)
        if anchor is None:
            runs.append(Run(line[0], n, True))
            continue
        length = 0
        for off in range(1, n + 1):
            x = line[(anchor + off) % n]
            if table[x] == -1:
                length += 1
                continue
            if length:
                start = line[(anchor + off - length) % n]
                runs.append(Run(start, length))
                length = 0
    return sorted(runs)


def run_members(F: FieldSpec, run: Run) -> list[int]:
    out = [run.start]
    for _ in range(run.length - 1):
        out.append(F.add(out[-1], 1))
    return out


def find_beta_star(F: FieldSpec) -> int:
    """Least beta in NQR with (beta + 1)(beta - 1) in NQR, taken from the ends of runs of length > 1."""
    decompose(F.q)
    table = F.residue_table
    candidates = []
    for run in nqr_runs(F):
        if run.cyclic or run.length < 2:
            continue
        members = run_members(F, run)
        candidates += [members[0], members[-1]]
    for beta in sorted(candidates):
        prod = F.mul(F.add(beta, 1), F.sub(beta, 1))
        if prod and table[prod] == -1:
            return beta
    raise TheoremViolation(f"no beta with (beta+1)(beta-1) in NQR({F.q})")


def mixed_beta_witnesses(F: FieldSpec, sign: int = 1) -> tuple[int, int]:
    """Least (b1, b2) in NQR with b1 + sign in NQR and b2 + sign in QR.

    The opposite-sign pair must exist as well; its absence raises TheoremViolation.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    decompose(F.q)
    table = F.residue_table
    nqr = np.flatnonzero(table == -1)

    def least(shift: int, target: int) -> int:
        shifted = table[F.add_array(nqr, shift % F.p)]
        hits = nqr[shifted == target]
        if hits.size == 0:
            raise TheoremViolation(f"no beta in NQR({F.q}) with beta {shift:+d} of residuosity {target}")
        return int(hits.min())

    least(-sign, -1)
    least(-sign, 1)
    return least(sign, -1), least(sign, 1)

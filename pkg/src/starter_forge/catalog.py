"""Canonical JSON records for starters and beta pairs.

Canonical form: keys sorted, no whitespace, pairs sorted. The content hash is
the SHA-256 of the canonical form of the record without its ``hash`` field,
so it is stable across platforms and runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .ffield import FieldSpec, is_irreducible, is_prime
from .starter import BetaPair, Provenance, Starter, VerificationReport, canonical_pairs

SCHEMA_VERSION = 1


class RecordError(ValueError):
    """A record is malformed or inconsistent."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(payload: dict) -> str:
    body = {k: v for k, v in payload.items() if k != "hash"}
    return hashlib.sha256(canonical_json(body).encode("ascii")).hexdigest()


@dataclass(frozen=True)
class CatalogRecord:
    q: int
    p: int
    m: int
    modulus: tuple[int, ...]
    alpha: int
    provenance: Provenance
    pairs: tuple[tuple[int, int], ...]
    is_starter: bool
    is_strong: bool
    quotient_set: tuple[int, ...]
    schema_version: int = SCHEMA_VERSION

    def payload(self) -> dict:
        body = {
            "schema_version": self.schema_version,
            "q": self.q,
            "p": self.p,
            "m": self.m,
            "modulus": list(self.modulus),
            "alpha": self.alpha,
            "provenance": {"kind": self.provenance.kind, "betas": list(self.provenance.betas)},
            "pairs": [list(pair) for pair in self.pairs],
            "is_starter": self.is_starter,
            "is_strong": self.is_strong,
            "quotient_set": list(self.quotient_set),
        }
        body["hash"] = content_hash(body)
        return body

    @property
    def hash(self) -> str:
        return self.payload()["hash"]

    def to_json(self, pretty: bool = False) -> str:
        if pretty:
            return json.dumps(self.payload(), sort_keys=True, indent=2)
        return canonical_json(self.payload())

    def field(self) -> FieldSpec:
        if not is_prime(self.p) or self.p == 2:
            raise RecordError(f"p = {self.p} is not an odd prime")
        spec = FieldSpec(self.p, self.m, self.q, self.modulus)
        if not is_irreducible(self.modulus, self.p):
            raise RecordError(f"modulus {list(self.modulus)} is reducible over F_{self.p}")
        return spec

    def starter(self) -> Starter:
        return Starter(self.field(), self.pairs, self.provenance)


def record_from_starter(starter: Starter, report: VerificationReport) -> CatalogRecord:
    F = starter.F
    profile = report.quotient_profile
    return CatalogRecord(
        q=F.q,
        p=F.p,
        m=F.m,
        modulus=F.modulus,
        alpha=F.mul(F.primitive_element, F.primitive_element),
        provenance=starter.provenance,
        pairs=starter.pairs,
        is_starter=report.is_starter,
        is_strong=report.is_strong,
        quotient_set=profile.quotient_set if profile else (),
    )


_FIELDS = {"schema_version", "q", "p", "m", "modulus", "alpha", "provenance", "pairs", "is_starter", "is_strong", "quotient_set"}


def parse_record(obj) -> CatalogRecord:
    """Build a record from a JSON string or decoded dict; a present hash must match."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise RecordError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise RecordError("a record is a JSON object")
    missing = {"q", "p", "m", "modulus", "pairs"} - obj.keys()
    if missing:
        raise RecordError(f"record lacks {sorted(missing)}")
    unknown = obj.keys() - _FIELDS - {"hash"}
    if unknown:
        raise RecordError(f"unknown record fields {sorted(unknown)}")
    if obj.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise RecordError(f"unsupported schema_version {obj['schema_version']}")
    if "hash" in obj and obj["hash"] != content_hash(obj):
        raise RecordError("content hash does not match the record")
    try:
        pairs = obj["pairs"]
        if any(len(p) != 2 for p in pairs):
            raise RecordError("every pair has exactly two members")
        prov = obj.get("provenance") or {"kind": "external", "betas": []}
        q, p, m = int(obj["q"]), int(obj["p"]), int(obj["m"])
        if q != p**m:
            raise RecordError(f"q = {q} is not p^m = {p}^{m}")
        return CatalogRecord(
            q=q,
            p=p,
            m=m,
            modulus=tuple(int(c) for c in obj["modulus"]),
            alpha=int(obj.get("alpha", 0)),
            provenance=Provenance(str(prov["kind"]), tuple(int(b) for b in prov.get("betas", ()))),
            pairs=canonical_pairs(pairs),
            is_starter=bool(obj.get("is_starter", False)),
            is_strong=bool(obj.get("is_strong", False)),
            quotient_set=tuple(int(v) for v in obj.get("quotient_set", ())),
        )
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, RecordError):
            raise
        raise RecordError(f"malformed record: {exc}") from None


def parse_records(text: str) -> list[CatalogRecord]:
    """One JSON document (object or list) or newline-delimited records."""
    text = text.strip()
    if not text:
        return []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return [parse_record(line) for line in text.splitlines() if line.strip()]
    if isinstance(doc, list):
        return [parse_record(d) for d in doc]
    return [parse_record(doc)]


def beta_pair_payload(q: int, bp: BetaPair) -> dict:
    return {
        "q": q,
        "beta1": bp.beta1,
        "beta2": bp.beta2,
        "cond_minus_plus": bp.cond_minus_plus,
        "cond_plus_minus": bp.cond_plus_minus,
    }

"""Claim records and the audit report container."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any


class Status(str, enum.Enum):
    VERIFIED = "VERIFIED"
    VIOLATED = "VIOLATED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ClaimRecord:
    claim_id: str
    statement: str
    status: Status
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "statement": self.statement,
            "status": self.status.value,
            "witness": self.witness,
        }


@dataclass
class AuditReport:
    limit: int
    checkpoints: list[int]
    claims: list[ClaimRecord]

    def __post_init__(self) -> None:
        self.claims = sorted(self.claims, key=lambda c: c.claim_id)
        ids = [c.claim_id for c in self.claims]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate claim ids in report")

    def status_of(self, claim_id: str) -> Status:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c.status
        raise KeyError(claim_id)

    def statuses(self) -> dict[str, Status]:
        return {c.claim_id: c.status for c in self.claims}

    def to_dict(self) -> dict[str, Any]:
        return {
            "limit": self.limit,
            "checkpoints": list(self.checkpoints),
            "claims": [c.to_dict() for c in self.claims],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

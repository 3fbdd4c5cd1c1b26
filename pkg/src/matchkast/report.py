from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


@dataclass
class VerificationReport:
    """Outcome of one mechanical check.

    ``reproducer`` holds serialized inputs (pbg text and friends) whenever the
    status is ``fail`` so the failure can be replayed from files.
    """

    subject: str
    claim: str
    status: str
    witness: dict[str, Any] = field(default_factory=dict)
    reproducer: dict[str, str] | None = None
    message: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, VACUOUS):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.reproducer:
            raise ValueError("a failing report needs a reproducer")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def __bool__(self):
        return self.ok

    def to_json(self) -> str:
        payload = {
            "subject": self.subject,
            "claim": self.claim,
            "status": self.status,
            "witness": {k: _jsonable(v) for k, v in self.witness.items()},
            "message": self.message,
        }
        return json.dumps(payload, sort_keys=True)

    def tsv_fields(self) -> list[str]:
        wit = ";".join(f"{k}={_jsonable(v)}" for k, v in sorted(self.witness.items()))
        return [self.subject, self.claim, self.status, wit]


def _jsonable(v: Any) -> Any:
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)

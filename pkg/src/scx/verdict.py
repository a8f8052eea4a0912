"""Verdicts returned by bounded decision procedures."""

from __future__ import annotations

from dataclasses import dataclass, field

YES = "YES"
NO = "NO"
SEMI = "SEMI-DECIDED-YES"


@dataclass
class Verdict:
    status: str
    witness: dict | None = None
    detail: str = ""
    checked: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status != NO

    @property
    def semi_decided(self) -> bool:
        return self.status == SEMI

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness,
            "detail": self.detail,
            "checked": dict(sorted(self.checked.items())),
        }


def yes(detail: str = "", **checked) -> Verdict:
    return Verdict(YES, None, detail, checked)


def semi(detail: str = "", **checked) -> Verdict:
    return Verdict(SEMI, None, detail, checked)


def no(witness: dict, detail: str = "") -> Verdict:
    return Verdict(NO, witness, detail)

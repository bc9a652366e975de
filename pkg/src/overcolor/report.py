"""Verification reports with deterministic, float-free serialization.

A report is the single outcome shape every verifier returns: which claim
ran, over what parameter grid and truncation, how many checks were made,
every failure (there should be none for theorem-backed claims), and the
hypothesis witnesses that were evaluated along the way.  Serialized output
is byte-identical across runs and across parallelism degrees: entries are
canonically sorted and no timestamps or floats ever appear in the body.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction


def _scrub(value):
    """Make a value JSON-safe: ints stay ints, rationals become strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        raise TypeError("floating point is banned from reports")
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return [_scrub(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _scrub(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    return str(value)


def _params_key(params: dict) -> str:
    return json.dumps(_scrub(params), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Failure:
    params: dict
    n: int
    observed: str

    def to_obj(self) -> dict:
        return {"params": _scrub(self.params), "n": self.n, "observed": self.observed}


@dataclass(frozen=True)
class Witness:
    params: dict
    hypothesis: str
    value: object

    def to_obj(self) -> dict:
        return {
            "params": _scrub(self.params),
            "hypothesis": self.hypothesis,
            "value": _scrub(self.value),
        }


@dataclass
class VerificationReport:
    claim: str
    grid: dict
    truncation: int
    ring: str
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add_failure(self, params: dict, n: int, observed) -> None:
        self.failures.append(Failure(dict(params), n, str(observed)))

    def add_witness(self, params: dict, hypothesis: str, value) -> None:
        self.witnesses.append(Witness(dict(params), hypothesis, value))

    def absorb(self, other: "VerificationReport") -> None:
        """Fold another report's counts and findings into this one."""
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.witnesses.extend(other.witnesses)

    def canonicalize(self) -> "VerificationReport":
        """Sort entries so the serialized report is order-independent."""
        self.failures.sort(key=lambda f: (_params_key(f.params), f.n))
        self.witnesses.sort(key=lambda w: (_params_key(w.params), w.hypothesis))
        return self

    def to_obj(self) -> dict:
        self.canonicalize()
        return {
            "claim": self.claim,
            "grid": _scrub(self.grid),
            "truncation": self.truncation,
            "ring": self.ring,
            "checked": self.checked,
            "failures": [f.to_obj() for f in self.failures],
            "witnesses": [w.to_obj() for w in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), ensure_ascii=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        """RFC-4180 rows: kind,claim,params,position,value."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        obj = self.to_obj()
        writer.writerow(["summary", self.claim, _params_key(self.grid), self.checked, len(self.failures)])
        for f in obj["failures"]:
            writer.writerow(["failure", self.claim, json.dumps(f["params"], sort_keys=True), f["n"], f["observed"]])
        for w in obj["witnesses"]:
            writer.writerow(["witness", self.claim, json.dumps(w["params"], sort_keys=True), w["hypothesis"], json.dumps(w["value"])])
        return buf.getvalue()

    def to_text(self) -> str:
        self.canonicalize()
        lines = [
            f"claim {self.claim}: {'PASS' if self.ok else 'FAIL'}"
            f" (checked {self.checked}, failures {len(self.failures)},"
            f" truncation {self.truncation}, ring {self.ring})"
        ]
        for f in self.failures[:20]:
            lines.append(f"  FAIL at n={f.n} params={_params_key(f.params)}: {f.observed}")
        if len(self.failures) > 20:
            lines.append(f"  ... {len(self.failures) - 20} more failures")
        for w in self.witnesses:
            lines.append(f"  witness {w.hypothesis} = {w.value} @ {_params_key(w.params)}")
        return "\n".join(lines) + "\n"

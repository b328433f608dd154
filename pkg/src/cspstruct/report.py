"""Analysis report records and their JSON schema.

The JSON layout round-trips exactly: ``from_json(to_json(report))`` equals
the original report.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class Finding:
    kind: str
    variable: str
    values: tuple[str, ...]
    over: tuple[str, ...]
    verdict: str  # TRUE | FALSE | ESTABLISHED | UNKNOWN
    method: str  # oracle | local | tractable | hierarchy
    evidence: str | None
    elapsed_ms: float

    def line(self) -> str:
        bits = [self.kind, self.variable, *self.values]
        if self.over:
            bits.append("on(" + ",".join(self.over) + ")")
        bits.append(self.verdict)
        return " ".join(bits)


@dataclass(frozen=True)
class AnalysisReport:
    digest: str
    method: str
    findings: tuple[Finding, ...]
    summary: dict[str, int]

    def render(self, positives_only: bool = True) -> str:
        lines = []
        for finding in self.findings:
            if positives_only and finding.verdict not in ("TRUE", "ESTABLISHED"):
                continue
            lines.append(finding.line())
        counted = ", ".join(f"{k}={v}" for k, v in sorted(self.summary.items()))
        lines.append(f"# instance {self.digest}: {counted}")
        return "\n".join(lines)


def summarize(findings: tuple[Finding, ...]) -> dict[str, int]:
    return dict(Counter(f.verdict for f in findings))


def make_report(digest: str, method: str, findings) -> AnalysisReport:
    findings = tuple(findings)
    return AnalysisReport(digest, method, findings, summarize(findings))


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def to_json(report: AnalysisReport) -> str:
    payload = {
        "digest": report.digest,
        "method": report.method,
        "findings": [
            {
                "kind": f.kind,
                "variable": f.variable,
                "values": list(f.values),
                "over": list(f.over),
                "verdict": f.verdict,
                "method": f.method,
                "evidence": f.evidence,
                "elapsed_ms": f.elapsed_ms,
            }
            for f in report.findings
        ],
        "summary": report.summary,
    }
    return json.dumps(payload, indent=2)


def from_json(text: str) -> AnalysisReport:
    payload = json.loads(text)
    findings = tuple(
        Finding(
            kind=f["kind"],
            variable=f["variable"],
            values=tuple(f["values"]),
            over=tuple(f["over"]),
            verdict=f["verdict"],
            method=f["method"],
            evidence=f["evidence"],
            elapsed_ms=f["elapsed_ms"],
        )
        for f in payload["findings"]
    )
    return AnalysisReport(payload["digest"], payload["method"], findings, payload["summary"])

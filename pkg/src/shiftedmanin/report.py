"""Check results and suite reports with deterministic JSON rendering."""

import json
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    witness: object = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status != FAIL

    def to_json(self):
        out = {"name": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        if self.stats:
            out["stats"] = self.stats
        return out


def passed(name, detail="", **stats):
    return CheckResult(name, PASS, detail, None, stats)


def failed(name, detail, witness=None, **stats):
    return CheckResult(name, FAIL, detail, witness, stats)


def skipped(name, reason):
    return CheckResult(name, SKIP, reason)


class Report:
    def __init__(self, suite, params=None):
        self.suite = suite
        self.params = dict(params or {})
        self.checks = []
        self.info = {}
        self._t0 = time.perf_counter()
        self.elapsed = 0.0

    def add(self, result):
        if isinstance(result, Report):
            for c in result.checks:
                self.checks.append(CheckResult(f"{result.suite}/{c.name}", c.status,
                                               c.detail, c.witness, c.stats))
            for k, v in result.info.items():
                self.info[f"{result.suite}/{k}"] = v
        else:
            self.checks.append(result)
        self.elapsed = time.perf_counter() - self._t0
        return result

    def extend(self, results):
        for r in results:
            self.add(r)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def first_failure(self):
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def to_json(self, timing=False):
        out = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "status": PASS if self.ok else FAIL,
            "params": self.params,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.info:
            out["info"] = self.info
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def dumps(self, timing=False):
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def pretty(self):
        lines = [f"suite {self.suite}: {'PASS' if self.ok else 'FAIL'}"]
        if self.params:
            lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())))
        for c in self.checks:
            line = f"  [{c.status:>7}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
            if c.witness is not None and c.status == FAIL:
                lines.append(f"            witness: {json.dumps(c.witness, ensure_ascii=False)}")
        for k, v in sorted(self.info.items()):
            lines.append(f"  {k}: {json.dumps(v, ensure_ascii=False)}")
        return "\n".join(lines) + "\n"

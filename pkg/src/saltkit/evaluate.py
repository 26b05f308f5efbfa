"""Recompilation / re-execution metrics over decompiled functions.

Each case pairs decompiled C with an assertion-style test scaffold. The
scaffold's ``assert(...)`` calls are rewritten into a counting ``CHECK``
macro so one failing check does not hide the others; the program reports
``SALT_RESULT passed=<p> total=<t>`` after every check.
"""

from __future__ import annotations

import json
import os
import re
import shutil
import subprocess
import tempfile
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

LEVELS = ("O0", "O1", "O2", "O3")
DEFAULT_TIMEOUT = 10.0

_OPEN_PAREN = re.compile(r"\s*\(")
RESULT_LINE = re.compile(r"SALT_RESULT passed=(\d+) total=(\d+)")

PRELUDE = """\
#include <stdio.h>
static int salt_passed_, salt_total_;
static void salt_check_(int ok) {
    salt_total_++;
    if (ok) salt_passed_++;
    printf("\\nSALT_RESULT passed=%d total=%d\\n", salt_passed_, salt_total_);
    fflush(stdout);
}
#define CHECK(expr) salt_check_((expr) ? 1 : 0)
"""


class NoAssertions(ValueError):
    pass


class SandboxFailure(RuntimeError):
    pass


class EmptyInput(ValueError):
    pass


# Instrumentation -------------------------------------------------------------


def _skip_literal(src: str, i: int) -> int:
    """Index just past the string/char literal or comment starting at ``i``, else ``i``."""
    if src.startswith("//", i):
        j = src.find("\n", i)
        return len(src) if j < 0 else j
    if src.startswith("/*", i):
        j = src.find("*/", i + 2)
        return len(src) if j < 0 else j + 2
    if src[i] in "\"'":
        q, j = src[i], i + 1
        while j < len(src) and src[j] != q:
            j += 2 if src[j] == "\\" else 1
        return j + 1
    return i


def find_asserts(src: str) -> list[tuple[int, int]]:
    """Spans of ``assert`` identifiers used as calls, outside comments and literals."""
    spans = []
    i = 0
    line_start = True
    while i < len(src):
        j = _skip_literal(src, i)
        if j != i:
            i = j
            continue
        ch = src[i]
        if line_start and ch == "#":
            # preprocessor lines (#include <assert.h>, #define ...) are left alone
            while i < len(src) and src[i] != "\n":
                i += 2 if src.startswith("\\\n", i) else 1
            continue
        if ch == "\n":
            line_start = True
        elif not ch.isspace():
            line_start = False
        if src.startswith("assert", i) and (i == 0 or not (src[i - 1].isalnum() or src[i - 1] == "_")):
            k = i + len("assert")
            if k < len(src) and (src[k].isalnum() or src[k] == "_"):
                i = k
                continue
            if _OPEN_PAREN.match(src, k):
                spans.append((i, k))
            i = k
            continue
        i += 1
    return spans


def instrument_scaffold(test_source: str) -> str:
    spans = find_asserts(test_source)
    if not spans:
        raise NoAssertions("scaffold has no assert(...) checks")
    out = []
    prev = 0
    for lo, hi in spans:
        out.append(test_source[prev:lo])
        out.append("CHECK")
        prev = hi
    out.append(test_source[prev:])
    return PRELUDE + "".join(out)


def count_checks(test_source: str) -> int:
    return len(find_asserts(test_source))


# Cases -----------------------------------------------------------------------


@dataclass(frozen=True)
class EvalCase:
    function_id: str
    level: str
    decompiled: str
    scaffold: str
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown optimization level {self.level!r}")
        if count_checks(self.scaffold) < 1:
            raise NoAssertions(f"{self.function_id}: scaffold has no checks")

    @classmethod
    def from_obj(cls, obj: dict) -> "EvalCase":
        return cls(
            function_id=str(obj["id"]),
            level=obj.get("level", "O0"),
            decompiled=obj["decompiled"],
            scaffold=obj["scaffold"],
            timeout=float(obj.get("timeout", DEFAULT_TIMEOUT)),
        )


@dataclass(frozen=True)
class CaseResult:
    function_id: str
    level: str
    compiled: bool
    all_passed: bool
    passed: int
    total: int
    detail: str = ""

    @property
    def pass_rate(self) -> float:
        return self.passed / self.total if self.total else 0.0


def _last_result(stdout: str) -> Optional[tuple[int, int]]:
    found = RESULT_LINE.findall(stdout)
    if not found:
        return None
    p, t = found[-1]
    return int(p), int(t)


def run_case(
    c: EvalCase,
    compiler: str = "gcc",
    flags: Sequence[str] = (),
    scratch: Optional[str] = None,
) -> CaseResult:
    static_total = count_checks(c.scaffold)
    try:
        tmp = tempfile.mkdtemp(prefix="saltkit-eval-", dir=scratch)
    except OSError as exc:
        raise SandboxFailure(str(exc)) from exc
    work = Path(tmp)
    try:
        src = work / "case.c"
        exe = work / "case.bin"
        src.write_text(c.decompiled + "\n" + instrument_scaffold(c.scaffold))
        try:
            build = subprocess.run(
                [compiler, *flags, "-w", str(src), "-o", str(exe), "-lm"],
                capture_output=True,
                text=True,
                timeout=max(c.timeout, 30.0),
            )
        except subprocess.TimeoutExpired:
            return CaseResult(c.function_id, c.level, False, False, 0, static_total, "build timeout")
        except FileNotFoundError as exc:
            raise SandboxFailure(f"compiler not found: {compiler}") from exc
        if build.returncode != 0:
            return CaseResult(c.function_id, c.level, False, False, 0, static_total, build.stderr[-2000:])
        try:
            proc = subprocess.Popen(
                [str(exe)], cwd=work, stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                stderr=subprocess.PIPE, text=True,
            )
        except OSError as exc:
            raise SandboxFailure(str(exc)) from exc
        try:
            out, _ = proc.communicate(timeout=c.timeout)
            crashed = proc.returncode != 0
            detail = f"exit {proc.returncode}" if crashed else ""
        except subprocess.TimeoutExpired:
            proc.kill()
            out, _ = proc.communicate()
            crashed, detail = True, "timeout"
        counts = _last_result(out or "")
        passed, total = counts if counts else (0, static_total)
        # checks skipped by an early return still count against the case
        total = max(total, static_total)
        all_passed = not crashed and counts is not None and passed == total
        return CaseResult(c.function_id, c.level, True, all_passed, passed, total, detail)
    finally:
        shutil.rmtree(work, ignore_errors=True)


def run_cases(
    cases: Sequence[EvalCase], compiler: str = "gcc", jobs: int = 4, scratch: Optional[str] = None
) -> list[CaseResult]:
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        return list(pool.map(lambda c: run_case(c, compiler, scratch=scratch), cases))


# Aggregation -----------------------------------------------------------------


@dataclass(frozen=True)
class Metrics:
    n: int
    rc: float
    re: float
    tcp: float


@dataclass(frozen=True)
class EvalReport:
    cases: tuple[CaseResult, ...]
    levels: dict
    overall: Metrics

    def to_json(self) -> str:
        obj = {
            "cases": [asdict(c) for c in self.cases],
            "levels": {k: asdict(v) for k, v in self.levels.items()},
            "overall": asdict(self.overall),
        }
        return json.dumps(obj, indent=2) + "\n"

    def table(self) -> str:
        rows = [f"{'level':<8}{'n':>6}{'RC':>8}{'RE':>8}{'TCP':>8}"]
        for name, m in list(self.levels.items()) + [("overall", self.overall)]:
            rows.append(f"{name:<8}{m.n:>6}{m.rc:>8.3f}{m.re:>8.3f}{m.tcp:>8.3f}")
        return "\n".join(rows) + "\n"


def _metrics(results: Sequence[CaseResult]) -> Metrics:
    n = len(results)
    return Metrics(
        n=n,
        rc=sum(r.compiled for r in results) / n,
        re=sum(r.all_passed for r in results) / n,
        tcp=sum(r.pass_rate for r in results) / n,
    )


def aggregate(results: Iterable[CaseResult]) -> EvalReport:
    ordered = sorted(results, key=lambda r: (r.level, r.function_id))
    if not ordered:
        raise EmptyInput("no results to aggregate")
    by_level = defaultdict(list)
    for r in ordered:
        by_level[r.level].append(r)
    levels = {lv: _metrics(by_level[lv]) for lv in sorted(by_level)}
    return EvalReport(tuple(ordered), levels, _metrics(ordered))


def load_cases(path: os.PathLike) -> list[EvalCase]:
    """Cases from a directory of ``*.json`` files or a ``.jsonl`` file."""
    p = Path(path)
    if p.is_dir():
        objs = [json.loads(f.read_text()) for f in sorted(p.glob("*.json"))]
    else:
        objs = [json.loads(line) for line in p.read_text().splitlines() if line.strip()]
    return [EvalCase.from_obj(o) for o in objs]

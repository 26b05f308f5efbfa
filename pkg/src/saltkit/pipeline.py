"""Decompile a SALT with a model, then repair and polish the candidate source.

Stages run strictly in order per record:

    decompile -> compilation fixer (<= 3 rounds) -> boundary fixer -> rename -> comment

The boundary, rename and comment stages only replace the candidate with output
that compiles (or keep it unchanged if neither version does).
"""

from __future__ import annotations

import enum
import json
import os
import re
import shutil
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Protocol, Sequence

from .llm import Completer, LlmError
from .prompts import get_prompt

MAX_CEF_ROUNDS = 3


class CompilerNotFound(RuntimeError):
    pass


class Status(enum.IntEnum):
    RAW = 0
    COMPILED = 1
    CEF_FIXED = 2
    BEF_FIXED = 3
    SYMBOLS_RECOVERED = 4
    FAILED = 99


@dataclass(frozen=True)
class TranscriptEntry:
    stage: str
    prompt: str
    response: Optional[str]


@dataclass(frozen=True)
class DecompileRecord:
    function_id: str
    salt: str
    candidate: Optional[str] = None
    status: Status = Status.RAW
    cef_rounds: int = 0
    compiles: Optional[bool] = None
    reason: Optional[str] = None
    transcript: tuple[TranscriptEntry, ...] = ()

    def prompts(self, stage: str) -> int:
        return sum(1 for t in self.transcript if t.stage == stage)

    def to_json(self) -> dict:
        return {
            "function_id": self.function_id,
            "status": self.status.name.lower(),
            "cef_rounds": self.cef_rounds,
            "compiles": self.compiles,
            "reason": self.reason,
            "candidate": self.candidate,
            "transcript": [
                {"stage": t.stage, "prompt": t.prompt, "response": t.response} for t in self.transcript
            ],
        }


# Compilation -----------------------------------------------------------------


@dataclass(frozen=True)
class CompileResult:
    ok: bool
    returncode: int
    stderr: str


class Compiler(Protocol):
    def compile(self, source: str) -> CompileResult: ...


@dataclass
class CCompiler:
    command: str = "gcc"
    flags: tuple[str, ...] = ("-c",)
    scratch: Optional[str] = None
    timeout: float = 60.0

    def __post_init__(self):
        if shutil.which(self.command) is None:
            raise CompilerNotFound(self.command)

    def compile(self, source: str) -> CompileResult:
        with tempfile.TemporaryDirectory(dir=self.scratch, prefix="saltkit-cc-") as tmp:
            src = Path(tmp) / "candidate.c"
            src.write_text(source)
            cmd = [self.command, *self.flags, str(src), "-o", str(Path(tmp) / "candidate.o")]
            try:
                proc = subprocess.run(cmd, capture_output=True, text=True, timeout=self.timeout)
            except subprocess.TimeoutExpired:
                return CompileResult(False, -1, "compiler timed out")
            stderr = proc.stderr.replace(str(src), "candidate.c")
            return CompileResult(proc.returncode == 0, proc.returncode, stderr)


# Response post-processing --------------------------------------------------

_FENCE = re.compile(r"```[^\n`]*\n(.*?)```", re.S)


def _brace_regions(text: str) -> list[tuple[int, int]]:
    regions, depth, opened = [], 0, None
    for i, ch in enumerate(text):
        if ch == "{":
            if depth == 0:
                opened = i
            depth += 1
        elif ch == "}" and depth:
            depth -= 1
            if depth == 0:
                regions.append((opened, i + 1))
    return regions


def extract_code(text: str) -> str:
    """First fenced block, else the longest brace-balanced region, else the text."""
    m = _FENCE.search(text)
    if m:
        return m.group(1).strip("\n")
    regions = _brace_regions(text)
    if regions:
        lo, hi = max(regions, key=lambda r: (r[1] - r[0], -r[0]))
        # widen to the declarator: start of the '{' line, or the line before
        # when the brace sits alone (Allman style)
        line_start = text.rfind("\n", 0, lo) + 1
        if not text[line_start:lo].strip() and line_start > 0:
            line_start = text.rfind("\n", 0, line_start - 1) + 1
        return text[line_start:hi].strip("\n")
    return text.strip()


# Stages ----------------------------------------------------------------------


def _ask(rec: DecompileRecord, client: Completer, stage: str, prompt: str) -> tuple[DecompileRecord, Optional[str]]:
    try:
        response = client.complete(prompt)
    except LlmError as exc:
        entry = TranscriptEntry(stage, prompt, None)
        return replace(rec, transcript=rec.transcript + (entry,), reason=exc.reason), None
    entry = TranscriptEntry(stage, prompt, response)
    return replace(rec, transcript=rec.transcript + (entry,)), response


def decompile(
    salt_text: str, client: Completer, function_id: str = "f", template_dir: Optional[str] = None
) -> DecompileRecord:
    rec = DecompileRecord(function_id=function_id, salt=salt_text)
    prompt = get_prompt("decompile", {"salt": salt_text}, template_dir)
    rec, response = _ask(rec, client, "decompile", prompt)
    if response is None:
        return replace(rec, status=Status.FAILED)
    return replace(rec, candidate=extract_code(response), status=Status.RAW)


def fix_compilation(
    rec: DecompileRecord,
    client: Completer,
    compiler: Compiler,
    max_rounds: int = MAX_CEF_ROUNDS,
    template_dir: Optional[str] = None,
) -> DecompileRecord:
    if rec.status == Status.FAILED:
        return rec
    if rec.candidate is None or rec.status != Status.RAW:
        raise ValueError(f"{rec.function_id}: compilation fixer needs a raw candidate")
    result = compiler.compile(rec.candidate)
    if result.ok:
        return replace(rec, status=Status.COMPILED, compiles=True)
    rounds = 0
    candidate = rec.candidate
    while rounds < max_rounds:
        prompt = get_prompt("cef", {"errors": result.stderr.strip(), "code": candidate}, template_dir)
        rec, response = _ask(rec, client, "cef", prompt)
        if response is None:
            break
        rounds += 1
        candidate = extract_code(response)
        result = compiler.compile(candidate)
        if result.ok:
            break
    # forwarded to the next stage whether or not it compiles now
    return replace(rec, candidate=candidate, status=Status.CEF_FIXED, cef_rounds=rounds, compiles=result.ok)


def _guarded(
    rec: DecompileRecord, client: Completer, compiler: Compiler, stage: str, template_dir: Optional[str]
) -> DecompileRecord:
    prompt = get_prompt(stage, {"code": rec.candidate}, template_dir)
    rec, response = _ask(rec, client, stage, prompt)
    if response is None:
        return rec
    proposal = extract_code(response)
    if proposal == rec.candidate:
        return rec
    if compiler.compile(proposal).ok:
        return replace(rec, candidate=proposal, compiles=True)
    return rec


def fix_boundaries(
    rec: DecompileRecord, client: Completer, compiler: Compiler, template_dir: Optional[str] = None
) -> DecompileRecord:
    if rec.status == Status.FAILED:
        return rec
    if rec.status not in (Status.COMPILED, Status.CEF_FIXED):
        raise ValueError(f"{rec.function_id}: boundary fixer runs after the compilation fixer")
    rec = _guarded(rec, client, compiler, "bef", template_dir)
    return replace(rec, status=Status.BEF_FIXED)


def recover_symbols(
    rec: DecompileRecord,
    rename_client: Completer,
    compiler: Compiler,
    comment_client: Optional[Completer] = None,
    template_dir: Optional[str] = None,
) -> DecompileRecord:
    if rec.status == Status.FAILED:
        return rec
    if rec.status != Status.BEF_FIXED:
        raise ValueError(f"{rec.function_id}: symbol recovery runs after the boundary fixer")
    rec = _guarded(rec, rename_client, compiler, "rename", template_dir)
    rec = _guarded(rec, comment_client or rename_client, compiler, "comment", template_dir)
    return replace(rec, status=Status.SYMBOLS_RECOVERED)


@dataclass
class Clients:
    decompiler: Completer
    cef: Completer
    bef: Completer
    symbols: Completer

    @classmethod
    def shared(cls, client: Completer) -> "Clients":
        return cls(client, client, client, client)


def run_pipeline(
    salt_text: str,
    clients: Clients,
    compiler: Compiler,
    function_id: str = "f",
    template_dir: Optional[str] = None,
) -> DecompileRecord:
    rec = decompile(salt_text, clients.decompiler, function_id, template_dir)
    rec = fix_compilation(rec, clients.cef, compiler, template_dir=template_dir)
    rec = fix_boundaries(rec, clients.bef, compiler, template_dir)
    return recover_symbols(rec, clients.symbols, compiler, template_dir=template_dir)


def run_many(
    items: Sequence[tuple[str, str]],
    clients: Clients,
    compiler: Compiler,
    jobs: int = 4,
    template_dir: Optional[str] = None,
) -> list[DecompileRecord]:
    """Run ``(function_id, salt_text)`` items with at most ``jobs`` in flight; output order follows input."""
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        futs = [pool.submit(run_pipeline, salt, clients, compiler, fid, template_dir) for fid, salt in items]
        return [f.result() for f in futs]


# Replay ----------------------------------------------------------------------


class TranscriptMismatch(AssertionError):
    pass


@dataclass
class ReplayClient:
    """Serves recorded responses in order, checking each prompt matches."""

    entries: Sequence[TranscriptEntry]
    position: int = field(default=0)

    def complete(self, prompt: str) -> str:
        if self.position >= len(self.entries):
            raise TranscriptMismatch("more requests than recorded")
        entry = self.entries[self.position]
        self.position += 1
        if entry.prompt != prompt:
            raise TranscriptMismatch(f"prompt #{self.position} differs from the recording")
        if entry.response is None:
            raise LlmError("recorded failure")
        return entry.response


def replay(rec: DecompileRecord, compiler: Compiler, template_dir: Optional[str] = None) -> DecompileRecord:
    client = ReplayClient(rec.transcript)
    return run_pipeline(rec.salt, Clients.shared(client), compiler, rec.function_id, template_dir)


def write_transcripts(records: Sequence[DecompileRecord], path: os.PathLike) -> None:
    Path(path).write_text(json.dumps([r.to_json() for r in records], indent=2) + "\n")

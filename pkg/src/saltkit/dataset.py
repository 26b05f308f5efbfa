"""Training-pair curation: filter C functions, build them at several levels, pair SALT with source.

Each corpus entry is expected to hold one C function definition (plus any
includes it needs). For every kept function and optimization level the
source is compiled into a shared object, its symbol range is read with
``nm`` before stripping, and the stripped binary is disassembled with
``objdump``. The listing then goes through the usual SALT chain.
"""

from __future__ import annotations

import json
import os
import random
import re
import shutil
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import ctext
from .ingest import IngestError, parse_listing, parse_objdump_contents, synthesize_name
from .salt import DEFAULT_TOKEN_BUDGET, PromptTooLong, render_prompt, salt_of, serialize_salt

LEVELS = ("O0", "O1", "O2", "O3")

COMPILE_FAILED = "CompileFailed"
DISASSEMBLE_FAILED = "DisassembleFailed"
TOOL_MISSING = "ToolMissing"
TOO_LONG = "too-long"


class ToolVersionMismatch(RuntimeError):
    pass


# Filtering -------------------------------------------------------------------


@dataclass(frozen=True)
class FilterPolicy:
    min_lines: int = 5
    max_lines: int = 500
    loop_ratio: Fraction = Fraction(1, 200)
    retention: float = 0.20
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.retention <= 1:
            raise ValueError("retention must be in (0, 1]")
        if self.min_lines <= 0 or self.max_lines <= 0 or self.loop_ratio <= 0:
            raise ValueError("thresholds must be positive")
        object.__setattr__(self, "loop_ratio", Fraction(self.loop_ratio))

    def rng_for(self, function_id: str) -> random.Random:
        # string seeds hash deterministically, independent of task order
        return random.Random(f"{self.seed}:{function_id}")


@dataclass(frozen=True)
class FilterStats:
    meaningful_lines: int
    total_lines: int
    loops: int


def _strip_preprocessor(src: str) -> str:
    return re.sub(r"(?m)^[ \t]*#(?:\\\n|[^\n])*\n?", "", src)


def measure(source: str) -> FilterStats:
    body = _strip_preprocessor(source).strip("\n")
    start = ctext.body_start_line(body)
    code = ctext.code_lines(body)
    # lines up to and including the opening brace make up the definition
    meaningful = sum(1 for n in code if start is None or n > start)
    total = len(body.splitlines())
    return FilterStats(meaningful, total, ctext.count_loops(body))


def filter_function(source: str, policy: FilterPolicy, rng: random.Random) -> tuple[bool, str]:
    """Decide whether a function enters the corpus; returns (keep, reason)."""
    st = measure(source)
    if st.meaningful_lines < policy.min_lines:
        return False, "min-lines"
    if st.total_lines > policy.max_lines:
        return False, "max-lines"
    if st.total_lines and Fraction(st.loops, st.total_lines) > policy.loop_ratio:
        return True, "loop-ratio"
    if rng.random() < policy.retention:
        return True, "sampled"
    return False, "dropped"


# Building --------------------------------------------------------------------


@dataclass(frozen=True)
class BuildRecipe:
    compiler: str = "gcc"
    compiler_version: Optional[str] = None
    levels: tuple[str, ...] = LEVELS
    flags: tuple[str, ...] = ("-shared", "-fPIC")
    strip: bool = True
    strip_command: str = "strip"
    objdump: str = "objdump"
    nm: str = "nm"
    formatter: Optional[tuple[str, ...]] = None
    renamer: Optional[tuple[str, ...]] = None
    timeout: float = 120.0

    def __post_init__(self):
        if not self.levels:
            raise ValueError("at least one optimization level is required")
        bad = [lv for lv in self.levels if lv not in LEVELS]
        if bad:
            raise ValueError(f"unknown optimization levels: {bad}")

    def check_version(self) -> None:
        if self.compiler_version is None:
            return
        try:
            got = subprocess.run([self.compiler, "-dumpversion"], capture_output=True, text=True).stdout.strip()
        except FileNotFoundError:
            return  # reported per function as ToolMissing
        if not got.startswith(self.compiler_version):
            raise ToolVersionMismatch(f"{self.compiler} is {got}, recipe pins {self.compiler_version}")


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    source: str


@dataclass(frozen=True)
class Pair:
    id: str
    level: str
    salt: str
    source: str


@dataclass(frozen=True)
class Failure:
    id: str
    level: Optional[str]
    kind: str
    detail: str = ""


@dataclass
class BuildResult:
    pairs: list[Pair] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    filtered: list[tuple[str, str]] = field(default_factory=list)

    def per_level(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for p in self.pairs:
            counts[p.level] = counts.get(p.level, 0) + 1
        return dict(sorted(counts.items()))

    def manifest(self) -> dict:
        return {
            "pairs": len(self.pairs),
            "per_level": self.per_level(),
            "kept": sorted({p.id for p in self.pairs} | {f.id for f in self.failures if f.level}),
            "filtered": [{"id": i, "reason": r} for i, r in self.filtered],
            "failures": [asdict(f) for f in self.failures],
        }


class _StepFailed(Exception):
    def __init__(self, kind: str, detail: str):
        super().__init__(detail)
        self.kind = kind
        self.detail = detail


def _run(cmd: Sequence[str], kind: str, timeout: float, stdin: Optional[str] = None, cwd=None) -> str:
    try:
        proc = subprocess.run(list(cmd), input=stdin, capture_output=True, text=True, timeout=timeout, cwd=cwd)
    except FileNotFoundError:
        raise _StepFailed(TOOL_MISSING, f"{cmd[0]} not found")
    except subprocess.TimeoutExpired:
        raise _StepFailed(kind, f"{cmd[0]} timed out")
    if proc.returncode != 0:
        raise _StepFailed(kind, proc.stderr.strip()[-2000:] or f"{cmd[0]} exited {proc.returncode}")
    return proc.stdout


def preprocess_source(source: str, recipe: BuildRecipe) -> str:
    """Formatter then renamer; the built-in renamer is used when none is configured."""
    src = _strip_preprocessor(source).strip("\n") + "\n"
    if recipe.formatter:
        src = _run(recipe.formatter, "PreprocessFailed", recipe.timeout, stdin=src)
    if recipe.renamer:
        return _run(recipe.renamer, "PreprocessFailed", recipe.timeout, stdin=src)
    return ctext.rename_variables(src)


def _symbol_range(nm_out: str, name: str) -> Optional[tuple[int, int]]:
    for line in nm_out.splitlines():
        parts = line.split()
        if len(parts) == 4 and parts[2] in "Tt" and parts[3] == name:
            start, size = int(parts[0], 16), int(parts[1], 16)
            return start, start + size
    return None


def build_one(entry: CorpusEntry, level: str, recipe: BuildRecipe, budget: Optional[int]) -> Pair:
    """One (function, level) build; raises _StepFailed on any routed failure."""
    func, _ = ctext.declared_names(entry.source)
    if func is None:
        raise _StepFailed(COMPILE_FAILED, "no function definition found")
    with tempfile.TemporaryDirectory(prefix="saltkit-ds-") as tmp:
        # tools run inside the scratch dir on relative names so messages are reproducible
        def run(cmd, kind):
            return _run(cmd, kind, recipe.timeout, cwd=tmp)

        Path(tmp, "unit.c").write_text(entry.source)
        run([recipe.compiler, f"-{level}", *recipe.flags, "unit.c", "-o", "unit.so"], COMPILE_FAILED)
        span = _symbol_range(run([recipe.nm, "-S", "--defined-only", "unit.so"], DISASSEMBLE_FAILED), func)
        if span is None:
            raise _StepFailed(DISASSEMBLE_FAILED, f"symbol {func} not in the binary")
        if recipe.strip:
            run([recipe.strip_command, "unit.so"], DISASSEMBLE_FAILED)
        listing = run(
            [recipe.objdump, "-d", "-w", f"--start-address={span[0]:#x}", f"--stop-address={span[1]:#x}", "unit.so"],
            DISASSEMBLE_FAILED,
        )
        contents = run([recipe.objdump, "-s", "-j", ".rodata", "-j", ".data", "unit.so"], DISASSEMBLE_FAILED)
    try:
        functions, _ = parse_listing(listing)
        data = parse_objdump_contents(contents)
    except IngestError as exc:
        raise _StepFailed(DISASSEMBLE_FAILED, str(exc))
    if len(functions) != 1:
        raise _StepFailed(DISASSEMBLE_FAILED, f"expected one function in range, got {len(functions)}")
    fn = functions[0]
    if recipe.strip:
        # whatever survives in the dynamic symbol table is not trusted as a name
        fn = type(fn)(synthesize_name(fn.entry), fn.entry, fn.instructions)
    text = serialize_salt(salt_of(fn, data))
    try:
        render_prompt(text, budget)
    except PromptTooLong as exc:
        raise _StepFailed(TOO_LONG, str(exc))
    return Pair(entry.id, level, text, preprocess_source(entry.source, recipe))


def build_pairs(
    corpus: Iterable[CorpusEntry],
    recipe: BuildRecipe,
    policy: FilterPolicy,
    budget: Optional[int] = DEFAULT_TOKEN_BUDGET,
    jobs: int = 4,
) -> BuildResult:
    recipe.check_version()
    result = BuildResult()
    tasks = []
    for entry in sorted(corpus, key=lambda e: e.id):
        keep, reason = filter_function(entry.source, policy, policy.rng_for(entry.id))
        if not keep:
            result.filtered.append((entry.id, reason))
            continue
        tasks.extend((entry, lv) for lv in recipe.levels)

    def work(task):
        entry, lv = task
        try:
            return build_one(entry, lv, recipe, budget)
        except _StepFailed as exc:
            return Failure(entry.id, lv, exc.kind, exc.detail)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        outcomes = list(pool.map(work, tasks))
    for out in outcomes:
        (result.pairs if isinstance(out, Pair) else result.failures).append(out)
    order = {lv: i for i, lv in enumerate(LEVELS)}
    result.pairs.sort(key=lambda p: (p.id, order[p.level]))
    result.failures.sort(key=lambda f: (f.id, order.get(f.level, -1)))
    return result


# I/O -------------------------------------------------------------------------


def load_corpus(path: os.PathLike) -> list[CorpusEntry]:
    """A directory of ``*.c`` files (id = file stem) or a JSONL of ``{id, source}``."""
    p = Path(path)
    if p.is_dir():
        return [CorpusEntry(f.stem, f.read_text()) for f in sorted(p.glob("*.c"))]
    entries = []
    for line in p.read_text().splitlines():
        if line.strip():
            obj = json.loads(line)
            entries.append(CorpusEntry(str(obj["id"]), obj["source"]))
    return entries


def write_pairs(result: BuildResult, out: os.PathLike, manifest: Optional[os.PathLike] = None) -> None:
    with open(out, "w") as fh:
        for p in result.pairs:
            fh.write(json.dumps(asdict(p), sort_keys=True) + "\n")
    if manifest is not None:
        Path(manifest).write_text(json.dumps(result.manifest(), indent=2, sort_keys=True) + "\n")


def missing_tools(recipe: BuildRecipe) -> list[str]:
    """Configured commands that cannot be found on PATH."""
    cmds = [recipe.compiler, recipe.objdump, recipe.nm] + ([recipe.strip_command] if recipe.strip else [])
    return [c for c in cmds if shutil.which(c) is None]

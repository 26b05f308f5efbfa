"""Ingest disassembly listings and canonical JSON into in-memory functions.

Listing grammar (objdump-flavoured)::

    0000000000001129 <f>:
        1129:	55                   	push   %rbp
        112a:	c3                   	ret
    SECTION .rodata @ 2000:
    32 33 35 37 42 44 00

The bytes column is optional. When present it fixes ``Instruction.size``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence


class IngestError(ValueError):
    pass


class MalformedLine(IngestError):
    def __init__(self, line_no: int, line: str = ""):
        super().__init__(f"line {line_no}: cannot parse {line!r}")
        self.line_no = line_no


class DuplicateAddress(IngestError):
    def __init__(self, addr: int):
        super().__init__(f"duplicate instruction address {addr:#x}")
        self.addr = addr


class EmptyFunction(IngestError):
    def __init__(self, name: str):
        super().__init__(f"function {name!r} has no instructions")
        self.name = name


class SchemaViolation(IngestError):
    def __init__(self, path: str, why: str = "invalid"):
        super().__init__(f"{path}: {why}")
        self.path = path


class InvalidFunction(IngestError):
    pass


@dataclass(frozen=True)
class Instruction:
    address: int
    mnemonic: str
    operands: tuple[str, ...] = ()
    annotation: Optional[str] = None
    size: int = 0

    def __post_init__(self):
        if self.address < 0:
            raise InvalidFunction(f"negative address {self.address}")
        if not self.mnemonic:
            raise InvalidFunction(f"empty mnemonic at {self.address:#x}")
        if not isinstance(self.operands, tuple):
            object.__setattr__(self, "operands", tuple(self.operands))

    @property
    def end(self) -> int:
        return self.address + self.size

    def text(self) -> str:
        """``mnemonic operands`` with AT&T comma joining, no address."""
        if not self.operands:
            return self.mnemonic
        return f"{self.mnemonic} {','.join(self.operands)}"

    def render(self) -> str:
        line = f"{self.address:x}: {self.text()}"
        if self.annotation:
            line += f" # {self.annotation}"
        return line


@dataclass(frozen=True)
class Function:
    name: str
    entry: int
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        if not isinstance(self.instructions, tuple):
            object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise EmptyFunction(self.name)
        if self.instructions[0].address != self.entry:
            raise InvalidFunction(
                f"{self.name}: entry {self.entry:#x} is not the first instruction"
            )
        prev = None
        for ins in self.instructions:
            if prev is not None:
                if ins.address <= prev.address:
                    raise InvalidFunction(
                        f"{self.name}: addresses not strictly ascending at {ins.address:#x}"
                    )
                if prev.size and ins.address < prev.end:
                    raise InvalidFunction(
                        f"{self.name}: instruction at {prev.address:#x} overlaps {ins.address:#x}"
                    )
            prev = ins

    @property
    def last_address(self) -> int:
        return self.instructions[-1].address

    def contains(self, addr: int) -> bool:
        return self.entry <= addr <= self.last_address


def synthesize_name(entry: int) -> str:
    return f"sub_{entry:x}"


@dataclass(frozen=True)
class Section:
    name: str
    start: int
    data: bytes

    @property
    def end(self) -> int:
        return self.start + len(self.data)

    def __contains__(self, addr: int) -> bool:
        return self.start <= addr < self.end


@dataclass(frozen=True)
class DataImage:
    sections: tuple[Section, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.sections, tuple):
            object.__setattr__(self, "sections", tuple(self.sections))
        spans = sorted(self.sections, key=lambda s: s.start)
        for a, b in zip(spans, spans[1:]):
            if b.start < a.end:
                raise InvalidFunction(f"sections {a.name} and {b.name} overlap")

    def section_at(self, addr: int) -> Optional[Section]:
        for sec in self.sections:
            if addr in sec:
                return sec
        return None


# Listing parsing --------------------------------------------------------

_HEADER = re.compile(r"^([0-9a-fA-F]+) <([^>]+)>:$")
_INSN = re.compile(r"^\s*(?:0x)?([0-9a-fA-F]+):\s*(.*)$")
_SECTION = re.compile(r"^SECTION\s+(\.\S+)\s+@\s*(?:0x)?([0-9a-fA-F]+):$")
_BYTE = re.compile(r"^[0-9a-fA-F]{2}$")
_SYMBOL_HINT = re.compile(r"\s*<[^<>]*>$")
_IGNORABLE = (
    re.compile(r"^\S.*:\s+file format \S+$"),
    re.compile(r"^Disassembly of section \S+:$"),
    re.compile(r"^\s*\.\.\.$"),
)


def split_operands(text: str) -> tuple[str, ...]:
    """Split operand text on top-level commas (commas inside parens stay)."""
    text = text.strip()
    if not text:
        return ()
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(depth - 1, 0)
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return tuple(out)


def _parse_body(body: str) -> tuple[int, Optional[str], str]:
    """Return (byte count, mnemonic or None for a bytes-only line, operand text)."""
    if "\t" in body:
        head, _, rest = body.partition("\t")
        head_toks = head.split()
        if head_toks and all(_BYTE.match(t) for t in head_toks):
            toks = rest.strip().split(None, 1)
            if not toks:
                return len(head_toks), None, ""
            return len(head_toks), toks[0], toks[1] if len(toks) > 1 else ""
        body = body.replace("\t", " ")
    toks = body.split()
    if not toks:
        return 0, None, ""
    if all(_BYTE.match(t) for t in toks):
        return len(toks), None, ""
    nbytes = 0
    while _BYTE.match(toks[nbytes]):
        nbytes += 1
    return nbytes, toks[nbytes], " ".join(toks[nbytes + 1 :])


def _clean_operands(text: str) -> str:
    if "#" in text:
        text = text.split("#", 1)[0]
    text = text.strip()
    return _SYMBOL_HINT.sub("", text)


@dataclass
class _Pending:
    name: str
    line_no: int
    rows: list = field(default_factory=list)  # [address, mnemonic, operands, size]


def parse_listing(text: str) -> tuple[list[Function], DataImage]:
    functions: list[Function] = []
    sections: list[Section] = []
    current: Optional[_Pending] = None
    section: Optional[tuple[str, int, bytearray]] = None

    def close_function():
        nonlocal current
        if current is None:
            return
        if not current.rows:
            raise EmptyFunction(current.name)
        seen = set()
        for row in current.rows:
            if row[0] in seen:
                raise DuplicateAddress(row[0])
            seen.add(row[0])
        rows = sorted(current.rows, key=lambda r: r[0])
        insns = tuple(
            Instruction(address=a, mnemonic=m, operands=split_operands(o), size=s)
            for a, m, o, s in rows
        )
        functions.append(Function(name=current.name, entry=insns[0].address, instructions=insns))
        current = None

    def close_section():
        nonlocal section
        if section is not None:
            name, start, data = section
            sections.append(Section(name, start, bytes(data)))
            section = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            close_section()
            continue
        if any(p.match(line) for p in _IGNORABLE):
            continue
        m = _SECTION.match(line.strip())
        if m:
            close_function()
            close_section()
            section = (m.group(1), int(m.group(2), 16), bytearray())
            continue
        if section is not None:
            toks = line.split()
            if all(_BYTE.match(t) for t in toks):
                section[2].extend(int(t, 16) for t in toks)
                continue
            close_section()
        m = _HEADER.match(line.strip())
        if m:
            close_function()
            current = _Pending(name=m.group(2), line_no=line_no)
            continue
        m = _INSN.match(line)
        if m and current is not None:
            addr = int(m.group(1), 16)
            nbytes, mnemonic, operands = _parse_body(m.group(2))
            if mnemonic is None:
                if nbytes and current.rows:
                    current.rows[-1][3] += nbytes
                    continue
                raise MalformedLine(line_no, raw)
            if not re.match(r"^[a-z(][a-z0-9_.()]*$", mnemonic.lower()):
                raise MalformedLine(line_no, raw)
            current.rows.append([addr, mnemonic.lower(), _clean_operands(operands), nbytes])
            continue
        raise MalformedLine(line_no, raw)

    close_function()
    close_section()
    return functions, DataImage(tuple(sections))


def format_listing(functions: Iterable[Function], data: Optional[DataImage] = None) -> str:
    out: list[str] = []
    for fn in functions:
        out.append(f"{fn.entry:016x} <{fn.name}>:")
        for ins in fn.instructions:
            if ins.size:
                # sized instructions keep a placeholder bytes column so size round-trips
                byte_col = " ".join(["00"] * ins.size)
                out.append(f"    {ins.address:x}:\t{byte_col}\t{ins.text()}".rstrip())
            else:
                out.append(f"    {ins.address:x}:\t{ins.text()}".rstrip())
        out.append("")
    if data is not None:
        for sec in data.sections:
            out.append(f"SECTION {sec.name} @ {sec.start:x}:")
            for i in range(0, len(sec.data), 16):
                out.append(" ".join(f"{b:02x}" for b in sec.data[i : i + 16]))
            out.append("")
    return "\n".join(out)


# objdump -s adapter -------------------------------------------------------

_CONTENTS = re.compile(r"^Contents of section (\S+):$")


def parse_objdump_contents(text: str, keep: Sequence[str] = (".data", ".rodata")) -> DataImage:
    """Build a DataImage from ``objdump -s`` output, keeping data-like sections."""
    sections = []
    name, start, buf = None, None, bytearray()

    def flush():
        if name is not None and _is_data_section(name, keep):
            sections.append(Section(name, start, bytes(buf)))

    for line in text.splitlines():
        m = _CONTENTS.match(line.strip())
        if m:
            flush()
            name, start, buf = m.group(1), None, bytearray()
            continue
        if name is None or not line.startswith(" "):
            continue
        parts = line[1:].split(" ", 1)
        try:
            addr = int(parts[0], 16)
        except ValueError:
            continue
        if start is None:
            start = addr
        hexcols = parts[1][:35] if len(parts) > 1 else ""
        for group in hexcols.split():
            buf.extend(bytes.fromhex(group))
    flush()
    return DataImage(tuple(s for s in sections if s.start is not None))


def _is_data_section(name: str, keep: Sequence[str]) -> bool:
    return any(name == k or name.startswith(k + ".") for k in keep)


# Canonical JSON -----------------------------------------------------------


def function_to_obj(fn: Function) -> dict[str, Any]:
    insns = []
    for ins in fn.instructions:
        item: dict[str, Any] = {
            "address": ins.address,
            "mnemonic": ins.mnemonic,
            "operands": list(ins.operands),
            "size": ins.size,
        }
        if ins.annotation is not None:
            item["annotation"] = ins.annotation
        insns.append(item)
    return {"name": fn.name, "entry": fn.entry, "instructions": insns}


def dump_function_json(fn: Function) -> str:
    return json.dumps(function_to_obj(fn), indent=2) + "\n"


def _need(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise SchemaViolation(path, "missing")
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise SchemaViolation(path, "expected integer")
    if kind is not int and not isinstance(val, kind):
        raise SchemaViolation(path, f"expected {kind.__name__}")
    return val


def function_from_obj(obj: Any, prefix: str = "") -> Function:
    if not isinstance(obj, dict):
        raise SchemaViolation(prefix or "$", "expected object")
    name = _need(obj, "name", str, prefix + "name")
    entry = _need(obj, "entry", int, prefix + "entry")
    raw = _need(obj, "instructions", list, prefix + "instructions")
    insns = []
    for i, item in enumerate(raw):
        p = f"{prefix}instructions[{i}]"
        if not isinstance(item, dict):
            raise SchemaViolation(p, "expected object")
        addr = _need(item, "address", int, p + ".address")
        if addr < 0:
            raise SchemaViolation(p + ".address", "negative")
        mnem = _need(item, "mnemonic", str, p + ".mnemonic")
        if not mnem:
            raise SchemaViolation(p + ".mnemonic", "empty")
        ops = _need(item, "operands", list, p + ".operands")
        for j, op in enumerate(ops):
            if not isinstance(op, str):
                raise SchemaViolation(f"{p}.operands[{j}]", "expected string")
        size = item.get("size", 0)
        if not isinstance(size, int) or isinstance(size, bool) or size < 0:
            raise SchemaViolation(p + ".size", "expected non-negative integer")
        ann = item.get("annotation")
        if ann is not None and not isinstance(ann, str):
            raise SchemaViolation(p + ".annotation", "expected string")
        insns.append(Instruction(addr, mnem, tuple(ops), ann, size))
    if not insns:
        raise SchemaViolation(prefix + "instructions", "empty")
    try:
        return Function(name=name, entry=entry, instructions=tuple(insns))
    except InvalidFunction as exc:
        raise SchemaViolation(prefix + "instructions", str(exc)) from exc


def parse_function_json(text: str) -> Function:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"invalid JSON: {exc}") from exc
    return function_from_obj(obj)


def data_to_obj(data: DataImage) -> list[dict[str, Any]]:
    return [{"name": s.name, "start": s.start, "bytes": s.data.hex()} for s in data.sections]


def data_from_obj(raw: Any, prefix: str = "sections") -> DataImage:
    if not isinstance(raw, list):
        raise SchemaViolation(prefix, "expected list")
    secs = []
    for i, item in enumerate(raw):
        p = f"{prefix}[{i}]"
        if not isinstance(item, dict):
            raise SchemaViolation(p, "expected object")
        name = _need(item, "name", str, p + ".name")
        start = _need(item, "start", int, p + ".start")
        hexdata = _need(item, "bytes", str, p + ".bytes")
        try:
            secs.append(Section(name, start, bytes.fromhex(hexdata)))
        except ValueError as exc:
            raise SchemaViolation(p + ".bytes", "not hex") from exc
    return DataImage(tuple(secs))


def dump_module_json(functions: Sequence[Function], data: DataImage) -> str:
    obj = {
        "functions": [function_to_obj(f) for f in functions],
        "sections": data_to_obj(data),
    }
    return json.dumps(obj, indent=2) + "\n"


def load_module(text: str) -> tuple[list[Function], DataImage]:
    """Accept a module JSON, a single-function JSON, or a listing."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation("$", f"invalid JSON: {exc}") from exc
        if isinstance(obj, dict) and "functions" in obj:
            raw = obj["functions"]
            if not isinstance(raw, list):
                raise SchemaViolation("functions", "expected list")
            fns = [function_from_obj(f, f"functions[{i}].") for i, f in enumerate(raw)]
            return fns, data_from_obj(obj.get("sections", []))
        return [function_from_obj(obj)], DataImage()
    return parse_listing(text)

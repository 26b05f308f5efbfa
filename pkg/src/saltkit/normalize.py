"""Instruction normalization: entry-relative jump labels and data annotations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .cfg import BRANCH, CALL, INDIRECT, JUMP, classify_terminator
from .ingest import DataImage, Function, Instruction

HEX_CAP = 16
DATA_SECTIONS = (".data", ".rodata")

_RIP = re.compile(r"^(-?)(?:0x)?([0-9a-fA-F]+)\(%rip\)$")
_ABS_MEM = re.compile(r"^(?:%[a-z]s:)?(-?)0x([0-9a-fA-F]+)(?:\(,%[a-z0-9]+,[1248]\))?$")
_IMM = re.compile(r"^\$0x([0-9a-fA-F]+)$")
_PRINTABLE = set(range(0x20, 0x7F)) | {0x09, 0x0A, 0x0D}
_ESCAPES = {0x09: "\\t", 0x0A: "\\n", 0x0D: "\\r", 0x22: '\\"', 0x5C: "\\\\"}


@dataclass(frozen=True)
class NormalizedFunction:
    base: Function
    offset_map: dict = field(default_factory=dict)
    diagnostics: tuple[str, ...] = ()

    def label_at(self, addr: int) -> Optional[str]:
        return self.offset_map.get(addr)


def relative_label(target: int, entry: int) -> str:
    return f"L_0x{target - entry:X}"


def _as_function(f: Union[Function, NormalizedFunction]) -> tuple[Function, dict, tuple]:
    if isinstance(f, NormalizedFunction):
        return f.base, dict(f.offset_map), f.diagnostics
    return f, {}, ()


def normalize_jumps(f: Union[Function, NormalizedFunction]) -> NormalizedFunction:
    fn, offsets, diags = _as_function(f)
    out = []
    for ins in fn.instructions:
        term = classify_terminator(ins, fn.entry)
        if term.kind in (JUMP, BRANCH) and fn.contains(term.target):
            label = relative_label(term.target, fn.entry)
            offsets[term.target] = label
            # operand position is the last one; prefixes ("bnd jmp X") keep their text
            ops = list(ins.operands)
            head, sep, last = ops[-1].rpartition(" ")
            ops[-1] = f"{head}{sep}{label}"
            ins = replace(ins, operands=tuple(ops))
        out.append(ins)
    return NormalizedFunction(replace(fn, instructions=tuple(out)), offsets, diags)


def render_bytes(data: bytes) -> str:
    """Render referenced data: a quoted string when it looks like one, else hex bytes."""
    nul = data.find(0)
    if nul >= 2 and all(b in _PRINTABLE for b in data[:nul]):
        body = "".join(_ESCAPES.get(b, chr(b)) for b in data[:nul])
        return f'"{body}"'
    return " ".join(f"0x{b:02x}" for b in data[:HEX_CAP])


def extract_at(d: DataImage, addr: int) -> Optional[str]:
    sec = d.section_at(addr)
    if sec is None or not any(sec.name == s or sec.name.startswith(s + ".") for s in DATA_SECTIONS):
        return None
    return render_bytes(sec.data[addr - sec.start :])


def referenced_addresses(ins: Instruction, next_addr: Optional[int]) -> tuple[list[int], list[str]]:
    """Literal data addresses an instruction refers to, plus diagnostics."""
    addrs, diags = [], []
    for op in ins.operands:
        m = _RIP.match(op)
        if m:
            if next_addr is None:
                diags.append(f"rip-relative operand at {ins.address:#x} skipped: size unknown")
                continue
            off = int(m.group(2), 16)
            addrs.append(next_addr - off if m.group(1) else next_addr + off)
            continue
        m = _ABS_MEM.match(op)
        if m:
            if not m.group(1):
                addrs.append(int(m.group(2), 16))
            continue
        m = _IMM.match(op)
        if m:
            addrs.append(int(m.group(1), 16))
    return addrs, diags


def annotate_data_refs(f: Union[Function, NormalizedFunction], d: DataImage) -> NormalizedFunction:
    fn, offsets, diags = _as_function(f)
    diags = list(diags)
    out = []
    for ins in fn.instructions:
        if classify_terminator(ins, fn.entry).kind in (JUMP, BRANCH, CALL, INDIRECT):
            out.append(ins)
            continue
        next_addr = ins.end if ins.size else None
        addrs, why = referenced_addresses(ins, next_addr)
        diags.extend(why)
        values = [v for v in (extract_at(d, a) for a in addrs) if v is not None]
        if values:
            ins = replace(ins, annotation=", ".join(values))
        out.append(ins)
    return NormalizedFunction(replace(fn, instructions=tuple(out)), offsets, tuple(diags))


def normalize(f: Function, d: Optional[DataImage] = None) -> NormalizedFunction:
    nf = normalize_jumps(f)
    if d is not None:
        nf = annotate_data_refs(nf, d)
    return nf

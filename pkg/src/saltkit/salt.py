"""Source-level Abstract Logic Tree construction, serialization and prompting.

A SALT is a tree of logic blocks. The root holds the function body; every
recovered loop becomes a child block named ``<<LOOP_k>>`` and leaves a
marker line of the same name in its parent where the loop sits.

Text grammar::

    <<FUNC name>>:
    L_0x1C:
    1145: mov %eax,%edx # "2357BD"
    <<LOOP_0>>

    <<LOOP_0>>:
    ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .cfg import Cfg, build_cfg
from .ingest import DataImage, Function
from .loops import LoopForest, LoopStructure, detect_loops
from .normalize import NormalizedFunction, normalize
from .prompts import get_prompt

DEFAULT_TOKEN_BUDGET = 4096
MARKER = re.compile(r"^<<LOOP_([0-9]+)>>$")


class PromptTooLong(ValueError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"prompt needs ~{estimate} tokens, budget is {budget}")
        self.estimate = estimate
        self.budget = budget


class SaltSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Ins:
    address: int
    text: str
    annotation: Optional[str] = None
    label: Optional[str] = None

    def lines(self) -> list[str]:
        out = [f"{self.label}:"] if self.label else []
        line = f"{self.address:x}: {self.text}"
        if self.annotation:
            line += f" # {self.annotation}"
        out.append(line)
        return out


@dataclass(frozen=True)
class Marker:
    name: str

    def __post_init__(self):
        if not MARKER.match(self.name):
            raise ValueError(f"bad marker name {self.name!r}")


LogicItem = Union[Ins, Marker]


@dataclass(frozen=True)
class LogicBlock:
    name: str
    items: tuple = ()
    children: tuple = ()

    def walk(self):
        """Pre-order over this block and its descendants."""
        yield self
        for c in self.children:
            yield from c.walk()

    def addresses(self) -> list[int]:
        return [it.address for it in self.items if isinstance(it, Ins)]


@dataclass(frozen=True)
class Salt:
    root: LogicBlock
    marker_count: int
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def all_addresses(self) -> list[int]:
        return [a for b in self.root.walk() for a in b.addresses()]


# Construction -------------------------------------------------------------


@dataclass
class _Block:
    name: str
    items: list = field(default_factory=list)  # (sort key, item)
    children: list = field(default_factory=list)

    def freeze(self) -> LogicBlock:
        items = tuple(it for _, it in sorted(self.items, key=lambda p: p[0]))
        return LogicBlock(self.name, items, tuple(c.freeze() for c in self.children))


@dataclass
class _Frame:
    loop: Optional[LoopStructure]
    block: _Block
    exits: list = field(default_factory=list)


def construct_salt(g: Cfg, ls: LoopForest, f: Union[NormalizedFunction, Function]) -> Salt:
    nf = f if isinstance(f, NormalizedFunction) else NormalizedFunction(f)
    by_addr = {ins.address: ins for ins in nf.base.instructions}
    root = _Block(nf.base.name)
    entered: set[int] = set()
    visited: set[int] = set()
    emitted: set[int] = set()
    counter = 0

    def child_loop(parent: Optional[LoopStructure], b: int) -> Optional[LoopStructure]:
        pool = ls.roots if parent is None else parent.children
        for lid in pool:
            if b in ls[lid].members:
                return ls[lid]
        return None

    def emit(b: int, into: _Block) -> None:
        for raw in g.blocks[b].instructions:
            if raw.address in emitted:
                continue
            emitted.add(raw.address)
            ins = by_addr[raw.address]
            item = Ins(ins.address, ins.text(), ins.annotation, nf.label_at(ins.address))
            into.items.append((ins.address, item))

    # Explicit stack keeps deep CFGs off the interpreter's recursion limit.
    # ("visit", block, frame) places one block; ("exits", inner, outer) resumes
    # the enclosing frame once a loop has been fully traversed.
    def run(start: int, frame: _Frame) -> None:
        nonlocal counter
        stack: list[tuple] = [("visit", start, frame)]
        while stack:
            task = stack.pop()
            if task[0] == "exits":
                _, inner, outer = task
                stack.extend(("visit", e, outer) for e in reversed(inner.exits))
                continue
            _, b, fr = task
            if fr.loop is not None and b not in fr.loop.members:
                if b not in fr.exits:
                    fr.exits.append(b)
                continue
            if b in visited:
                continue
            lp = child_loop(fr.loop, b)
            if lp is not None and lp.id not in entered:
                entered.add(lp.id)
                name = f"<<LOOP_{counter}>>"
                counter += 1
                child = _Block(name)
                fr.block.children.append(child)
                fr.block.items.append((g.blocks[lp.header].start, Marker(name)))
                inner = _Frame(lp, child)
                stack.append(("exits", inner, fr))
                stack.append(("visit", b, inner))
                continue
            visited.add(b)
            emit(b, fr.block)
            # A call-terminated block flows into its return site within the same
            # logic block (node merging); loop entry still applies if that site heads a loop.
            stack.extend(("visit", s, fr) for s in reversed(g.successors(b)))

    run(g.entry, _Frame(None, root))
    reached = set(emitted)
    for b in range(len(g.blocks)):
        if b not in visited:
            run(b, _Frame(None, root))
    residue = sorted(emitted - reached)
    diags = list(g.diagnostics) + list(ls.diagnostics) + list(nf.diagnostics)
    if residue:
        diags.append("UnreachableResidue(" + ", ".join(f"{a:#x}" for a in residue) + ")")
    return Salt(root.freeze(), counter, tuple(diags))


def salt_of(f: Function, data: Optional[DataImage] = None) -> Salt:
    """Whole pure chain for one function: cfg, normalize, loops, salt."""
    g = build_cfg(f)
    return construct_salt(g, detect_loops(g), normalize(f, data))


# Serialization ------------------------------------------------------------


def serialize_salt(s: Salt) -> str:
    out: list[str] = []
    for i, block in enumerate(s.root.walk()):
        if i:
            out.append("")
            out.append(f"{block.name}:")
        else:
            out.append(f"<<FUNC {block.name}>>:")
        for it in block.items:
            if isinstance(it, Marker):
                out.append(it.name)
            else:
                out.extend(it.lines())
    return "\n".join(out)


_FUNC_HDR = re.compile(r"^<<FUNC (.+)>>:$")
_LOOP_HDR = re.compile(r"^(<<LOOP_[0-9]+>>):$")
_LABEL = re.compile(r"^(L_0x[0-9A-F]+):$")
_INS = re.compile(r"^([0-9a-f]+): (.+?)(?: # (.*))?$")


def parse_salt(text: str) -> Salt:
    lines = text.split("\n")
    if not lines or not _FUNC_HDR.match(lines[0]):
        raise SaltSyntaxError("missing <<FUNC name>>: header")
    blocks: dict[str, dict] = {}
    order: list[str] = []
    current = None
    label = None
    for n, line in enumerate(lines, start=1):
        if not line:
            continue
        m = _FUNC_HDR.match(line) if n == 1 else None
        m = m or _LOOP_HDR.match(line)
        if m:
            if label:
                raise SaltSyntaxError(f"line {n}: dangling label {label}")
            name = m.group(1)
            if name in blocks:
                raise SaltSyntaxError(f"line {n}: block {name} defined twice")
            current = blocks.setdefault(name, {"items": [], "markers": []})
            order.append(name)
            continue
        if MARKER.match(line):
            current["items"].append(Marker(line))
            current["markers"].append(line)
            continue
        m = _LABEL.match(line)
        if m:
            label = m.group(1)
            continue
        m = _INS.match(line)
        if not m:
            raise SaltSyntaxError(f"line {n}: cannot parse {line!r}")
        current["items"].append(Ins(int(m.group(1), 16), m.group(2), m.group(3), label))
        label = None

    def build(name: str, seen: set) -> LogicBlock:
        if name in seen:
            raise SaltSyntaxError(f"block {name} referenced twice")
        seen.add(name)
        blk = blocks.get(name)
        if blk is None:
            raise SaltSyntaxError(f"marker {name} has no block")
        kids = sorted(blk["markers"], key=lambda k: int(MARKER.match(k).group(1)))
        return LogicBlock(name, tuple(blk["items"]), tuple(build(k, seen) for k in kids))

    seen: set = set()
    root = build(order[0], seen)
    if len(seen) != len(order):
        raise SaltSyntaxError("blocks without a marker: " + ", ".join(b for b in order if b not in seen))
    return Salt(root, len(order) - 1)


# Prompting ------------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z]+|[0-9]+|[^\sA-Za-z0-9]")


def estimate_tokens(text: str) -> int:
    """Cheap tokenizer-free estimate: letter runs, digit runs and symbols."""
    return len(_TOKEN.findall(text))


def render_prompt(
    s: Union[Salt, str],
    budget: Optional[int] = DEFAULT_TOKEN_BUDGET,
    estimator: Callable[[str], int] = estimate_tokens,
    template_dir: Optional[str] = None,
) -> str:
    text = s if isinstance(s, str) else serialize_salt(s)
    prompt = get_prompt("decompile", {"salt": text}, template_dir)
    if budget is not None:
        est = estimator(prompt)
        if est > budget:
            raise PromptTooLong(est, budget)
    return prompt

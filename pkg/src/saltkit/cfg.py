"""Basic-block partitioning and control-flow graph construction."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .ingest import Function, Instruction

FALLTHROUGH = "fallthrough"
JUMP = "jump"
BRANCH = "branch"
CALL = "call"
RET = "ret"
INDIRECT = "indirect"

# edge kinds
TAKEN = "taken"
CALL_RETURN = "call-return"

CONDITIONAL_JUMPS = frozenset(
    """
    je jne jz jnz jl jg jle jge ja jb jae jbe js jns jo jno jp jnp jc jnc
    jpe jpo jnae jnb jna jnbe jnge jnl jng jnle jcxz jecxz jrcxz
    loop loope loopne loopz loopnz
    """.split()
)
PREFIXES = frozenset(
    "bnd notrack rep repz repe repnz repne lock cs ds es ss fs gs data16 addr32".split()
)
_RET = frozenset({"ret", "retq", "retl", "retn", "retw"})
_JMP = frozenset({"jmp", "jmpq", "jmpl", "jmpw"})
_CALL = frozenset({"call", "callq", "calll", "callw"})

_LITERAL = re.compile(r"^(?:0x)?([0-9a-fA-F]+)$")
_LABEL = re.compile(r"^L_0x([0-9A-F]+)$")


class DanglingTarget(ValueError):
    def __init__(self, addr: int):
        super().__init__(f"jump target {addr:#x} is inside the function but not an instruction")
        self.addr = addr


@dataclass(frozen=True)
class Terminator:
    kind: str
    target: Optional[int] = None


def _strip_prefixes(ins: Instruction) -> tuple[str, tuple[str, ...]]:
    mnem, ops = ins.mnemonic, ins.operands
    while mnem in PREFIXES and ops:
        head, _, rest = ops[0].partition(" ")
        mnem = head.lower()
        ops = ((rest,) if rest else ()) + ops[1:]
    return mnem, ops


def literal_target(operand: str, entry: Optional[int] = None) -> Optional[int]:
    """Resolve a literal code address: ``0x1180``, bare hex ``1180``, or ``L_0x1C``."""
    operand = operand.strip()
    m = _LABEL.match(operand)
    if m:
        return None if entry is None else entry + int(m.group(1), 16)
    m = _LITERAL.match(operand)
    if m:
        return int(m.group(1), 16)
    return None


def classify_terminator(ins: Instruction, entry: Optional[int] = None) -> Terminator:
    mnem, ops = _strip_prefixes(ins)
    if mnem in _RET:
        return Terminator(RET)
    if mnem in _CALL:
        target = literal_target(ops[0], entry) if ops else None
        return Terminator(CALL, target)
    if mnem in _JMP or mnem in CONDITIONAL_JUMPS:
        target = literal_target(ops[0], entry) if len(ops) == 1 else None
        if target is None:
            return Terminator(INDIRECT)
        return Terminator(JUMP if mnem in _JMP else BRANCH, target)
    return Terminator(FALLTHROUGH)


@dataclass(frozen=True)
class BasicBlock:
    id: int
    start: int
    instructions: tuple[Instruction, ...]
    terminator: Terminator

    @property
    def last(self) -> Instruction:
        return self.instructions[-1]

    @property
    def addresses(self) -> tuple[int, ...]:
        return tuple(i.address for i in self.instructions)


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: str


@dataclass(frozen=True)
class Cfg:
    blocks: tuple[BasicBlock, ...]
    edges: tuple[Edge, ...]
    entry: int = 0
    unreachable: tuple[int, ...] = ()
    diagnostics: tuple[str, ...] = ()
    _succ: dict = field(default_factory=dict, compare=False, repr=False)
    _pred: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ids = {b.id for b in self.blocks}
        for e in self.edges:
            if e.src not in ids or e.dst not in ids:
                raise ValueError(f"edge {e} references a missing block")
        succ = {b.id: [] for b in self.blocks}
        pred = {b.id: [] for b in self.blocks}
        for e in self.edges:
            if e.dst not in succ[e.src]:
                succ[e.src].append(e.dst)
            if e.src not in pred[e.dst]:
                pred[e.dst].append(e.src)
        start = {b.id: b.start for b in self.blocks}
        for k in succ:
            succ[k].sort(key=start.__getitem__)
            pred[k].sort(key=start.__getitem__)
        self._succ.update(succ)
        self._pred.update(pred)

    def block(self, bid: int) -> BasicBlock:
        return self.blocks[bid]

    def successors(self, bid: int) -> list[int]:
        """Distinct successors in ascending start-address order."""
        return self._succ[bid]

    def predecessors(self, bid: int) -> list[int]:
        return self._pred[bid]

    def to_dot(self, name: str = "cfg") -> str:
        lines = [f'digraph "{name}" {{', "  node [shape=box, fontname=monospace];"]
        for b in self.blocks:
            body = "\\l".join(i.render().replace('"', '\\"') for i in b.instructions)
            style = ", style=dashed" if b.id in self.unreachable else ""
            lines.append(f'  b{b.id} [label="{b.start:#x}\\l{body}\\l"{style}];')
        for e in self.edges:
            lines.append(f'  b{e.src} -> b{e.dst} [label="{e.kind}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _reachable(n: int, entry: int, succ: dict[int, list[int]]) -> set[int]:
    seen = {entry}
    todo = deque([entry])
    while todo:
        u = todo.popleft()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def build_cfg(f: Function) -> Cfg:
    insns = f.instructions
    index_of = {ins.address: i for i, ins in enumerate(insns)}
    terms = [classify_terminator(ins, f.entry) for ins in insns]
    diagnostics = []

    leaders = {0}
    for i, t in enumerate(terms):
        if t.kind in (JUMP, BRANCH) and f.contains(t.target):
            if t.target not in index_of:
                raise DanglingTarget(t.target)
            leaders.add(index_of[t.target])
        if t.kind != FALLTHROUGH and i + 1 < len(insns):
            leaders.add(i + 1)
        if t.kind == INDIRECT:
            diagnostics.append(f"indirect transfer at {insns[i].address:#x} has no resolved successors")

    starts = sorted(leaders)
    blocks = []
    block_of_insn = {}
    for bid, lo in enumerate(starts):
        hi = starts[bid + 1] if bid + 1 < len(starts) else len(insns)
        for k in range(lo, hi):
            block_of_insn[k] = bid
        blocks.append(
            BasicBlock(id=bid, start=insns[lo].address, instructions=insns[lo:hi], terminator=terms[hi - 1])
        )

    edges = []
    for b in blocks:
        nxt = b.id + 1 if b.id + 1 < len(blocks) else None
        t = b.terminator
        internal = t.target is not None and f.contains(t.target)
        if t.kind in (JUMP, BRANCH) and internal:
            edges.append(Edge(b.id, block_of_insn[index_of[t.target]], TAKEN))
        if t.kind in (BRANCH, FALLTHROUGH) and nxt is not None:
            edges.append(Edge(b.id, nxt, FALLTHROUGH))
        elif t.kind == CALL and nxt is not None:
            edges.append(Edge(b.id, nxt, CALL_RETURN))

    succ: dict[int, list[int]] = {}
    for e in edges:
        succ.setdefault(e.src, []).append(e.dst)
    seen = _reachable(len(blocks), 0, succ)
    unreachable = tuple(b.id for b in blocks if b.id not in seen)
    for bid in unreachable:
        diagnostics.append(f"block {bid} at {blocks[bid].start:#x} is unreachable from entry")
    return Cfg(
        blocks=tuple(blocks),
        edges=tuple(edges),
        entry=0,
        unreachable=unreachable,
        diagnostics=tuple(diagnostics),
    )


def cfg_from_edges(n: int, edges: list[tuple[int, int]], entry: int = 0) -> Cfg:
    """Synthetic Cfg over ``n`` single-instruction blocks (for analyses and tests).

    Block ``i`` is placed at address ``0x1000 + 4*i`` and holds one ``nop``.
    """
    blocks = tuple(
        BasicBlock(
            id=i,
            start=0x1000 + 4 * i,
            instructions=(Instruction(0x1000 + 4 * i, "nop", (), None, 4),),
            terminator=Terminator(FALLTHROUGH),
        )
        for i in range(n)
    )
    es = tuple(Edge(u, v, TAKEN) for u, v in edges)
    succ: dict[int, list[int]] = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    seen = _reachable(n, entry, succ)
    return Cfg(blocks, es, entry, tuple(i for i in range(n) if i not in seen))

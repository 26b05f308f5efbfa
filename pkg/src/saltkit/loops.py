"""Loop nesting forest recovery from a Cfg.

Top-level loops are the non-trivial strongly connected components of the
graph. Inner loops are found by dropping the edges that re-enter a loop's
header and searching the member subgraph again.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .cfg import Cfg


@dataclass(frozen=True)
class LoopStructure:
    id: int
    header: int
    members: frozenset
    children: tuple[int, ...] = ()
    parent: Optional[int] = None


@dataclass(frozen=True)
class LoopForest:
    loops: tuple[LoopStructure, ...] = ()
    roots: tuple[int, ...] = ()
    diagnostics: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.loops)

    def __getitem__(self, loop_id: int) -> LoopStructure:
        return self.loops[loop_id]

    def innermost(self, block: int) -> Optional[LoopStructure]:
        best = None
        for lp in self.loops:
            if block in lp.members and (best is None or len(lp.members) < len(best.members)):
                best = lp
        return best

    def by_header(self) -> dict[int, LoopStructure]:
        return {lp.header: lp for lp in self.loops}

    def to_json(self) -> str:
        obj = {
            "roots": list(self.roots),
            "loops": [
                {
                    "id": lp.id,
                    "header": lp.header,
                    "members": sorted(lp.members),
                    "children": list(lp.children),
                    "parent": lp.parent,
                }
                for lp in self.loops
            ],
            "diagnostics": list(self.diagnostics),
        }
        return json.dumps(obj, indent=2) + "\n"


def strongly_connected(nodes: Iterable[int], succ: Callable[[int], Iterable[int]]) -> list[list[int]]:
    """Iterative Tarjan. Components come out in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def _reverse_postorder(g: Cfg) -> list[int]:
    seen = {g.entry}
    order = []
    work = [(g.entry, iter(g.successors(g.entry)))]
    while work:
        v, it = work[-1]
        for w in it:
            if w not in seen:
                seen.add(w)
                work.append((w, iter(g.successors(w))))
                break
        else:
            work.pop()
            order.append(v)
    return order[::-1]


def immediate_dominators(g: Cfg) -> dict[int, int]:
    """Cooper/Harvey/Kennedy iterative dominators over blocks reachable from entry."""
    rpo = _reverse_postorder(g)
    pos = {b: i for i, b in enumerate(rpo)}
    idom = {g.entry: g.entry}

    def intersect(a: int, b: int) -> int:
        while a != b:
            while pos[a] > pos[b]:
                a = idom[a]
            while pos[b] > pos[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for b in rpo[1:]:
            preds = [p for p in g.predecessors(b) if p in idom]
            new = preds[0]
            for p in preds[1:]:
                new = intersect(p, new)
            if idom.get(b) != new:
                idom[b] = new
                changed = True
    return idom


def dominates(idom: dict[int, int], a: int, b: int) -> bool:
    if b not in idom:
        return False
    while True:
        if a == b:
            return True
        nxt = idom[b]
        if nxt == b:
            return False
        b = nxt


def back_edges(g: Cfg) -> list[tuple[int, int]]:
    idom = immediate_dominators(g)
    out = []
    for u in range(len(g.blocks)):
        for v in g.successors(u):
            if u in idom and dominates(idom, v, u):
                out.append((u, v))
    return out


def _distances(g: Cfg) -> dict[int, int]:
    dist = {g.entry: 0}
    todo = deque([g.entry])
    while todo:
        u = todo.popleft()
        for v in g.successors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                todo.append(v)
    return dist


def choose_header(g: Cfg, members: frozenset, dist: dict[int, int]) -> tuple[int, bool]:
    """Pick the loop header; the flag reports a multi-entry (irreducible) region."""
    start = lambda b: g.blocks[b].start  # noqa: E731
    entries = sorted(
        (b for b in members if b == g.entry or any(p not in members for p in g.predecessors(b))),
        key=start,
    )
    if entries:
        return entries[0], len(entries) > 1
    far = len(g.blocks) + 1
    return min(members, key=lambda b: (dist.get(b, far), start(b))), False


def detect_loops(g: Cfg) -> LoopForest:
    dist = _distances(g)
    staged: list[tuple[int, frozenset, Optional[int], bool]] = []

    def search(nodes: frozenset, parent: Optional[int], cut_header: Optional[int]) -> None:
        def succ(u: int) -> list[int]:
            return [v for v in g.successors(u) if v in nodes and v != cut_header]

        order = sorted(nodes, key=lambda b: g.blocks[b].start)
        for comp in strongly_connected(order, succ):
            if len(comp) == 1 and comp[0] not in succ(comp[0]):
                continue
            members = frozenset(comp)
            header, multi = choose_header(g, members, dist)
            me = len(staged)
            staged.append((header, members, parent, multi))
            search(members, me, header)

    search(frozenset(range(len(g.blocks))), None, None)

    order = sorted(range(len(staged)), key=lambda i: g.blocks[staged[i][0]].start)
    new_id = {old: new for new, old in enumerate(order)}
    children: dict[int, list[int]] = {i: [] for i in range(len(staged))}
    roots = []
    for old, (_, _, parent, _) in enumerate(staged):
        if parent is None:
            roots.append(new_id[old])
        else:
            children[new_id[parent]].append(new_id[old])
    loops = []
    diags = []
    for new, old in enumerate(order):
        header, members, parent, multi = staged[old]
        loops.append(
            LoopStructure(
                id=new,
                header=header,
                members=members,
                children=tuple(sorted(children[new])),
                parent=None if parent is None else new_id[parent],
            )
        )
        if multi:
            diags.append(f"MultiEntryLoop({new}): header chosen at block {header}")
    return LoopForest(tuple(loops), tuple(sorted(roots)), tuple(diags))

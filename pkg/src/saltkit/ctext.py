"""Lightweight C token scanning used by the dataset filters and fallback renamer.

This is not a C parser: it tokenizes well enough to find keywords at
statement position and declared identifiers in simple single-scope functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<pp>^[ \t]*\#(?:\\\n|[^\n])*)
  | (?P<str>"(?:\\.|[^"\\\n])*"|'(?:\\.|[^'\\\n])*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>\.?[0-9](?:[eEpP][+-]|[A-Za-z0-9_.])*)
  | (?P<punct>->|\+\+|--|<<=|>>=|<<|>>|<=|>=|==|!=|&&|\|\||[-+*/%&|^!~<>=]=?|[(){}\[\];,.?:])
  | (?P<other>.)
    """,
    re.X | re.S | re.M,
)

TYPE_WORDS = frozenset(
    """
    void char short int long float double signed unsigned _Bool bool const volatile
    static register auto extern size_t ssize_t ptrdiff_t intptr_t uintptr_t
    int8_t int16_t int32_t int64_t uint8_t uint16_t uint32_t uint64_t FILE
    """.split()
)
TAG_WORDS = frozenset({"struct", "union", "enum"})
KEYWORDS = frozenset(
    """
    if else for while do switch case default break continue return goto sizeof typedef
    inline restrict
    """.split()
) | TYPE_WORDS | TAG_WORDS
LOOP_WORDS = frozenset({"for", "while", "do"})
STATEMENT_BEFORE = frozenset({";", "{", "}", ")", ":", "else"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    line: int


def tokenize(src: str, keep_trivia: bool = False) -> Iterator[Token]:
    line = 0
    for m in _TOKEN.finditer(src):
        kind = m.lastgroup
        text = m.group()
        if keep_trivia or kind not in ("ws", "comment", "pp"):
            yield Token(kind, text, m.start(), m.end(), line)
        line += text.count("\n")


def count_loops(src: str) -> int:
    """Loop statements (for / while / do) at statement position; a do-while counts once."""
    toks = list(tokenize(src))
    count = 0
    brace_after_do: list[bool] = []
    closed_do = False
    bare_do_depth: list[int] = []
    prev: Optional[Token] = None
    for i, t in enumerate(toks):
        text = t.text
        at_stmt = prev is None or prev.text in STATEMENT_BEFORE
        if t.kind == "punct" and text == "{":
            brace_after_do.append(prev is not None and prev.text == "do")
        elif t.kind == "punct" and text == "}":
            closed_do = brace_after_do.pop() if brace_after_do else False
        elif t.kind == "ident" and text in LOOP_WORDS and at_stmt:
            if text == "while" and prev is not None and prev.text == "}" and closed_do:
                pass  # tail of do { ... } while (...)
            elif text == "while" and prev is not None and prev.text == ";" and bare_do_depth and bare_do_depth[-1] == len(brace_after_do):
                bare_do_depth.pop()
            else:
                count += 1
                if text == "do" and i + 1 < len(toks) and toks[i + 1].text != "{":
                    bare_do_depth.append(len(brace_after_do))
        if text != "}":
            closed_do = False
        prev = t
    return count


def body_start_line(src: str) -> Optional[int]:
    """0-based line of the first top-level ``{`` (end of the function definition)."""
    for t in tokenize(src):
        if t.text == "{":
            return t.line
    return None


def code_lines(src: str) -> set[int]:
    """Lines holding at least one token other than braces and semicolons."""
    return {t.line for t in tokenize(src) if t.text not in ("{", "}", ";")}


def _declarator_names(toks: list[Token], i: int, stop: set[str]) -> tuple[list[str], int]:
    """Names declared from ``toks[i]`` up to a token in ``stop`` at depth 0."""
    names = []
    depth = 0
    expect_name = True
    while i < len(toks):
        t = toks[i]
        if depth == 0 and t.text in stop:
            break
        if t.text in "([{":
            depth += 1
            if t.text == "(" and expect_name:
                # function-pointer declarator: (*name)
                depth -= 1
        elif t.text in ")]}":
            depth = max(depth - 1, 0)
        elif depth == 0 and t.text == "=":
            expect_name = False
        elif depth == 0 and t.text == ",":
            expect_name = True
        elif t.kind == "ident" and expect_name and t.text not in KEYWORDS:
            names.append(t.text)
            expect_name = False
        i += 1
    return names, i


def _type_prefix_end(toks: list[Token], i: int) -> Optional[int]:
    """If a declaration's type starts at ``toks[i]``, index of its first declarator token."""
    j = i
    saw_type = False
    while j < len(toks):
        t = toks[j]
        if t.kind != "ident":
            break
        if t.text in TAG_WORDS and j + 1 < len(toks) and toks[j + 1].kind == "ident":
            j += 2
            saw_type = True
            continue
        if t.text in TYPE_WORDS or (t.text.endswith("_t") and t.text not in KEYWORDS):
            j += 1
            saw_type = True
            continue
        break
    if not saw_type or j >= len(toks):
        return None
    nxt = toks[j]
    if nxt.kind == "ident" or nxt.text in ("*", "("):
        return j
    return None


def declared_names(src: str) -> tuple[Optional[str], list[str]]:
    """(function name, parameters and locals in declaration order)."""
    toks = list(tokenize(src))
    body = next((k for k, t in enumerate(toks) if t.text == "{"), None)
    if body is None:
        return None, []
    func = None
    open_paren = None
    for k in range(body - 1, -1, -1):
        if toks[k].text == "(" and k > 0 and toks[k - 1].kind == "ident":
            depth = 0
            for m in range(k, body):
                depth += toks[m].text == "("
                depth -= toks[m].text == ")"
            if depth == 0:
                open_paren, func = k, toks[k - 1].text
    names: list[str] = []
    seen: set[str] = set()

    def add(ns):
        for n in ns:
            if n not in seen and n != func:
                seen.add(n)
                names.append(n)

    if open_paren is not None:
        k = open_paren + 1
        depth = 1
        param_start = k
        while k < body and depth:
            t = toks[k]
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
            if (t.text == "," and depth == 1) or depth == 0:
                seg = toks[param_start:k]
                idents = [s for s in seg if s.kind == "ident" and s.text not in KEYWORDS]
                # the declared name is the last identifier that is not part of the type
                if idents and not (len(seg) == 1 and seg[0].text == "void"):
                    type_idents = [s for s in seg if s.kind == "ident"]
                    if len(type_idents) >= 2 or any(s.text in ("*", "[") for s in seg):
                        add([idents[-1].text])
                param_start = k + 1
            k += 1

    k = body + 1
    prev_text = "{"
    in_for_init = False
    while k < len(toks):
        t = toks[k]
        if (prev_text in (";", "{", "}") or in_for_init) and t.kind == "ident":
            j = _type_prefix_end(toks, k)
            if j is not None:
                found, k2 = _declarator_names(toks, j, {";"} if not in_for_init else {";", ")"})
                add(found)
                in_for_init = False
                prev_text = toks[k2].text if k2 < len(toks) else ";"
                k = k2 + 1
                continue
        in_for_init = prev_text == "for" and t.text == "("
        prev_text = t.text
        k += 1
    return func, names


def rename_variables(src: str, prefix: str = "var") -> str:
    """Sequentially rename parameters and locals to var1, var2, ...; drop comments and ``inline``."""
    func, names = declared_names(src)
    mapping = {n: f"{prefix}{i}" for i, n in enumerate(names, start=1)}
    out = []
    prev_sig = None
    toks = list(tokenize(src, keep_trivia=True))
    for idx, t in enumerate(toks):
        if t.kind == "comment":
            out.append("\n" * t.text.count("\n") or " ")
            continue
        if t.kind == "ident" and t.text == "inline":
            # swallow the following blank so "static inline int" -> "static int"
            if idx + 1 < len(toks) and toks[idx + 1].kind == "ws" and " " in toks[idx + 1].text:
                toks[idx + 1] = Token("ws", toks[idx + 1].text.replace(" ", "", 1), 0, 0, 0)
            continue
        if t.kind == "ident" and t.text in mapping and not (prev_sig and prev_sig.text in (".", "->")):
            out.append(mapping[t.text])
        else:
            out.append(t.text)
        if t.kind not in ("ws", "comment"):
            prev_sig = t
    # lines that only held a comment disappear instead of lingering as blanks
    kept = [
        new.rstrip()
        for old, new in zip(src.split("\n"), "".join(out).split("\n"))
        if new.strip() or not old.strip()
    ]
    return "\n".join(kept)

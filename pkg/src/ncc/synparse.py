"""Indentation-aware lexer and block-tree builder for Python-like source.

The "syntax sketch" is a tree of logical lines: a line whose last token is
":" owns the following indented region as a child block.  ``linearize``
flattens the tree back into a token stream with <NEWLINE>/<INDENT>/<DEDENT>
markers, which is what the sequence models consume.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import ColonWithoutBlock, DedentMismatch, UnexpectedIndent, UnterminatedString

NEWLINE_MARK = "<NEWLINE>"
INDENT_MARK = "<INDENT>"
DEDENT_MARK = "<DEDENT>"

# longest match first
OPERATORS = [
    "==", "!=", "<=", ">=", "->", "**", "//", "+=", "-=",
    "(", ")", "[", "]", "{", "}", ":", ",", ".", "=", "+", "-", "*", "/", "<", ">", "%",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+\.\d+|\d+")


class TokKind(Enum):
    IDENT = "ident"
    NUMBER = "number"
    STRING = "string"
    OP = "op"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"


@dataclass
class LexToken:
    kind: TokKind
    text: str
    line: int
    col: int


def _indent_width(line: str) -> tuple[int, int]:
    """Column width of leading whitespace (tab -> next multiple of 8) and the
    character index where content starts."""
    width = 0
    for i, ch in enumerate(line):
        if ch == " ":
            width += 1
        elif ch == "\t":
            width = (width // 8 + 1) * 8
        else:
            return width, i
    return width, len(line)


def _lex_line(line: str, lineno: int, start: int, out: list[LexToken]) -> None:
    i = start
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            return
        col = i + 1
        m = _IDENT_RE.match(line, i)
        if m:
            out.append(LexToken(TokKind.IDENT, m.group(), lineno, col))
            i = m.end()
            continue
        m = _NUMBER_RE.match(line, i)
        if m:
            out.append(LexToken(TokKind.NUMBER, m.group(), lineno, col))
            i = m.end()
            continue
        if ch in "'\"":
            j = i + 1
            while j < n:
                if line[j] == "\\":
                    j += 2
                    continue
                if line[j] == ch:
                    break
                j += 1
            if j >= n:
                raise UnterminatedString(lineno)
            out.append(LexToken(TokKind.STRING, line[i : j + 1], lineno, col))
            i = j + 1
            continue
        for op in OPERATORS:
            if line.startswith(op, i):
                out.append(LexToken(TokKind.OP, op, lineno, col))
                i += len(op)
                break
        else:
            raise ValueError(f"unexpected character {ch!r} at line {lineno} col {col}")


def lex(source: str) -> list[LexToken]:
    """Tokenize; comments and blank lines vanish, indentation becomes
    indent/dedent tokens via a stack, with closing dedents at end of input."""
    tokens: list[LexToken] = []
    stack = [0]
    for lineno, raw in enumerate(source.splitlines(), start=1):
        width, start = _indent_width(raw)
        content: list[LexToken] = []
        _lex_line(raw, lineno, start, content)
        if not content:
            continue  # blank or comment-only line
        if width > stack[-1]:
            stack.append(width)
            tokens.append(LexToken(TokKind.INDENT, "", lineno, 1))
        else:
            while width < stack[-1]:
                stack.pop()
                tokens.append(LexToken(TokKind.DEDENT, "", lineno, 1))
            if width != stack[-1]:
                raise DedentMismatch(lineno, width)
        tokens.extend(content)
        tokens.append(LexToken(TokKind.NEWLINE, "", lineno, len(raw) + 1))
    final_line = source.count("\n") + 1
    while len(stack) > 1:
        stack.pop()
        tokens.append(LexToken(TokKind.DEDENT, "", final_line, 1))
    return tokens


@dataclass
class Line:
    tokens: list[LexToken]
    child: "Block | None" = None


@dataclass
class Block:
    lines: list[Line] = field(default_factory=list)


@dataclass
class SyntaxSketch:
    root: Block


def build_sketch(tokens: list[LexToken]) -> SyntaxSketch:
    """Group lexed tokens into the logical-line tree."""
    pos = 0

    def parse_block() -> Block:
        nonlocal pos
        block = Block()
        while pos < len(tokens) and tokens[pos].kind is not TokKind.DEDENT:
            tok = tokens[pos]
            if tok.kind is TokKind.INDENT:
                raise UnexpectedIndent(f"indent without a ':' line at line {tok.line}")
            line_toks: list[LexToken] = []
            while pos < len(tokens) and tokens[pos].kind is not TokKind.NEWLINE:
                line_toks.append(tokens[pos])
                pos += 1
            pos += 1  # consume newline
            line = Line(tokens=line_toks)
            opens_block = bool(line_toks) and line_toks[-1].kind is TokKind.OP and line_toks[-1].text == ":"
            if opens_block:
                if pos >= len(tokens) or tokens[pos].kind is not TokKind.INDENT:
                    raise ColonWithoutBlock(
                        f"':' line at line {line_toks[-1].line} not followed by an indented block"
                    )
                pos += 1  # consume indent
                line.child = parse_block()
                if pos < len(tokens) and tokens[pos].kind is TokKind.DEDENT:
                    pos += 1
            block.lines.append(line)
        return block

    root = parse_block()
    while pos < len(tokens) and tokens[pos].kind is TokKind.DEDENT:
        pos += 1
    return SyntaxSketch(root=root)


def linearize(sketch: SyntaxSketch) -> list[str]:
    """Pre-order traversal with explicit structural markers."""
    out: list[str] = []

    def walk(block: Block) -> None:
        for line in block.lines:
            out.extend(t.text for t in line.tokens)
            out.append(NEWLINE_MARK)
            if line.child is not None:
                out.append(INDENT_MARK)
                walk(line.child)
                out.append(DEDENT_MARK)

    walk(sketch.root)
    return out


def linearize_source(source: str) -> list[str]:
    return linearize(build_sketch(lex(source)))

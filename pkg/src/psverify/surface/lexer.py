from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError, SourceSpan

KEYWORDS = frozenset({
    "sealed", "abstract", "class", "case", "extends", "def", "val", "if", "else",
    "match", "true", "false", "require", "ensuring", "object",
})

# longest first
PUNCT = [
    "=>", "==", "!=", "<=", ">=", "&&", "||",
    "(", ")", "[", "]", "{", "}", ",", ":", ";", ".", "=", "<", ">",
    "+", "-", "*", "!", "@", "_",
]


@dataclass(frozen=True)
class Token:
    kind: str  # 'kw', 'id', 'int', 'str', 'op', 'eof'
    text: str
    span: SourceSpan
    nl_before: bool = False
    value: object = None

    def is_(self, kind: str, text: str | None = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*|_[A-Za-z0-9_]+")
_INT = re.compile(r"[0-9]+")


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split source text into tokens. The trailing EOF token is not included."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    nl = False
    n = len(source)

    def span(length: int, at_line=None, at_col=None) -> SourceSpan:
        return SourceSpan(file, at_line or line, at_col or col, max(length, 1))

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            nl = True
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise LexError("unterminated comment", span(2))
            chunk = source[i:end + 2]
            nlines = chunk.count("\n")
            if nlines:
                line += nlines
                col = len(chunk) - chunk.rfind("\n")
                nl = True
            else:
                col += len(chunk)
            i = end + 2
            continue
        if c == '"':
            start_line, start_col = line, col
            if source.startswith('"""', i):
                end = source.find('"""', i + 3)
                if end < 0:
                    raise LexError("unterminated string", span(3))
                text = source[i + 3:end]
                raw_len = end + 3 - i
            else:
                j = i + 1
                buf = []
                while j < n and source[j] != '"':
                    if source[j] == "\n":
                        raise LexError("unterminated string", span(j - i))
                    if source[j] == "\\" and j + 1 < n:
                        buf.append({"n": "\n", "t": "\t"}.get(source[j + 1], source[j + 1]))
                        j += 2
                        continue
                    buf.append(source[j])
                    j += 1
                if j >= n:
                    raise LexError("unterminated string", span(j - i))
                text = "".join(buf)
                raw_len = j + 1 - i
            tokens.append(Token("str", text, span(raw_len, start_line, start_col), nl, text))
            chunk = source[i:i + raw_len]
            nlines = chunk.count("\n")
            if nlines:
                line += nlines
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += raw_len
            i += raw_len
            nl = False
            continue
        m = _IDENT.match(source, i)
        if m:
            text = m.group()
            kind = "kw" if text in KEYWORDS else "id"
            tokens.append(Token(kind, text, span(len(text)), nl))
            i, col, nl = m.end(), col + len(text), False
            continue
        m = _INT.match(source, i)
        if m:
            text = m.group()
            tokens.append(Token("int", text, span(len(text)), nl, int(text)))
            i, col, nl = m.end(), col + len(text), False
            continue
        for p in PUNCT:
            if source.startswith(p, i):
                tokens.append(Token("op", p, span(len(p)), nl))
                i += len(p)
                col += len(p)
                nl = False
                break
        else:
            raise LexError(f"illegal character {c!r}", span(1))
    return tokens

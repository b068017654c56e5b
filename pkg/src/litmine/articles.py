"""Article ingestion: HTML / structured text -> ParsedArticle.

Parsing is a pure function of the input bytes: the article_id is a
digest of those bytes and two parses of the same file are identical.
Every piece of extractable body text lands in exactly one field (title,
abstract, a section, a table, a figure caption, or supplementary), so
downstream evidence localization sees the whole document once.
"""

import hashlib
import re
from dataclasses import dataclass, replace
from html.parser import HTMLParser

from litmine.providers.base import ProviderError, RelevanceProvider

FORMAT_HTML = "html"
FORMAT_STRUCTURED_TEXT = "structured_text"


class MalformedInput(ValueError):
    """Input that yields no parseable article; callers skip and log,
    never silently produce an empty article."""


@dataclass(frozen=True)
class ParsedArticle:
    article_id: str
    title: str
    abstract: str = ""
    sections: tuple[tuple[str, str], ...] = ()  # (heading, body), document order
    tables: tuple[tuple[str, str], ...] = ()  # (caption, flattened rows)
    figure_captions: tuple[str, ...] = ()
    supplementary: tuple[str, ...] = ()
    journal: str = ""
    publication_year: int | None = None
    source_path: str = ""

    def with_source(self, journal: str, publication_year: int | None, source_path: str) -> "ParsedArticle":
        return replace(
            self, journal=journal, publication_year=publication_year, source_path=source_path
        )


@dataclass(frozen=True)
class RelevanceDecision:
    is_urban_related: bool
    rationale: str
    provider_id: str


_WS_RE = re.compile(r"\s+")


def _collapse(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


# ---------------------------------------------------------------- HTML

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "source", "track", "wbr",
}
_SKIP_TAGS = {"script", "style"}
_HEADINGS = {"h1", "h2", "h3", "h4", "h5", "h6"}


class _Node:
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str, attrs=None):
        self.tag = tag
        self.attrs = dict(attrs or {})
        self.children: list = []  # _Node or str


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = _Node("#root")
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = _Node(tag, attrs)
        self._stack[-1].children.append(node)
        if tag not in _VOID_TAGS:
            self._stack.append(node)

    def handle_startendtag(self, tag, attrs):
        self._stack[-1].children.append(_Node(tag, attrs))

    def handle_endtag(self, tag):
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                return
        # stray end tag: ignore

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def _node_text(node: _Node) -> str:
    parts: list[str] = []

    def rec(n):
        for child in n.children:
            if isinstance(child, str):
                parts.append(child)
            elif child.tag not in _SKIP_TAGS:
                rec(child)

    rec(node)
    return _collapse(" ".join(parts))


def _find_first(node: _Node, tags: set[str]) -> _Node | None:
    for child in node.children:
        if isinstance(child, str):
            continue
        if child.tag in tags:
            return child
        found = _find_first(child, tags)
        if found is not None:
            return found
    return None


def _flatten_table(table: _Node) -> tuple[str, str]:
    caption_node = _find_first(table, {"caption"})
    caption = _node_text(caption_node) if caption_node is not None else ""
    rows: list[str] = []

    def rec(n):
        for child in n.children:
            if isinstance(child, str):
                continue
            if child.tag == "tr":
                cells = [
                    _node_text(c)
                    for c in child.children
                    if not isinstance(c, str) and c.tag in ("td", "th")
                ]
                cells = [c for c in cells if c]
                if cells:
                    rows.append(" | ".join(cells))
            elif child.tag != "caption":
                rec(child)

    rec(table)
    return caption, "\n".join(rows)


def _attr_has_abstract(node: _Node) -> bool:
    blob = f"{node.attrs.get('class', '')} {node.attrs.get('id', '')}".lower()
    return "abstract" in blob


class _Segmenter:
    """Single pass over the tree routing text into article fields."""

    def __init__(self, title_node: _Node | None):
        self.title_node = title_node
        self.abstract_parts: list[str] = []
        self.sections: list[tuple[str, str]] = []
        self.tables: list[tuple[str, str]] = []
        self.figcaptions: list[str] = []
        self.supplementary: list[str] = []
        self._heading = ""
        self._buffer: list[str] = []

    def close_section(self):
        body = _collapse(" ".join(self._buffer))
        if body:
            low = self._heading.lower()
            if low == "abstract":
                self.abstract_parts.append(body)
            elif "supplement" in low:
                self.supplementary.append(body)
            else:
                self.sections.append((self._heading, body))
        self._buffer = []

    def walk(self, node: _Node):
        for child in node.children:
            if isinstance(child, str):
                self._buffer.append(child)
                continue
            if child.tag in _SKIP_TAGS or child.tag == "title":
                continue
            if child is self.title_node:
                continue
            if child.tag == "table":
                self.tables.append(_flatten_table(child))
                continue
            if child.tag == "figcaption":
                text = _node_text(child)
                if text:
                    self.figcaptions.append(text)
                continue
            if child.tag in _HEADINGS:
                self.close_section()
                self._heading = _node_text(child)
                continue
            if _attr_has_abstract(child) and child.tag not in _HEADINGS:
                text = _node_text(child)
                if text:
                    self.close_section()
                    self.abstract_parts.append(text)
                continue
            if child.tag == "section":
                self.close_section()
                prev = self._heading
                self._heading = ""
                self.walk(child)
                self.close_section()
                self._heading = prev
                continue
            self.walk(child)


def _parse_html(text: str) -> dict:
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    root = builder.root

    title_tag = _find_first(root, {"title"})
    title = _node_text(title_tag) if title_tag is not None else ""
    title_node = None
    if not title:
        title_node = _find_first(root, {"h1"})
        if title_node is not None:
            title = _node_text(title_node)

    seg = _Segmenter(title_node)
    seg.walk(root)
    seg.close_section()

    if not title:
        for heading, body in seg.sections:
            if heading:
                title = heading
                break
        else:
            first = seg.abstract_parts[0] if seg.abstract_parts else (
                seg.sections[0][1] if seg.sections else ""
            )
            title = first[:80]

    return {
        "title": title,
        "abstract": " ".join(seg.abstract_parts),
        "sections": tuple(seg.sections),
        "tables": tuple(seg.tables),
        "figure_captions": tuple(seg.figcaptions),
        "supplementary": tuple(seg.supplementary),
    }


# ------------------------------------------------------ structured text

def _parse_structured_text(text: str) -> dict:
    """Line-oriented pre-structured format:

    # Title            (first such line)
    ## Heading         (Abstract and Supplementary* headings are special)
    %% Table: caption  (following lines are flattened rows until blank)
    %% Figure: caption
    """
    title = ""
    abstract: list[str] = []
    sections: list[tuple[str, str]] = []
    tables: list[tuple[str, str]] = []
    figcaptions: list[str] = []
    supplementary: list[str] = []

    heading = ""
    buffer: list[str] = []
    table_caption: str | None = None
    table_rows: list[str] = []

    def close_block():
        nonlocal buffer
        body = _collapse(" ".join(buffer))
        if body:
            low = heading.lower()
            if low == "abstract":
                abstract.append(body)
            elif "supplement" in low:
                supplementary.append(body)
            else:
                sections.append((heading, body))
        buffer = []

    def close_table():
        nonlocal table_caption, table_rows
        if table_caption is not None:
            tables.append((table_caption, "\n".join(table_rows)))
        table_caption = None
        table_rows = []

    for line in text.splitlines():
        stripped = line.strip()
        if table_caption is not None:
            if stripped:
                table_rows.append(stripped)
                continue
            close_table()
            continue
        if stripped.startswith("# ") and not title:
            title = stripped[2:].strip()
        elif stripped.startswith("## "):
            close_block()
            heading = stripped[3:].strip()
        elif stripped.startswith("%% Table:"):
            close_table()
            table_caption = stripped[len("%% Table:") :].strip()
        elif stripped.startswith("%% Figure:"):
            caption = stripped[len("%% Figure:") :].strip()
            if caption:
                figcaptions.append(caption)
        elif stripped.startswith("# "):
            buffer.append(stripped[2:])
        else:
            buffer.append(stripped)
    close_block()
    close_table()

    return {
        "title": title,
        "abstract": " ".join(abstract),
        "sections": tuple(sections),
        "tables": tuple(tables),
        "figure_captions": tuple(figcaptions),
        "supplementary": tuple(supplementary),
    }


# ------------------------------------------------------------ top level

def parse_article(raw: bytes, format_hint: str = FORMAT_HTML) -> ParsedArticle:
    """Parse one article file.

    Raises MalformedInput for empty input, undecodable bytes, an unknown
    format hint, or a document with no extractable text.
    """
    if not raw:
        raise MalformedInput("empty input")
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedInput(f"input is not valid UTF-8: {exc}") from exc

    if format_hint == FORMAT_HTML:
        fields = _parse_html(text)
    elif format_hint == FORMAT_STRUCTURED_TEXT:
        fields = _parse_structured_text(text)
    else:
        raise MalformedInput(f"unknown format hint: {format_hint!r}")

    has_text = any(
        [
            fields["title"],
            fields["abstract"],
            fields["sections"],
            fields["tables"],
            fields["figure_captions"],
            fields["supplementary"],
        ]
    )
    if not has_text:
        raise MalformedInput("no extractable text")

    return ParsedArticle(
        article_id=hashlib.sha256(raw).hexdigest()[:16],
        **fields,
    )


def flatten_for_prompt(article: ParsedArticle) -> str:
    """Deterministic linearization with begin/end sentinels per block.

    Character offsets into this string are the canonical coordinate
    space for evidence localization; the sentinels let extractors name
    the section an evidence quote came from.
    """
    out: list[str] = []

    def block(name: str, body: str, label: str = ""):
        head = f"<<{name} {label}>>" if label else f"<<{name}>>"
        out.append(head)
        out.append(body)
        out.append(f"<<END {name}>>")

    block("TITLE", article.title)
    if article.abstract:
        block("ABSTRACT", article.abstract)
    for heading, body in article.sections:
        block("SECTION", body, heading)
    for caption, rows in article.tables:
        block("TABLE", rows, caption)
    for caption in article.figure_captions:
        block("FIGURE CAPTION", caption)
    for text in article.supplementary:
        block("SUPPLEMENTARY", text)
    return "\n".join(out) + "\n"


def gate_relevance(title: str, abstract: str, provider: RelevanceProvider) -> RelevanceDecision:
    """Ask the relevance provider whether an article is urban-related.

    Uses title+abstract only (full text never reaches the gate). Raises
    ProviderError when the provider fails after its retries; the caller
    marks the article undecided.
    """
    if not title.strip():
        raise ValueError("title must be non-empty")
    call = provider.assess(title, abstract)
    if call.is_urban_related and not call.rationale:
        raise ProviderError("relevance provider returned a positive call without rationale")
    return RelevanceDecision(
        is_urban_related=call.is_urban_related,
        rationale=call.rationale,
        provider_id=provider.provider_id,
    )

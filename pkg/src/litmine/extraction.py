"""Schema-guided card extraction from one article.

Builds the extraction prompt (schema + taxonomy + evidence contract +
article text under a context budget), sends it to the completion
provider, and parses the response into candidate DataCards. Parsing is
total: malformed items become warnings, a fully unparseable response
gets one re-ask and then fails the article without stopping the run.
"""

import json
import re
from dataclasses import dataclass, replace

from litmine.articles import ParsedArticle, flatten_for_prompt
from litmine.providers.base import CompletionProvider, CompletionRequest, JudgeProvider
from litmine.schema import CardParseError, DataCard, Taxonomy, card_from_record

DEFAULT_CONTEXT_BUDGET = 200_000  # chars of article text placed in the prompt


class UnparseableResponse(Exception):
    """Provider output stayed unparseable after the re-ask; the article
    is marked failed and the pipeline continues."""


@dataclass(frozen=True)
class ExtractionOutcome:
    article_id: str
    cards: tuple[DataCard, ...]
    parse_warnings: tuple[str, ...]
    raw_response: str


_PROMPT_HEADER = """\
You are given the full text of a research article. Find every original
dataset the study uses (explicitly or implicitly mentioned), and
distinguish true data sources from derived indicators or analytical
methods: report only the data sources.

Return ONLY a valid JSON array. Each element describes one dataset with
exactly these fields:
  dataset_id, Data_Name, Data_summary, Category, Sub-category,
  Time_Coverage, Geographic_Coverage, URL, ref, Other_Information

Category must be one of:
{categories}

Sub-category must belong to the chosen Category:
{subcategories}

For each field, include a short verbatim excerpt from the article as
evidence, with the section it appears in and a confidence label
(high/medium/low), as an "evidence" list of
{{"field", "quote", "location", "confidence"}} objects on the record.

Article text follows, with <<...>> markers delimiting its parts.

"""


def build_extraction_prompt(
    article_text: str,
    taxonomy: Taxonomy,
    max_context_chars: int | None = None,
) -> str:
    """Deterministic prompt: schema fields, taxonomy labels, evidence
    contract, then the (budget-trimmed) article text."""
    if not article_text:
        raise ValueError("article_text must be non-empty")
    categories = "\n".join(f"  - {c.name}" for c in taxonomy.categories)
    subcategories = "\n".join(
        f"  - {c.name}: " + "; ".join(c.subcategories) for c in taxonomy.categories
    )
    header = _PROMPT_HEADER.format(categories=categories, subcategories=subcategories)
    body = article_text
    if max_context_chars is not None and len(body) > max_context_chars:
        body = _trim_to_budget(body, max_context_chars)
    return header + body


_BLOCK_RE = re.compile(r"<<(?P<kind>[A-Z ]+?)(?: (?P<label>[^>]*))?>>\n(?P<body>.*?)\n<<END (?P=kind)>>", re.DOTALL)

_METHODS_HINT = re.compile(r"\b(method|data|material|measure|collection|acquisition)", re.IGNORECASE)
_RESULTS_HINT = re.compile(r"\b(result|finding|analysis)", re.IGNORECASE)


def _block_priority(kind: str, label: str) -> int:
    """Lower keeps earlier under a tight budget: title and abstract
    first, then data/methods-like sections, then results, then the rest,
    with tables and captions last."""
    if kind == "TITLE":
        return 0
    if kind == "ABSTRACT":
        return 1
    if kind == "SECTION":
        if _METHODS_HINT.search(label):
            return 2
        if _RESULTS_HINT.search(label):
            return 3
        return 4
    if kind == "TABLE":
        return 5
    return 6


def _trim_to_budget(flattened: str, budget: int) -> str:
    blocks = []
    for i, m in enumerate(_BLOCK_RE.finditer(flattened)):
        kind = m.group("kind")
        label = m.group("label") or ""
        blocks.append((_block_priority(kind, label), i, m.group(0)))
    if not blocks:
        return flattened[:budget]

    chosen: set[int] = set()
    used = 0
    for priority, i, text in sorted(blocks, key=lambda b: (b[0], b[1])):
        cost = len(text) + 1
        if used + cost > budget:
            continue
        chosen.add(i)
        used += cost
    kept = [text for _, i, text in sorted(blocks, key=lambda b: b[1]) if i in chosen]
    return "\n".join(kept) + "\n"


_FENCE_RE = re.compile(r"^```[a-zA-Z]*\n(.*?)\n```\s*$", re.DOTALL)


def _parse_response(raw: str) -> tuple[list[dict], list[str]]:
    text = raw.strip()
    fence = _FENCE_RE.match(text)
    if fence:
        text = fence.group(1).strip()
    if not text:
        raise CardParseError("empty response")
    data = json.loads(text)  # ValueError propagates to the re-ask path
    if isinstance(data, dict):
        if isinstance(data.get("meta_data"), list):
            return data["meta_data"], []
        return [data], []
    if isinstance(data, list):
        return data, []
    raise CardParseError(f"expected a JSON array, got {type(data).__name__}")


def extract_cards(
    article: ParsedArticle,
    provider: CompletionProvider,
    max_context_chars: int = DEFAULT_CONTEXT_BUDGET,
    taxonomy: Taxonomy | None = None,
    max_output: int = 8192,
) -> ExtractionOutcome:
    """Run extraction for one parsed article.

    Malformed card records are dropped with a warning; a response that
    is not JSON at all triggers exactly one re-ask before
    UnparseableResponse. ProviderError propagates unchanged.
    """
    from litmine.schema import canonical_taxonomy

    taxonomy = taxonomy or canonical_taxonomy()
    prompt = build_extraction_prompt(
        flatten_for_prompt(article), taxonomy, max_context_chars=max_context_chars
    )
    response = provider.complete(CompletionRequest(prompt=prompt, max_output=max_output))
    try:
        items, warnings = _parse_response(response.text)
    except (ValueError, CardParseError):
        retry_prompt = prompt + "\nYour previous answer was not valid JSON. Return ONLY a valid JSON array.\n"
        response = provider.complete(CompletionRequest(prompt=retry_prompt, max_output=max_output))
        try:
            items, warnings = _parse_response(response.text)
        except (ValueError, CardParseError) as exc:
            raise UnparseableResponse(
                f"article {article.article_id}: response unparseable after re-ask: {exc}"
            ) from exc

    cards: list[DataCard] = []
    seen_ids: set[str] = set()
    for i, item in enumerate(items, start=1):
        try:
            card = card_from_record(item, fallback_id=f"ds-{i:02d}")
        except CardParseError as exc:
            warnings.append(f"dropped card record {i}: {exc}")
            continue
        dataset_id = card.dataset_id
        if dataset_id in seen_ids:
            dataset_id = f"{dataset_id}-{i:02d}"
            warnings.append(
                f"duplicate dataset_id {card.dataset_id!r} renamed to {dataset_id!r}"
            )
            card = replace(card, dataset_id=dataset_id)
        seen_ids.add(dataset_id)
        cards.append(card)

    return ExtractionOutcome(
        article_id=article.article_id,
        cards=tuple(cards),
        parse_warnings=tuple(warnings),
        raw_response=response.text,
    )


def distinguish_original(card: DataCard, judge: JudgeProvider) -> bool:
    """True when the card describes a data source; False demotes it as a
    derived indicator / method output and keeps it out of the catalog."""
    return judge.is_original_dataset(card.summary or card.name)

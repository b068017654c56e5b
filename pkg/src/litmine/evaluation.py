"""Benchmark evaluation: matching protocols, recall, field accuracy,
and the search-system comparison.

Matching runs in three stages per benchmark dataset: shortlist the
top-5 extracted cards from the same paper by summary-embedding cosine,
ask the judge whether each candidate refers to the same underlying
dataset, then assign matches under two protocols. Under `expanded`, any
same/subset verdict matches and several extracted records may jointly
cover one benchmark dataset. Under `strict`, only `same` verdicts count
and extracted records are consumed greedily in descending-similarity
order, so each matches at most one benchmark dataset. Strict
assignments are a subset of expanded assignments by construction.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from litmine.providers.base import (
    EmbeddingProvider,
    JudgeProvider,
    SUBSET_VERDICTS,
    VERDICT_SAME,
)
from litmine.providers.reference import SearchFixtureStore, cosine
from litmine.schema import (
    DataCard,
    FIELD_CATEGORY,
    FIELD_GEO,
    FIELD_REFERENCES,
    FIELD_SUB_CATEGORY,
    FIELD_TIME,
    FIELD_URL,
    card_from_record,
    card_to_record,
)

PROTOCOL_STRICT = "strict"
PROTOCOL_EXPANDED = "expanded"

RELEVANCE_L1 = "L1"
RELEVANCE_L2 = "L2"

SHORTLIST_SIZE = 5

ACCURACY_FIELDS = (
    FIELD_TIME,
    FIELD_GEO,
    FIELD_CATEGORY,
    FIELD_SUB_CATEGORY,
    FIELD_URL,
    FIELD_REFERENCES,
)

_FIELD_TITLES = {
    FIELD_TIME: "Time coverage",
    FIELD_GEO: "Geographic coverage",
    FIELD_CATEGORY: "Category",
    FIELD_SUB_CATEGORY: "Sub-category",
    FIELD_URL: "URL",
    FIELD_REFERENCES: "Reference",
}


class MissingFixture(Exception):
    """A (system, benchmark) pair has no recorded search results."""


@dataclass(frozen=True)
class BenchmarkDataset:
    paper_id: str
    benchmark_id: str
    annotation: DataCard
    relevance: str  # L1 | L2
    paper_title: str = ""  # lets eval map papers onto parsed articles

    def __post_init__(self):
        if self.relevance not in (RELEVANCE_L1, RELEVANCE_L2):
            raise ValueError(f"relevance must be L1 or L2, got {self.relevance!r}")


@dataclass(frozen=True)
class MatchAssignment:
    benchmark_id: str
    matched_extracted_ids: tuple[str, ...]
    protocol: str
    judge_rationales: tuple[str, ...] = ()


def load_benchmark(path: str | Path) -> list[BenchmarkDataset]:
    """Benchmark file: {"record": "benchmark", "version": 1, "data":
    {"papers": [{"paper_id", "datasets": [{"benchmark_id", "relevance",
    "card": <card record>}, ...]}, ...]}}.

    The reference human-annotated benchmark this harness was calibrated
    against holds 307 L1/L2-labeled datasets across 54 papers; any file
    in this shape works.
    """
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    data = obj.get("data", obj)
    out: list[BenchmarkDataset] = []
    for paper in data.get("papers", []):
        for ds in paper.get("datasets", []):
            out.append(
                BenchmarkDataset(
                    paper_id=paper["paper_id"],
                    benchmark_id=ds["benchmark_id"],
                    annotation=card_from_record(ds["card"]),
                    relevance=ds.get("relevance", RELEVANCE_L1),
                    paper_title=paper.get("title", ""),
                )
            )
    return out


def dump_benchmark(benchmarks: list[BenchmarkDataset]) -> dict:
    papers: dict[str, list[BenchmarkDataset]] = {}
    for b in benchmarks:
        papers.setdefault(b.paper_id, []).append(b)
    return {
        "papers": [
            {
                "paper_id": paper_id,
                "title": items[0].paper_title,
                "datasets": [
                    {
                        "benchmark_id": b.benchmark_id,
                        "relevance": b.relevance,
                        "card": card_to_record(b.annotation),
                    }
                    for b in items
                ],
            }
            for paper_id, items in sorted(papers.items())
        ]
    }


def shortlist_candidates(
    bench: BenchmarkDataset,
    extracted: list[DataCard],
    embed: EmbeddingProvider,
    size: int = SHORTLIST_SIZE,
) -> list[tuple[DataCard, float]]:
    """Top candidates from the same paper by summary cosine, descending;
    at most `size`, empty when nothing was extracted."""
    if not extracted:
        return []
    texts = [bench.annotation.summary or bench.annotation.name]
    texts += [c.summary or c.name for c in extracted]
    vectors = embed.embed(texts)
    ref = vectors[0]
    scored = [
        (card, cosine(ref, vec)) for card, vec in zip(extracted, vectors[1:])
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0].dataset_id))
    return scored[:size]


def match_protocol(
    benchmarks: list[BenchmarkDataset],
    extracted_by_paper: dict[str, list[DataCard]],
    embed: EmbeddingProvider,
    judge: JudgeProvider,
    protocol: str,
) -> list[MatchAssignment]:
    """Match benchmark datasets to extracted cards under one protocol.

    Returns one assignment per matched benchmark dataset (unmatched
    benchmarks simply do not appear).
    """
    if protocol not in (PROTOCOL_STRICT, PROTOCOL_EXPANDED):
        raise ValueError(f"unknown protocol {protocol!r}")

    # (benchmark, card, similarity, verdict, rationale) over shortlists
    judged: list[tuple[BenchmarkDataset, DataCard, float, str, str]] = []
    for bench in benchmarks:
        cards = extracted_by_paper.get(bench.paper_id, [])
        for card, sim in shortlist_candidates(bench, cards, embed):
            judgement = judge.judge_same_dataset(
                bench.annotation.summary or bench.annotation.name,
                card.summary or card.name,
            )
            judged.append((bench, card, sim, judgement.verdict, judgement.rationale))

    if protocol == PROTOCOL_EXPANDED:
        grouped: dict[str, MatchAssignment] = {}
        for bench, card, _sim, verdict, rationale in judged:
            if verdict != VERDICT_SAME and verdict not in SUBSET_VERDICTS:
                continue
            prev = grouped.get(bench.benchmark_id)
            ids = (prev.matched_extracted_ids if prev else ()) + (card.dataset_id,)
            rats = (prev.judge_rationales if prev else ()) + (rationale,)
            grouped[bench.benchmark_id] = MatchAssignment(
                benchmark_id=bench.benchmark_id,
                matched_extracted_ids=ids,
                protocol=protocol,
                judge_rationales=rats,
            )
        return [grouped[k] for k in sorted(grouped)]

    # strict: greedy one-to-one over `same` verdicts, best similarity first
    eligible = [row for row in judged if row[3] == VERDICT_SAME]
    eligible.sort(key=lambda row: (-row[2], row[0].benchmark_id, row[1].dataset_id))
    used_benchmarks: set[str] = set()
    used_cards: set[tuple[str, str]] = set()  # (paper_id, dataset_id)
    assignments: list[MatchAssignment] = []
    for bench, card, _sim, _verdict, rationale in eligible:
        card_key = (bench.paper_id, card.dataset_id)
        if bench.benchmark_id in used_benchmarks or card_key in used_cards:
            continue
        used_benchmarks.add(bench.benchmark_id)
        used_cards.add(card_key)
        assignments.append(
            MatchAssignment(
                benchmark_id=bench.benchmark_id,
                matched_extracted_ids=(card.dataset_id,),
                protocol=protocol,
                judge_rationales=(rationale,),
            )
        )
    assignments.sort(key=lambda a: a.benchmark_id)
    return assignments


def percentage(numerator: int, denominator: int) -> float:
    """Exact two-decimal percentage (the metric arithmetic used in every
    report table)."""
    if denominator == 0:
        return 0.0
    return round(100.0 * numerator / denominator, 2)


@dataclass(frozen=True)
class RecallSlice:
    matched: int
    total: int

    @property
    def pct(self) -> float:
        return percentage(self.matched, self.total)


def compute_recall(
    assignments: list[MatchAssignment], benchmarks: list[BenchmarkDataset]
) -> dict[str, RecallSlice]:
    """Recall over the L1 slice and the full L1+L2 benchmark."""
    matched_ids = {a.benchmark_id for a in assignments if a.matched_extracted_ids}
    slices: dict[str, RecallSlice] = {}
    l1 = [b for b in benchmarks if b.relevance == RELEVANCE_L1]
    slices["L1"] = RecallSlice(
        matched=sum(1 for b in l1 if b.benchmark_id in matched_ids), total=len(l1)
    )
    slices["L1+L2"] = RecallSlice(
        matched=sum(1 for b in benchmarks if b.benchmark_id in matched_ids),
        total=len(benchmarks),
    )
    return slices


_FIELD_VALUES = {
    FIELD_TIME: lambda c: c.time_coverage_raw,
    FIELD_GEO: lambda c: c.geographic_coverage_raw,
    FIELD_CATEGORY: lambda c: c.category,
    FIELD_SUB_CATEGORY: lambda c: c.sub_category or "",
    FIELD_URL: lambda c: c.url or "",
    FIELD_REFERENCES: lambda c: "; ".join(c.references),
}


@dataclass(frozen=True)
class FieldAccuracy:
    consistent: int
    matched: int

    @property
    def pct(self) -> float:
        return percentage(self.consistent, self.matched)


def field_accuracy(
    assignments: list[MatchAssignment],
    benchmarks: list[BenchmarkDataset],
    extracted_by_paper: dict[str, list[DataCard]],
    judge: JudgeProvider,
) -> dict[str, FieldAccuracy]:
    """Per-field consistency over matched pairs.

    Denominator = matched benchmark datasets; a field counts as
    consistent when any of the benchmark dataset's matched extracted
    records agrees with the gold value (joint coverage under expanded).
    """
    by_id = {b.benchmark_id: b for b in benchmarks}
    results = {f: [0, 0] for f in ACCURACY_FIELDS}
    for assignment in assignments:
        if not assignment.matched_extracted_ids:
            continue
        bench = by_id[assignment.benchmark_id]
        cards = {
            c.dataset_id: c for c in extracted_by_paper.get(bench.paper_id, [])
        }
        matched_cards = [
            cards[i] for i in assignment.matched_extracted_ids if i in cards
        ]
        for field_name in ACCURACY_FIELDS:
            gold_value = _FIELD_VALUES[field_name](bench.annotation)
            results[field_name][1] += 1
            if any(
                judge.fields_match(field_name, _FIELD_VALUES[field_name](c), gold_value)
                for c in matched_cards
            ):
                results[field_name][0] += 1
    return {f: FieldAccuracy(consistent=v[0], matched=v[1]) for f, v in results.items()}


# ------------------------------------------------- search comparison

@dataclass(frozen=True)
class SystemComparison:
    system_id: str
    n_match: int
    n_url: int
    total: int
    ranks: tuple[int, ...]  # rank of the correct URL per URL-matched benchmark

    @property
    def match_pct(self) -> float:
        return percentage(self.n_match, self.total)

    @property
    def url_pct(self) -> float:
        return percentage(self.n_url, self.total)

    @property
    def avg_rank(self) -> float | None:
        return round(sum(self.ranks) / len(self.ranks), 2) if self.ranks else None


def benchmark_query(bench: BenchmarkDataset) -> str:
    """The standardized discovery query: dataset name + geographic and
    temporal coverage."""
    parts = [
        bench.annotation.name,
        bench.annotation.geographic_coverage_raw,
        bench.annotation.time_coverage_raw,
    ]
    return " ".join(p for p in parts if p)


def compare_search_systems(
    benchmarks: list[BenchmarkDataset],
    fixtures: SearchFixtureStore,
    judge: JudgeProvider,
    k: int = 10,
) -> list[SystemComparison]:
    """Score every recorded system plus their union.

    Per benchmark and system: matched when any of the top-k recorded
    hits refers to the gold dataset per the judge (subset verdicts
    count); the correct URL is the first such hit carrying a URL, and
    its recorded 1-based rank feeds Avg. rank. The union row ORs matches
    across systems and takes the best (minimum) rank. Raises
    MissingFixture when a (system, benchmark) pair was never recorded.
    """
    systems = fixtures.engine_ids()
    total = len(benchmarks)
    per_system: list[SystemComparison] = []
    # benchmark_id -> per-system (matched, url_rank or None)
    outcomes: dict[str, dict[str, tuple[bool, int | None]]] = {b.benchmark_id: {} for b in benchmarks}

    for system in systems:
        n_match = 0
        n_url = 0
        ranks: list[int] = []
        for bench in benchmarks:
            query = benchmark_query(bench)
            recorded = fixtures.lookup(system, query)
            if recorded is None:
                raise MissingFixture(f"no recorded results for {system!r} / {bench.benchmark_id!r}")
            matched = False
            url_rank: int | None = None
            gold = bench.annotation.summary or bench.annotation.name
            for rank, hit in enumerate(recorded[:k], start=1):
                text = f"{hit.get('title', '')} {hit.get('snippet', '')}".strip()
                if not text:
                    continue
                verdict = judge.judge_same_dataset(gold, text).verdict
                if verdict == VERDICT_SAME or verdict in SUBSET_VERDICTS:
                    matched = True
                    if url_rank is None and hit.get("url"):
                        url_rank = rank
            outcomes[bench.benchmark_id][system] = (matched, url_rank)
            if matched:
                n_match += 1
            if url_rank is not None:
                n_url += 1
                ranks.append(url_rank)
        per_system.append(
            SystemComparison(
                system_id=system, n_match=n_match, n_url=n_url, total=total, ranks=tuple(ranks)
            )
        )

    union_match = 0
    union_url = 0
    union_ranks: list[int] = []
    for bench in benchmarks:
        rows = outcomes[bench.benchmark_id]
        if any(matched for matched, _ in rows.values()):
            union_match += 1
        found = [rank for _, rank in rows.values() if rank is not None]
        if found:
            union_url += 1
            union_ranks.append(min(found))
    per_system.append(
        SystemComparison(
            system_id="union",
            n_match=union_match,
            n_url=union_url,
            total=total,
            ranks=tuple(union_ranks),
        )
    )
    return per_system


# ------------------------------------------------------------- report

@dataclass
class EvalReport:
    recall: dict[str, dict[str, RecallSlice]]  # protocol -> slice -> RecallSlice
    field_accuracy: dict[str, dict[str, FieldAccuracy]]  # protocol -> field -> acc
    comparison: list[SystemComparison] = field(default_factory=list)

    def check_invariants(self) -> None:
        """Protocol dominance must hold on every report."""
        for slice_name in ("L1", "L1+L2"):
            strict = self.recall[PROTOCOL_STRICT][slice_name]
            expanded = self.recall[PROTOCOL_EXPANDED][slice_name]
            if strict.pct > expanded.pct:
                raise AssertionError(
                    f"strict recall exceeds expanded for {slice_name}: "
                    f"{strict.pct} > {expanded.pct}"
                )
        if self.comparison:
            union = [c for c in self.comparison if c.system_id == "union"]
            if union:
                best = max(
                    (c.n_match for c in self.comparison if c.system_id != "union"),
                    default=0,
                )
                if union[0].n_match < best:
                    raise AssertionError("union #Match below a per-system #Match")

    def to_data(self) -> dict:
        return {
            "recall": {
                protocol: {
                    name: {"matched": s.matched, "total": s.total, "pct": s.pct}
                    for name, s in slices.items()
                }
                for protocol, slices in self.recall.items()
            },
            "field_accuracy": {
                protocol: {
                    field_name: {
                        "consistent": a.consistent,
                        "matched": a.matched,
                        "pct": a.pct,
                    }
                    for field_name, a in fields.items()
                }
                for protocol, fields in self.field_accuracy.items()
            },
            "comparison": [
                {
                    "system": c.system_id,
                    "n_match": c.n_match,
                    "match_pct": c.match_pct,
                    "n_url": c.n_url,
                    "url_pct": c.url_pct,
                    "avg_rank": c.avg_rank,
                    "total": c.total,
                }
                for c in self.comparison
            ],
        }

    def render_text(self) -> str:
        lines: list[str] = []
        lines.append("Dataset identification recall (%)")
        lines.append(f"{'Slice':<8}{'Strict':>14}{'Expanded':>16}")
        for slice_name in ("L1", "L1+L2"):
            s = self.recall[PROTOCOL_STRICT][slice_name]
            e = self.recall[PROTOCOL_EXPANDED][slice_name]
            lines.append(
                f"{slice_name:<8}{_cell(s.pct, s.matched, s.total):>14}"
                f"{_cell(e.pct, e.matched, e.total):>16}"
            )
        lines.append("")
        lines.append("Field-level accuracy (%) over matched pairs")
        lines.append(f"{'Field':<22}{'Strict':>18}{'Expanded':>18}")
        for field_name in ACCURACY_FIELDS:
            s = self.field_accuracy[PROTOCOL_STRICT][field_name]
            e = self.field_accuracy[PROTOCOL_EXPANDED][field_name]
            lines.append(
                f"{_FIELD_TITLES[field_name]:<22}"
                f"{_cell(s.pct, s.consistent, s.matched):>18}"
                f"{_cell(e.pct, e.consistent, e.matched):>18}"
            )
        if self.comparison:
            lines.append("")
            lines.append("Search-system comparison")
            lines.append(f"{'System':<14}{'#Match (%)':>16}{'#URL (%)':>16}{'Avg. rank':>12}")
            for c in self.comparison:
                rank = f"{c.avg_rank:.2f}" if c.avg_rank is not None else "-"
                lines.append(
                    f"{c.system_id:<14}"
                    f"{f'{c.n_match} ({c.match_pct:.2f})':>16}"
                    f"{f'{c.n_url} ({c.url_pct:.2f})':>16}"
                    f"{rank:>12}"
                )
        return "\n".join(lines) + "\n"


def _cell(pct: float, num: int, den: int) -> str:
    return f"{pct:.2f} ({num}/{den})"


def evaluate(
    benchmarks: list[BenchmarkDataset],
    extracted_by_paper: dict[str, list[DataCard]],
    embed: EmbeddingProvider,
    judge: JudgeProvider,
    fixtures: SearchFixtureStore | None = None,
) -> EvalReport:
    """Full report: both protocols' recall and field accuracy, plus the
    search comparison when fixtures are supplied."""
    recall: dict[str, dict[str, RecallSlice]] = {}
    accuracy: dict[str, dict[str, FieldAccuracy]] = {}
    for protocol in (PROTOCOL_STRICT, PROTOCOL_EXPANDED):
        assignments = match_protocol(benchmarks, extracted_by_paper, embed, judge, protocol)
        recall[protocol] = compute_recall(assignments, benchmarks)
        accuracy[protocol] = field_accuracy(
            assignments, benchmarks, extracted_by_paper, judge
        )
    comparison = (
        compare_search_systems(benchmarks, fixtures, judge) if fixtures is not None else []
    )
    report = EvalReport(recall=recall, field_accuracy=accuracy, comparison=comparison)
    report.check_invariants()
    return report

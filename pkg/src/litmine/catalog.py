"""Searchable catalog over harmonized entries.

Storage is an append-friendly JSONL record log; the inverted keyword
index and the summary-embedding matrix live in memory and are rebuilt
from the log on open (that is the whole recovery story). Keyword
ranking is weighted token matching, name counting three times summary,
fully deterministic with entry_id as the tiebreak. Summary embeddings
are computed once at upsert, so retrieval costs one embed call for the
query.

Concurrency: upserts serialize behind a lock and publish immutable
snapshots; readers never see a half-applied batch.
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from litmine.harmonize import CatalogEntry, GEO_GLOBAL
from litmine.providers.base import EmbeddingProvider
from litmine.records import RECORD_VERSION, entry_from_data, entry_to_data
from litmine.textutil import normalize_label, tokens

logger = logging.getLogger(__name__)

MAX_LIMIT = 100
DEFAULT_LIMIT = 20

STORE_META = {"store": "litmine-catalog", "version": 1}


class StorageError(Exception):
    pass


@dataclass(frozen=True)
class SearchQuery:
    keywords: str = ""
    categories: tuple[str, ...] = ()
    sub_categories: tuple[str, ...] = ()
    countries: tuple[str, ...] = ()
    year_from: int | None = None
    year_to: int | None = None
    limit: int = DEFAULT_LIMIT
    offset: int = 0

    def validate(self, max_limit: int = MAX_LIMIT) -> None:
        if not 1 <= self.limit <= max_limit:
            raise ValueError(f"limit must be in 1..{max_limit}")
        if self.offset < 0:
            raise ValueError("offset must be >= 0")
        if self.year_from is not None and self.year_to is not None and self.year_from > self.year_to:
            raise ValueError("year_from must be <= year_to")


@dataclass(frozen=True)
class SearchResult:
    entries: tuple[tuple[CatalogEntry, float], ...]  # (entry, score), scores non-increasing
    total_matches: int


@dataclass(frozen=True)
class CorpusStats:
    total_entries: int
    by_country: dict[str, int] = field(default_factory=dict)
    by_category: dict[str, int] = field(default_factory=dict)
    by_sub_category: dict[str, int] = field(default_factory=dict)
    by_collection_year: dict[str, int] = field(default_factory=dict)
    mean_publication_latency_years: float | None = None


@dataclass(frozen=True)
class _Snapshot:
    entries: tuple[CatalogEntry, ...]  # sorted by entry_id
    ids: tuple[str, ...]
    matrix: np.ndarray  # unit rows aligned with entries
    name_counts: dict[str, dict[str, int]]  # token -> entry_id -> count
    summary_counts: dict[str, dict[str, int]]


_EMPTY = _Snapshot((), (), np.zeros((0, 1)), {}, {})


class Catalog:
    """In-memory catalog with an optional on-disk record log."""

    def __init__(self, embedding: EmbeddingProvider, store_dir: str | Path | None = None):
        self._embedding = embedding
        self._store_dir = Path(store_dir) if store_dir is not None else None
        self._lock = threading.Lock()
        self._entries: dict[str, CatalogEntry] = {}
        self._vectors: dict[str, np.ndarray] = {}
        self._snapshot: _Snapshot = _EMPTY
        self.version = 0  # bumps on every successful upsert
        if self._store_dir is not None:
            self._open_store()

    # ------------------------------------------------------------ store

    def _entries_path(self) -> Path:
        return self._store_dir / "entries.jsonl"

    def _open_store(self) -> None:
        try:
            self._store_dir.mkdir(parents=True, exist_ok=True)
            meta_path = self._store_dir / "meta.json"
            if meta_path.exists():
                meta = json.loads(meta_path.read_text(encoding="utf-8"))
                if meta.get("version") != STORE_META["version"]:
                    raise StorageError(f"unsupported store version in {meta_path}")
            else:
                meta_path.write_text(
                    json.dumps(STORE_META, sort_keys=True) + "\n", encoding="utf-8"
                )
            if self._entries_path().exists():
                self._replay_log()
        except OSError as exc:
            raise StorageError(f"cannot open catalog store: {exc}") from exc

    def _replay_log(self) -> None:
        with open(self._entries_path(), encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    data = obj["data"]
                    entry = entry_from_data(data)
                    vec = np.asarray(data["summary_embedding"], dtype=np.float64)
                except (ValueError, KeyError) as exc:
                    raise StorageError(
                        f"{self._entries_path()}:{line_no}: corrupt record: {exc}"
                    ) from exc
                self._entries[entry.entry_id] = entry
                self._vectors[entry.entry_id] = _unit(vec)
        self._publish()

    def _append_log(self, entry: CatalogEntry, vec: np.ndarray) -> None:
        if self._store_dir is None:
            return
        data = entry_to_data(entry)
        data["summary_embedding"] = [round(float(v), 9) for v in vec]
        line = json.dumps(
            {"record": "catalog_entry", "version": RECORD_VERSION, "data": data},
            sort_keys=True,
            ensure_ascii=False,
        )
        try:
            with open(self._entries_path(), "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
        except OSError as exc:
            raise StorageError(f"cannot append to catalog store: {exc}") from exc

    # ----------------------------------------------------------- upsert

    def upsert(self, entries: list[CatalogEntry]) -> tuple[int, int]:
        """Insert or replace entries keyed by entry_id.

        Returns (inserted, replaced). Re-ingesting identical input is
        replaced-only and leaves size unchanged; an id collision with
        different content is last-writer-wins and audit-logged.
        """
        if not entries:
            return (0, 0)
        texts = [e.card.summary or e.card.name for e in entries]
        vectors = [_unit(np.asarray(v.values, dtype=np.float64)) for v in self._embedding.embed(texts)]
        inserted = replaced = 0
        with self._lock:
            for entry, vec in zip(entries, vectors):
                old = self._entries.get(entry.entry_id)
                if old is None:
                    inserted += 1
                else:
                    replaced += 1
                    if old != entry:
                        logger.info(
                            "catalog upsert replaced entry %s with different content",
                            entry.entry_id,
                        )
                self._entries[entry.entry_id] = entry
                self._vectors[entry.entry_id] = vec
                self._append_log(entry, vec)
            self._publish()
            self.version += 1
        return (inserted, replaced)

    def _publish(self) -> None:
        ids = tuple(sorted(self._entries))
        entries = tuple(self._entries[i] for i in ids)
        if ids:
            matrix = np.vstack([self._vectors[i] for i in ids])
        else:
            matrix = np.zeros((0, 1))
        name_counts: dict[str, dict[str, int]] = {}
        summary_counts: dict[str, dict[str, int]] = {}
        for entry in entries:
            for tok in tokens(entry.card.name):
                name_counts.setdefault(tok, {}).setdefault(entry.entry_id, 0)
                name_counts[tok][entry.entry_id] += 1
            for tok in tokens(entry.card.summary):
                summary_counts.setdefault(tok, {}).setdefault(entry.entry_id, 0)
                summary_counts[tok][entry.entry_id] += 1
        self._snapshot = _Snapshot(entries, ids, matrix, name_counts, summary_counts)

    def rebuild(self) -> int:
        """Recompute embeddings and indexes from the stored entries
        (recovery after an embedding-model change or index corruption)."""
        with self._lock:
            entries = [self._entries[i] for i in sorted(self._entries)]
            if entries:
                texts = [e.card.summary or e.card.name for e in entries]
                vectors = self._embedding.embed(texts)
                self._vectors = {
                    e.entry_id: _unit(np.asarray(v.values, dtype=np.float64))
                    for e, v in zip(entries, vectors)
                }
            self._publish()
            self.version += 1
        return len(entries)

    # ----------------------------------------------------------- access

    @property
    def size(self) -> int:
        return len(self._snapshot.ids)

    def get(self, entry_id: str) -> CatalogEntry | None:
        snap = self._snapshot
        try:
            idx = snap.ids.index(entry_id)
        except ValueError:
            return None
        return snap.entries[idx]

    def all_entries(self) -> tuple[CatalogEntry, ...]:
        return self._snapshot.entries

    # ----------------------------------------------------------- search

    def search(self, q: SearchQuery, max_limit: int = MAX_LIMIT) -> SearchResult:
        q.validate(max_limit)
        snap = self._snapshot

        query_tokens = tokens(q.keywords) if q.keywords else []
        scores: dict[str, float] = {}
        if query_tokens:
            for tok in query_tokens:
                for entry_id, count in snap.name_counts.get(tok, {}).items():
                    scores[entry_id] = scores.get(entry_id, 0.0) + 3.0 * count
                for entry_id, count in snap.summary_counts.get(tok, {}).items():
                    scores[entry_id] = scores.get(entry_id, 0.0) + 1.0 * count
            candidates = [e for e in snap.entries if e.entry_id in scores]
        else:
            candidates = list(snap.entries)

        matched = [e for e in candidates if _facets_match(e, q)]
        ranked = sorted(
            ((e, scores.get(e.entry_id, 0.0)) for e in matched),
            key=lambda pair: (-pair[1], pair[0].entry_id),
        )
        page = tuple(ranked[q.offset : q.offset + q.limit])
        return SearchResult(entries=page, total_matches=len(ranked))

    def rag_retrieve(self, query_text: str, k: int) -> list[tuple[CatalogEntry, float]]:
        """Top-k grounded entries by cosine between the query embedding
        and stored summary embeddings."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not query_text.strip():
            raise ValueError("query_text must be non-empty")
        snap = self._snapshot
        if not snap.ids:
            return []
        qvec = _unit(np.asarray(self._embedding.embed([query_text])[0].values, dtype=np.float64))
        sims = snap.matrix @ qvec
        order = sorted(range(len(snap.ids)), key=lambda i: (-sims[i], snap.ids[i]))
        return [(snap.entries[i], float(sims[i])) for i in order[:k]]

    # ------------------------------------------------------------ stats

    def compute_stats(self) -> CorpusStats:
        snap = self._snapshot
        by_country: dict[str, int] = {}
        by_category: dict[str, int] = {}
        by_sub: dict[str, int] = {}
        by_year: dict[str, int] = {}
        latencies: list[float] = []
        for entry in snap.entries:
            if entry.geo.level == GEO_GLOBAL and entry.geo.is_resolved():
                country = "global"
            elif entry.geo.is_resolved() and entry.geo.country_codes:
                country = entry.geo.country_codes[0]
            else:
                country = "unknown"
            by_country[country] = by_country.get(country, 0) + 1

            category = entry.card.category or "unknown"
            by_category[category] = by_category.get(category, 0) + 1
            sub = entry.card.sub_category or "unknown"
            by_sub[sub] = by_sub.get(sub, 0) + 1

            midpoint = entry.time.midpoint_year()
            year = str(int(midpoint)) if midpoint is not None else "unknown"
            by_year[year] = by_year.get(year, 0) + 1

            if midpoint is not None and entry.source.publication_year is not None:
                latencies.append(max(0.0, entry.source.publication_year - midpoint))

        return CorpusStats(
            total_entries=len(snap.entries),
            by_country=dict(sorted(by_country.items())),
            by_category=dict(sorted(by_category.items())),
            by_sub_category=dict(sorted(by_sub.items())),
            by_collection_year=dict(sorted(by_year.items())),
            mean_publication_latency_years=(
                sum(latencies) / len(latencies) if latencies else None
            ),
        )


def _facets_match(entry: CatalogEntry, q: SearchQuery) -> bool:
    if q.categories:
        wanted = {normalize_label(c) for c in q.categories}
        if normalize_label(entry.card.category) not in wanted:
            return False
    if q.sub_categories:
        wanted = {normalize_label(s) for s in q.sub_categories}
        if normalize_label(entry.card.sub_category or "") not in wanted:
            return False
    if q.countries:
        wanted = {c.upper() for c in q.countries}
        if not wanted & set(entry.geo.country_codes):
            return False
    if q.year_from is not None or q.year_to is not None:
        if not entry.time.overlaps_years(q.year_from, q.year_to):
            return False
    return True


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    return vec / norm if norm > 0 else vec


def stats_to_data(stats: CorpusStats) -> dict:
    return {
        "total_entries": stats.total_entries,
        "by_country": stats.by_country,
        "by_category": stats.by_category,
        "by_sub_category": stats.by_sub_category,
        "by_collection_year": stats.by_collection_year,
        "mean_publication_latency_years": stats.mean_publication_latency_years,
    }

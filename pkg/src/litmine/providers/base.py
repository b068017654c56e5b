"""Provider abstractions: completion, embedding, judge, search, probe.

Everything the pipeline asks of an external model or service goes
through one of these interfaces. Reference implementations (see
litmine.providers.reference) are deterministic so the whole pipeline is
bit-reproducible offline; remote HTTP adapters live in
litmine.providers.remote. No module outside this package names a
concrete vendor.
"""

import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence


class ProviderError(Exception):
    """A provider failed after any configured retries."""

    def __init__(self, message: str, status: int | None = None, attempts: int = 1):
        super().__init__(message)
        self.status = status
        self.attempts = attempts


class TransientProviderFailure(Exception):
    """Internal marker for a retriable failure (timeouts, 5xx, 429)."""


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    max_output: int = 4096
    temperature: float = 0.0  # extraction and judging stay reproducible

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if not 0.0 <= self.temperature <= 1.0:
            raise ValueError("temperature must be in [0, 1]")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    provider_id: str
    latency_s: float = 0.0
    prompt_tokens: int = 0
    output_tokens: int = 0


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    model_id: str


@dataclass(frozen=True)
class SearchHit:
    rank: int  # 1-based
    url: str
    title: str
    snippet: str
    engine_id: str


VERDICT_SAME = "same"
VERDICT_SUBSET_OF_A = "subset_of_a"  # b is contained in a
VERDICT_SUBSET_OF_B = "subset_of_b"  # a is contained in b
VERDICT_DIFFERENT = "different"

SUBSET_VERDICTS = (VERDICT_SUBSET_OF_A, VERDICT_SUBSET_OF_B)


@dataclass(frozen=True)
class Judgement:
    verdict: str
    rationale: str


class CompletionProvider(Protocol):
    provider_id: str

    def complete(self, req: CompletionRequest) -> CompletionResponse: ...


class EmbeddingProvider(Protocol):
    provider_id: str

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]: ...


class JudgeProvider(Protocol):
    provider_id: str

    def judge_same_dataset(self, a: str, b: str, context: str = "") -> Judgement: ...

    def field_supported(self, field_name: str, value: str, context: str) -> bool: ...

    def fields_match(self, field_name: str, extracted: str, gold: str) -> bool: ...

    def is_original_dataset(self, summary: str) -> bool: ...


class SearchProvider(Protocol):
    provider_id: str

    def web_search(self, query: str, k: int) -> list[SearchHit]: ...


class UrlProbe(Protocol):
    def probe(self, url: str) -> str:  # "alive" | "dead" | "unknown"
        ...


class RelevanceProvider(Protocol):
    provider_id: str

    def assess(self, title: str, abstract: str) -> "RelevanceCall": ...


@dataclass(frozen=True)
class RelevanceCall:
    is_urban_related: bool
    rationale: str


def validate_embed_inputs(texts: Sequence[str]) -> None:
    if not texts:
        raise ValueError("embed() requires at least one text")
    for t in texts:
        if not t:
            raise ValueError("embed() texts must be non-empty")


def call_with_retries(
    fn: Callable[[], object],
    *,
    retries: int = 3,
    backoff_s: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
    what: str = "provider call",
):
    """Run fn, retrying TransientProviderFailure with exponential backoff.

    Raises ProviderError once the attempt budget is exhausted.
    """
    last: TransientProviderFailure | None = None
    for attempt in range(1, retries + 1):
        try:
            return fn()
        except TransientProviderFailure as exc:
            last = exc
            if attempt < retries:
                sleep(backoff_s * (2 ** (attempt - 1)))
    raise ProviderError(f"{what} failed after {retries} attempts: {last}", attempts=retries)


class RateLimiter:
    """Caps in-flight calls to a provider; shareable across threads."""

    def __init__(self, max_concurrency: int = 4):
        self._sem = threading.BoundedSemaphore(max(1, max_concurrency))

    def __enter__(self):
        self._sem.acquire()
        return self

    def __exit__(self, *exc):
        self._sem.release()
        return False


@dataclass
class ProviderSet:
    """Every provider handle one pipeline run needs."""

    completion: CompletionProvider
    embedding: EmbeddingProvider
    judge: JudgeProvider
    search: SearchProvider
    url_probe: UrlProbe
    relevance: RelevanceProvider
    limiter: RateLimiter = field(default_factory=RateLimiter)

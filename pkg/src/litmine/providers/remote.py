"""Remote provider adapters over plain HTTP.

One generic JSON adapter per provider kind; credentials come from an
environment variable named in the provider config, never from the
config file itself. Transient failures (network errors, 429, 5xx) are
retried with exponential backoff; everything else surfaces immediately
as ProviderError.
"""

import os
import time
from typing import Sequence

import httpx

from litmine.providers.base import (
    CompletionProvider,
    CompletionRequest,
    CompletionResponse,
    EmbeddingVector,
    ProviderError,
    RelevanceCall,
    SearchHit,
    TransientProviderFailure,
    call_with_retries,
    validate_embed_inputs,
)

_RETRIABLE_STATUS = {408, 425, 429, 500, 502, 503, 504}


class _HttpBase:
    def __init__(
        self,
        endpoint: str,
        *,
        model: str = "",
        credential_env: str = "",
        retries: int = 3,
        backoff_s: float = 0.5,
        timeout_s: float = 30.0,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self._credential_env = credential_env
        self._retries = retries
        self._backoff_s = backoff_s
        self._client = client or httpx.Client(timeout=timeout_s)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self._credential_env:
            token = os.environ.get(self._credential_env, "")
            if not token:
                raise ProviderError(
                    f"credential env var {self._credential_env} is not set"
                )
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _post(self, payload: dict) -> dict:
        headers = self._headers()

        def attempt():
            try:
                resp = self._client.post(self.endpoint, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                raise TransientProviderFailure(str(exc)) from exc
            if resp.status_code in _RETRIABLE_STATUS:
                raise TransientProviderFailure(f"status {resp.status_code}")
            if resp.status_code >= 400:
                raise ProviderError(
                    f"{self.endpoint} returned {resp.status_code}: {resp.text[:200]}",
                    status=resp.status_code,
                )
            try:
                return resp.json()
            except ValueError as exc:
                raise TransientProviderFailure(f"non-JSON response: {exc}") from exc

        return call_with_retries(
            attempt, retries=self._retries, backoff_s=self._backoff_s, what=self.endpoint
        )


class HttpCompletionProvider(_HttpBase):
    """POST {prompt, model, max_tokens, temperature} -> {"text": ...}."""

    @property
    def provider_id(self) -> str:
        return f"http-completion:{self.model or self.endpoint}"

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        started = time.monotonic()
        data = self._post(
            {
                "model": self.model,
                "prompt": req.prompt,
                "max_tokens": req.max_output,
                "temperature": req.temperature,
            }
        )
        if "text" not in data:
            raise ProviderError(f"{self.endpoint} response has no 'text' field")
        return CompletionResponse(
            text=str(data["text"]),
            provider_id=self.provider_id,
            latency_s=time.monotonic() - started,
            prompt_tokens=int(data.get("prompt_tokens", 0)),
            output_tokens=int(data.get("output_tokens", 0)),
        )


class HttpEmbeddingProvider(_HttpBase):
    """POST {texts, model} -> {"vectors": [[...], ...]}."""

    @property
    def provider_id(self) -> str:
        return f"http-embedding:{self.model or self.endpoint}"

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        validate_embed_inputs(texts)
        data = self._post({"model": self.model, "texts": list(texts)})
        vectors = data.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProviderError(f"{self.endpoint} returned a malformed vectors field")
        return [
            EmbeddingVector(values=tuple(float(v) for v in vec), model_id=self.provider_id)
            for vec in vectors
        ]


class HttpSearchProvider(_HttpBase):
    """POST {query, k} -> {"hits": [{url, title, snippet}, ...]}."""

    def __init__(self, endpoint: str, *, engine_id: str = "http", **kwargs):
        super().__init__(endpoint, **kwargs)
        self.engine_id = engine_id

    @property
    def provider_id(self) -> str:
        return f"http-search:{self.engine_id}"

    def web_search(self, query: str, k: int) -> list[SearchHit]:
        if k < 1:
            raise ValueError("k must be >= 1")
        data = self._post({"query": query, "k": k})
        hits = data.get("hits")
        if not isinstance(hits, list):
            raise ProviderError(f"{self.endpoint} returned a malformed hits field")
        return [
            SearchHit(
                rank=i + 1,
                url=str(h.get("url", "")),
                title=str(h.get("title", "")),
                snippet=str(h.get("snippet", "")),
                engine_id=self.engine_id,
            )
            for i, h in enumerate(hits[:k])
        ]


class PromptedRelevanceProvider:
    """Urban-relevance gate implemented over any completion provider.

    The provider must answer with a line starting yes/no; anything else
    counts as a malformed response and is retried, then surfaced as
    ProviderError.
    """

    _PROMPT = (
        "Decide whether the publication below is related to urban studies or "
        "uses urban datasets. Answer with a single word, yes or no, then one "
        "short reason.\n\nTitle: {title}\nAbstract: {abstract}\nAnswer:"
    )

    def __init__(self, completion: CompletionProvider, retries: int = 3, backoff_s: float = 0.0):
        self._completion = completion
        self._retries = retries
        self._backoff_s = backoff_s
        self.provider_id = f"prompted-relevance:{completion.provider_id}"

    def assess(self, title: str, abstract: str) -> RelevanceCall:
        prompt = self._PROMPT.format(title=title, abstract=abstract)

        def attempt() -> RelevanceCall:
            resp = self._completion.complete(
                CompletionRequest(prompt=prompt, max_output=64, temperature=0.0)
            )
            first = resp.text.strip().split(None, 1)
            if not first:
                raise TransientProviderFailure("empty relevance response")
            word = first[0].strip(".,:;").lower()
            rationale = first[1].strip() if len(first) > 1 else ""
            if word == "yes":
                return RelevanceCall(True, rationale or "provider answered yes")
            if word == "no":
                return RelevanceCall(False, rationale)
            raise TransientProviderFailure(f"unparseable relevance answer: {resp.text[:80]!r}")

        return call_with_retries(
            attempt,
            retries=self._retries,
            backoff_s=self._backoff_s,
            what="relevance gate",
        )


class PromptedJudgeProvider:
    """Judge over any completion provider with strict one-word answers.

    Malformed answers are retried and then surfaced as ProviderError;
    verdict parsing accepts exactly the four protocol verdicts.
    """

    _VERDICTS = ("same", "subset_of_a", "subset_of_b", "different")

    def __init__(self, completion: CompletionProvider, retries: int = 3, backoff_s: float = 0.0):
        self._completion = completion
        self._retries = retries
        self._backoff_s = backoff_s
        self.provider_id = f"prompted-judge:{completion.provider_id}"

    def _ask(self, prompt: str, allowed: tuple[str, ...]) -> tuple[str, str]:
        def attempt() -> tuple[str, str]:
            resp = self._completion.complete(
                CompletionRequest(prompt=prompt, max_output=128, temperature=0.0)
            )
            parts = resp.text.strip().split(None, 1)
            if not parts:
                raise TransientProviderFailure("empty judge response")
            word = parts[0].strip(".,:;").lower()
            if word not in allowed:
                raise TransientProviderFailure(f"unparseable judge answer: {resp.text[:80]!r}")
            return word, parts[1].strip() if len(parts) > 1 else ""

        return call_with_retries(
            attempt, retries=self._retries, backoff_s=self._backoff_s, what="judge call"
        )

    def judge_same_dataset(self, a: str, b: str, context: str = ""):
        from litmine.providers.base import Judgement

        prompt = (
            "Do these two dataset descriptions refer to the same underlying "
            "dataset? Answer with exactly one of: same, subset_of_a (B is a "
            "subset of A), subset_of_b (A is a subset of B), different. Then "
            "give one short reason.\n\n"
            f"A: {a}\n\nB: {b}\n\nContext: {context}\nAnswer:"
        )
        word, rationale = self._ask(prompt, self._VERDICTS)
        return Judgement(word, rationale)

    def field_supported(self, field_name: str, value: str, context: str) -> bool:
        prompt = (
            f"Is the claimed {field_name} value supported by the source text? "
            "Answer yes or no, then one short reason.\n\n"
            f"Value: {value}\n\nSource text: {context}\nAnswer:"
        )
        word, _ = self._ask(prompt, ("yes", "no"))
        return word == "yes"

    def fields_match(self, field_name: str, extracted: str, gold: str) -> bool:
        prompt = (
            f"Do these two {field_name} values describe the same thing? "
            "Answer yes or no, then one short reason.\n\n"
            f"First: {extracted}\n\nSecond: {gold}\nAnswer:"
        )
        word, _ = self._ask(prompt, ("yes", "no"))
        return word == "yes"

    def is_original_dataset(self, summary: str) -> bool:
        prompt = (
            "Does this describe an original dataset (a data source), rather "
            "than a derived indicator or an analytical method? Answer yes or "
            "no, then one short reason.\n\n"
            f"Description: {summary}\nAnswer:"
        )
        word, _ = self._ask(prompt, ("yes", "no"))
        return word == "yes"


class HttpUrlProbe:
    """Live URL probe: HEAD, falling back to GET on 405; 'unknown' on
    timeouts and transport errors."""

    def __init__(self, timeout_s: float = 10.0, client: httpx.Client | None = None):
        self._client = client or httpx.Client(
            timeout=timeout_s, follow_redirects=True
        )

    def probe(self, url: str) -> str:
        try:
            resp = self._client.head(url)
            if resp.status_code == 405:
                resp = self._client.get(url)
        except httpx.TimeoutException:
            return "unknown"
        except httpx.HTTPError:
            return "dead"
        return "alive" if resp.status_code < 400 else "dead"

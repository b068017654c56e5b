"""Provider layer: interfaces, deterministic reference implementations,
remote HTTP adapters, and config-file loading.

Provider selection is configuration-only: a JSON file names the kind of
each provider and its parameters. With no config at all you get the
fully deterministic offline reference set.

Config shape (all sections optional):

    {
      "concurrency": 4,
      "completion": {"kind": "reference", "script_path": "..."}
                  | {"kind": "http", "endpoint": "...", "model": "...",
                     "credential_env": "API_KEY", "retries": 3,
                     "timeout_s": 30},
      "embedding":  {"kind": "reference", "dim": 256} | {"kind": "http", ...},
      "judge":      {"kind": "reference"} | {"kind": "prompted"},
      "search":     {"kind": "fixture", "fixtures_path": "...",
                     "engine_id": "fixture"} | {"kind": "http", ...},
      "url_probe":  {"kind": "fixture", "fixtures_path": "..."}
                  | {"kind": "http", "timeout_s": 10},
      "relevance":  {"kind": "reference"} | {"kind": "prompted"}
    }

"prompted" judge/relevance run over the configured completion provider.
Credentials are read from the named environment variable only.
"""

import hashlib
import json
from pathlib import Path

from litmine.providers.base import (
    CompletionProvider,
    CompletionRequest,
    CompletionResponse,
    EmbeddingProvider,
    EmbeddingVector,
    JudgeProvider,
    Judgement,
    ProviderError,
    ProviderSet,
    RateLimiter,
    RelevanceCall,
    RelevanceProvider,
    SearchHit,
    SearchProvider,
    SUBSET_VERDICTS,
    TransientProviderFailure,
    UrlProbe,
    VERDICT_DIFFERENT,
    VERDICT_SAME,
    VERDICT_SUBSET_OF_A,
    VERDICT_SUBSET_OF_B,
    call_with_retries,
)
from litmine.providers.reference import (
    FixtureSearchProvider,
    FixtureUrlProbe,
    OracleJudge,
    ReferenceCompletionProvider,
    ReferenceEmbeddingProvider,
    ReferenceJudge,
    ReferenceRelevanceProvider,
    SearchFixtureStore,
    cosine,
)

__all__ = [
    "CompletionProvider",
    "CompletionRequest",
    "CompletionResponse",
    "EmbeddingProvider",
    "EmbeddingVector",
    "FixtureSearchProvider",
    "FixtureUrlProbe",
    "JudgeProvider",
    "Judgement",
    "OracleJudge",
    "ProviderError",
    "ProviderSet",
    "RateLimiter",
    "ReferenceCompletionProvider",
    "ReferenceEmbeddingProvider",
    "ReferenceJudge",
    "ReferenceRelevanceProvider",
    "RelevanceCall",
    "RelevanceProvider",
    "SUBSET_VERDICTS",
    "SearchFixtureStore",
    "SearchHit",
    "SearchProvider",
    "TransientProviderFailure",
    "UrlProbe",
    "VERDICT_DIFFERENT",
    "VERDICT_SAME",
    "VERDICT_SUBSET_OF_A",
    "VERDICT_SUBSET_OF_B",
    "call_with_retries",
    "config_digest",
    "cosine",
    "load_providers",
]


def load_providers(config_path: str | Path | None = None) -> ProviderSet:
    """Build a ProviderSet from a config file (offline reference set when
    no path is given). Relative fixture/script paths resolve against the
    config file's directory."""
    if config_path is None:
        cfg: dict = {}
        base = Path(".")
    else:
        config_path = Path(config_path)
        with open(config_path, encoding="utf-8") as fh:
            cfg = json.load(fh)
        base = config_path.parent

    def resolve(p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else base / path

    completion = _completion(cfg.get("completion", {}), resolve)
    embedding = _embedding(cfg.get("embedding", {}))
    judge = _judge(cfg.get("judge", {}), completion)
    search = _search(cfg.get("search", {}), resolve)
    url_probe = _url_probe(cfg.get("url_probe", {}), resolve)
    relevance = _relevance(cfg.get("relevance", {}), completion)
    return ProviderSet(
        completion=completion,
        embedding=embedding,
        judge=judge,
        search=search,
        url_probe=url_probe,
        relevance=relevance,
        limiter=RateLimiter(int(cfg.get("concurrency", 4))),
    )


def config_digest(config_path: str | Path | None) -> str:
    """Stable digest of the provider configuration for run manifests."""
    if config_path is None:
        return "reference-defaults"
    data = Path(config_path).read_bytes()
    return hashlib.sha256(data).hexdigest()[:16]


def _http_kwargs(section: dict) -> dict:
    return {
        "model": section.get("model", ""),
        "credential_env": section.get("credential_env", ""),
        "retries": int(section.get("retries", 3)),
        "backoff_s": float(section.get("backoff_s", 0.5)),
        "timeout_s": float(section.get("timeout_s", 30.0)),
    }


def _completion(section: dict, resolve) -> CompletionProvider:
    kind = section.get("kind", "reference")
    if kind == "reference":
        script_path = section.get("script_path")
        if script_path:
            return ReferenceCompletionProvider.from_script_file(resolve(script_path))
        return ReferenceCompletionProvider()
    if kind == "http":
        from litmine.providers.remote import HttpCompletionProvider

        return HttpCompletionProvider(section["endpoint"], **_http_kwargs(section))
    raise ValueError(f"unknown completion provider kind: {kind!r}")


def _embedding(section: dict) -> EmbeddingProvider:
    kind = section.get("kind", "reference")
    if kind == "reference":
        return ReferenceEmbeddingProvider(dim=int(section.get("dim", 256)))
    if kind == "http":
        from litmine.providers.remote import HttpEmbeddingProvider

        return HttpEmbeddingProvider(section["endpoint"], **_http_kwargs(section))
    raise ValueError(f"unknown embedding provider kind: {kind!r}")


def _judge(section: dict, completion: CompletionProvider) -> JudgeProvider:
    kind = section.get("kind", "reference")
    if kind == "reference":
        return ReferenceJudge()
    if kind == "prompted":
        from litmine.providers.remote import PromptedJudgeProvider

        return PromptedJudgeProvider(completion, retries=int(section.get("retries", 3)))
    raise ValueError(f"unknown judge provider kind: {kind!r}")


def _search(section: dict, resolve) -> SearchProvider:
    kind = section.get("kind", "fixture")
    if kind == "fixture":
        fixtures_path = section.get("fixtures_path")
        engine = section.get("engine_id", "fixture")
        if fixtures_path:
            return FixtureSearchProvider.from_file(resolve(fixtures_path), engine_id=engine)
        return FixtureSearchProvider({}, engine_id=engine)
    if kind == "http":
        from litmine.providers.remote import HttpSearchProvider

        return HttpSearchProvider(
            section["endpoint"],
            engine_id=section.get("engine_id", "http"),
            **_http_kwargs(section),
        )
    raise ValueError(f"unknown search provider kind: {kind!r}")


def _url_probe(section: dict, resolve) -> UrlProbe:
    kind = section.get("kind", "fixture")
    if kind == "fixture":
        fixtures_path = section.get("fixtures_path")
        if fixtures_path:
            return FixtureUrlProbe.from_file(resolve(fixtures_path))
        return FixtureUrlProbe({})
    if kind == "http":
        from litmine.providers.remote import HttpUrlProbe

        return HttpUrlProbe(timeout_s=float(section.get("timeout_s", 10.0)))
    raise ValueError(f"unknown url probe kind: {kind!r}")


def _relevance(section: dict, completion: CompletionProvider) -> RelevanceProvider:
    kind = section.get("kind", "reference")
    if kind == "reference":
        return ReferenceRelevanceProvider()
    if kind == "prompted":
        from litmine.providers.remote import PromptedRelevanceProvider

        return PromptedRelevanceProvider(completion, retries=int(section.get("retries", 3)))
    raise ValueError(f"unknown relevance provider kind: {kind!r}")

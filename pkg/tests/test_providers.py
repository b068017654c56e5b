import hashlib
import math

import httpx
import pytest

from litmine.providers import (
    CompletionRequest,
    OracleJudge,
    ProviderError,
    ReferenceCompletionProvider,
    ReferenceEmbeddingProvider,
    ReferenceJudge,
    SearchFixtureStore,
    TransientProviderFailure,
    VERDICT_DIFFERENT,
    VERDICT_SAME,
    VERDICT_SUBSET_OF_A,
    VERDICT_SUBSET_OF_B,
    call_with_retries,
    cosine,
    load_providers,
)
from litmine.providers.reference import FixtureSearchProvider, FixtureUrlProbe
from litmine.providers.remote import HttpCompletionProvider, HttpEmbeddingProvider


# --------------------------------------------------------- completion

def test_echo_contract():
    provider = ReferenceCompletionProvider()
    resp = provider.complete(CompletionRequest(prompt="please ECHO:xyz\nignored tail"))
    assert resp.text == "xyz"


def test_script_lookup_prefers_longest_key():
    provider = ReferenceCompletionProvider(
        script={"alpha": "short", "alpha beta": "long"}
    )
    resp = provider.complete(CompletionRequest(prompt="xx alpha beta xx"))
    assert resp.text == "long"


def test_default_response_is_empty_array():
    provider = ReferenceCompletionProvider()
    assert provider.complete(CompletionRequest(prompt="nothing matches")).text == "[]"


def test_max_output_truncates():
    provider = ReferenceCompletionProvider(script={"k": "x" * 100})
    resp = provider.complete(CompletionRequest(prompt="k", max_output=10))
    assert len(resp.text) == 40  # ~4 chars per token


def test_empty_prompt_rejected():
    with pytest.raises(ValueError):
        CompletionRequest(prompt="")


def test_temperature_bounds():
    with pytest.raises(ValueError):
        CompletionRequest(prompt="x", temperature=1.5)


# ---------------------------------------------------------- embedding

def test_embed_identical_texts_identical_vectors():
    provider = ReferenceEmbeddingProvider()
    a, b = provider.embed(["a", "a"])
    assert a == b
    assert math.isclose(sum(v * v for v in a.values), 1.0, rel_tol=1e-12)


def test_embed_cosine_ordering_matches_token_overlap_oracle():
    provider = ReferenceEmbeddingProvider(dim=256)
    q = "gps mobility traces"
    near = "gps mobility traces beijing"
    far = "satellite imagery"
    vq, vnear, vfar = provider.embed([q, near, far])

    # oracle: hashed-count arithmetic, assuming (and checking) that the
    # involved tokens land in distinct dimensions
    def bucket(token):
        return int.from_bytes(hashlib.md5(token.encode()).digest()[:4], "big") % 256

    tokens_q = q.split()
    tokens_near = near.split()
    tokens_far = far.split()
    all_tokens = set(tokens_q + tokens_near + tokens_far)
    assert len({bucket(t) for t in all_tokens}) == len(all_tokens), "hash collision in fixture"

    expected_near = len(set(tokens_q) & set(tokens_near)) / (
        math.sqrt(len(tokens_q)) * math.sqrt(len(tokens_near))
    )
    expected_far = len(set(tokens_q) & set(tokens_far))
    assert cosine(vq, vnear) == pytest.approx(expected_near, abs=1e-12)
    assert cosine(vq, vfar) == pytest.approx(expected_far, abs=1e-12)
    assert cosine(vq, vnear) > cosine(vq, vfar)


def test_embed_rejects_empty_inputs():
    provider = ReferenceEmbeddingProvider()
    with pytest.raises(ValueError):
        provider.embed([])
    with pytest.raises(ValueError):
        provider.embed([""])


# -------------------------------------------------------------- judge

def test_judge_identical_summaries_same():
    judge = ReferenceJudge()
    assert judge.judge_same_dataset("walk data", "walk data").verdict == VERDICT_SAME


def test_judge_subset_of_a_with_geo_containment():
    judge = ReferenceJudge()
    verdict = judge.judge_same_dataset(
        "US city walkability scores, 1,609 cities", "walkability score for Seattle"
    ).verdict
    assert verdict == VERDICT_SUBSET_OF_A


def test_judge_subset_of_b_is_symmetric():
    judge = ReferenceJudge()
    verdict = judge.judge_same_dataset(
        "walkability score for Seattle", "US city walkability scores, 1,609 cities"
    ).verdict
    assert verdict == VERDICT_SUBSET_OF_B


def test_judge_disjoint_topics_different():
    judge = ReferenceJudge()
    verdict = judge.judge_same_dataset(
        "deep sea vent chemistry profiles", "metro smart card transactions"
    ).verdict
    assert verdict == VERDICT_DIFFERENT


def test_judge_year_containment_blocks_mismatch():
    judge = ReferenceJudge()
    verdict = judge.judge_same_dataset(
        "traffic counts for Berlin 2010 to 2012", "traffic counts for Berlin 1995"
    ).verdict
    assert verdict == VERDICT_DIFFERENT


def test_judge_requires_non_empty():
    with pytest.raises(ValueError):
        ReferenceJudge().judge_same_dataset("", "x")


def test_field_supported_time_years():
    judge = ReferenceJudge()
    assert judge.field_supported("time", "2013–2016", "March 2013 to February 2016")
    assert not judge.field_supported("time", "1999–2001", "March 2013 to February 2016")


def test_field_supported_geo_claims():
    judge = ReferenceJudge()
    assert not judge.field_supported("geo", "Global", "city-level scores for US cities")
    assert judge.field_supported("geo", "USA", "scores for 1,609 US cities")
    assert judge.field_supported("geo", "Global", "a worldwide panel of city indicators")


def test_fields_match_time_equivalence():
    judge = ReferenceJudge()
    assert judge.fields_match("time", "2013–2016", "from 2013 to 2016")
    assert not judge.fields_match("time", "2013", "2014")
    assert judge.fields_match("time", "", "")
    assert not judge.fields_match("time", "2013", "")


def test_fields_match_geo_and_labels():
    judge = ReferenceJudge()
    assert judge.fields_match("geo", "USA", "United States")
    assert not judge.fields_match("geo", "USA", "Canada")
    assert judge.fields_match("category", "Statical Infrastructure Data", "Statistical infrastructure data")
    assert judge.fields_match("url", "https://www.example.org/data/", "http://example.org/data")


def test_is_original_dataset_rule():
    judge = ReferenceJudge()
    assert not judge.is_original_dataset(
        "regression coefficients estimated from the mobility data"
    )
    assert judge.is_original_dataset(
        "City-level walkability scores for 1,609 US cities used to characterize the built environment."
    )
    # derived wording plus acquisition language stays original
    assert judge.is_original_dataset(
        "survey data collected in 2019; regression analyses use it downstream"
    )


def test_oracle_judge_tables():
    oracle = OracleJudge(
        same_pairs={("gold summary", "candidate summary")},
        subset_pairs={("gold summary", "part of it")},
    )
    assert oracle.judge_same_dataset("gold summary", "candidate summary").verdict == VERDICT_SAME
    assert oracle.judge_same_dataset("gold summary", "part of it").verdict == VERDICT_SUBSET_OF_A
    assert oracle.judge_same_dataset("part of it", "gold summary").verdict == VERDICT_SUBSET_OF_B


# ---------------------------------------------------- search fixtures

def _fixture_provider():
    hits = [
        {"url": f"https://x.org/{i}", "title": f"t{i}", "snippet": f"s{i}"} for i in range(10)
    ]
    return FixtureSearchProvider({"known query": hits})


def test_fixture_search_replays_recorded_order():
    hits = _fixture_provider().web_search("Known   QUERY", k=10)
    assert [h.rank for h in hits] == list(range(1, 11))
    assert hits[0].url == "https://x.org/0"


def test_fixture_search_unknown_query_empty():
    assert _fixture_provider().web_search("never recorded", k=5) == []


def test_fixture_search_truncates_to_k():
    hits = _fixture_provider().web_search("known query", k=3)
    assert len(hits) == 3
    assert [h.rank for h in hits] == [1, 2, 3]


def test_fixture_search_rejects_bad_k():
    with pytest.raises(ValueError):
        _fixture_provider().web_search("known query", k=0)


def test_fixture_store_lookup_and_missing():
    store = SearchFixtureStore({"alpha": {"q": []}})
    assert store.lookup("alpha", "q") == []
    assert store.lookup("alpha", "other") is None
    assert store.lookup("beta", "q") is None
    assert store.without_engine("alpha").engine_ids() == []


def test_fixture_url_probe():
    probe = FixtureUrlProbe({"https://a": 200, "https://b": 404, "https://c": "alive"})
    assert probe.probe("https://a") == "alive"
    assert probe.probe("https://b") == "dead"
    assert probe.probe("https://c") == "alive"
    assert probe.probe("https://unlisted") == "unknown"


# ------------------------------------------------------------ retries

def test_call_with_retries_exhausts_and_raises():
    calls = []
    sleeps = []

    def flaky():
        calls.append(1)
        raise TransientProviderFailure("boom")

    with pytest.raises(ProviderError) as err:
        call_with_retries(flaky, retries=3, backoff_s=0.5, sleep=sleeps.append)
    assert len(calls) == 3
    assert sleeps == [0.5, 1.0]  # exponential backoff
    assert err.value.attempts == 3


def test_call_with_retries_recovers():
    state = {"n": 0}

    def flaky():
        state["n"] += 1
        if state["n"] < 2:
            raise TransientProviderFailure("first one fails")
        return "ok"

    assert call_with_retries(flaky, retries=3, sleep=lambda s: None) == "ok"


# ----------------------------------------------------- http adapters

def _client(handler):
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_http_completion_round_trip():
    def handler(request):
        return httpx.Response(200, json={"text": "answer", "output_tokens": 3})

    provider = HttpCompletionProvider(
        "https://llm.test/v1", model="m1", client=_client(handler), backoff_s=0.0
    )
    resp = provider.complete(CompletionRequest(prompt="hello"))
    assert resp.text == "answer"
    assert resp.output_tokens == 3


def test_http_completion_retries_transient_then_succeeds():
    state = {"n": 0}

    def handler(request):
        state["n"] += 1
        if state["n"] == 1:
            return httpx.Response(503)
        return httpx.Response(200, json={"text": "ok"})

    provider = HttpCompletionProvider("https://llm.test", client=_client(handler), backoff_s=0.0)
    assert provider.complete(CompletionRequest(prompt="x")).text == "ok"
    assert state["n"] == 2


def test_http_completion_auth_failure_is_not_retried():
    state = {"n": 0}

    def handler(request):
        state["n"] += 1
        return httpx.Response(401, text="bad credential")

    provider = HttpCompletionProvider("https://llm.test", client=_client(handler), backoff_s=0.0)
    with pytest.raises(ProviderError) as err:
        provider.complete(CompletionRequest(prompt="x"))
    assert err.value.status == 401
    assert state["n"] == 1


def test_http_completion_missing_credential_env(monkeypatch):
    monkeypatch.delenv("LITMINE_TEST_KEY", raising=False)
    provider = HttpCompletionProvider(
        "https://llm.test", credential_env="LITMINE_TEST_KEY", client=_client(lambda r: None)
    )
    with pytest.raises(ProviderError):
        provider.complete(CompletionRequest(prompt="x"))


def test_http_embedding_shape_checked():
    def handler(request):
        return httpx.Response(200, json={"vectors": [[1.0, 0.0]]})

    provider = HttpEmbeddingProvider("https://emb.test", client=_client(handler))
    vecs = provider.embed(["one"])
    assert vecs[0].values == (1.0, 0.0)
    with pytest.raises(ProviderError):
        provider.embed(["one", "two"])  # one vector for two texts


# --------------------------------------------------------- config load

def test_load_providers_defaults_are_reference():
    providers = load_providers(None)
    assert providers.completion.provider_id.startswith("reference")
    assert providers.embedding.provider_id.startswith("reference")
    assert providers.judge.provider_id.startswith("reference")


def test_load_providers_from_file(tmp_path):
    (tmp_path / "fixtures.json").write_text(
        '{"version": 1, "engines": {"e1": {"q": []}}}', encoding="utf-8"
    )
    (tmp_path / "cfg.json").write_text(
        '{"search": {"kind": "fixture", "fixtures_path": "fixtures.json", "engine_id": "e1"},'
        ' "embedding": {"kind": "reference", "dim": 64}}',
        encoding="utf-8",
    )
    providers = load_providers(tmp_path / "cfg.json")
    assert providers.embedding.dim == 64
    assert providers.search.engine_id == "e1"


def test_load_providers_unknown_kind(tmp_path):
    (tmp_path / "cfg.json").write_text('{"judge": {"kind": "psychic"}}', encoding="utf-8")
    with pytest.raises(ValueError):
        load_providers(tmp_path / "cfg.json")

"""Country/city alias table and the scanner shared by geo normalization
and the reference judge.

The bundled table (data/gazetteer.json) carries ISO 3166-1 alpha-2
codes, canonical country names, common aliases, and a major-city to
country map. It is plain data: extending coverage is an edit to the
JSON, not to code.
"""

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_N_COUNTRIES_RE = re.compile(r"\b\d+\s+countries\b", re.IGNORECASE)


def _alias_tokens(alias: str) -> tuple[str, ...]:
    return tuple(_WORD_RE.findall(alias))


@dataclass(frozen=True)
class GeoScan:
    """Everything one pass over a text found."""

    country_codes: tuple[str, ...]  # first-mention order, deduplicated
    city_codes: tuple[str, ...]
    matched_aliases: tuple[str, ...]
    global_hit: bool
    subnational_hit: bool


class Gazetteer:
    def __init__(self, data: dict):
        if "countries" not in data:
            raise ValueError("gazetteer file missing 'countries' table")
        self.codes: frozenset[str] = frozenset(data["countries"])
        self.names: dict[str, str] = {c: v["name"] for c, v in data["countries"].items()}
        self._global_terms = [_alias_tokens(t) for t in data.get("global_terms", [])]
        self._subnational_terms = [_alias_tokens(t) for t in data.get("subnational_terms", [])]

        # first token (lowercased) -> [(alias tokens, code, kind)], longest first
        self._by_first: dict[str, list[tuple[tuple[str, ...], str, str]]] = {}
        for code, entry in data["countries"].items():
            for alias in [entry["name"], *entry.get("aliases", [])]:
                self._add(alias, code, "country")
        for city, code in data.get("cities", {}).items():
            if code not in self.codes:
                raise ValueError(f"city {city!r} maps to unknown code {code!r}")
            self._add(city, code, "city")
        for entries in self._by_first.values():
            entries.sort(key=lambda e: len(e[0]), reverse=True)

    def _add(self, alias: str, code: str, kind: str):
        toks = _alias_tokens(alias)
        if not toks:
            return
        self._by_first.setdefault(toks[0].lower(), []).append((toks, code, kind))

    def scan(self, text: str) -> GeoScan:
        """Find country/city mentions, global cues, and subnational cues.

        Alias spans are consumed so their own tokens cannot double as
        level cues ('United States' never counts as the cue 'states').
        All-uppercase aliases (US, UK, UAE, ...) match case-sensitively
        to avoid colliding with ordinary words.
        """
        words = [(m.group(0), m.start()) for m in _WORD_RE.finditer(text)]
        n = len(words)
        consumed = [False] * n
        countries: list[str] = []
        cities: list[str] = []
        aliases: list[str] = []

        i = 0
        while i < n:
            token = words[i][0]
            candidates = self._by_first.get(token.lower(), [])
            matched_len = 0
            for alias_toks, code, kind in candidates:
                if i + len(alias_toks) > n:
                    continue
                if all(
                    _token_eq(alias_toks[j], words[i + j][0]) for j in range(len(alias_toks))
                ):
                    if kind == "country":
                        countries.append(code)
                    else:
                        cities.append(code)
                        countries.append(code)
                    aliases.append(" ".join(alias_toks))
                    matched_len = len(alias_toks)
                    break
            if matched_len:
                for j in range(i, i + matched_len):
                    consumed[j] = True
                i += matched_len
            else:
                i += 1

        free_tokens = [w.lower() for (w, _), used in zip(words, consumed) if not used]
        return GeoScan(
            country_codes=tuple(dict.fromkeys(countries)),
            city_codes=tuple(dict.fromkeys(cities)),
            matched_aliases=tuple(aliases),
            global_hit=self._has_term(free_tokens, self._global_terms)
            or bool(_N_COUNTRIES_RE.search(text)),
            subnational_hit=bool(cities) or self._has_term(free_tokens, self._subnational_terms),
        )

    @staticmethod
    def _has_term(free_tokens: list[str], terms: list[tuple[str, ...]]) -> bool:
        token_set = set(free_tokens)
        for term in terms:
            if len(term) == 1:
                if term[0].lower() in token_set:
                    return True
            else:
                lowered = tuple(t.lower() for t in term)
                for k in range(len(free_tokens) - len(term) + 1):
                    if tuple(free_tokens[k : k + len(term)]) == lowered:
                        return True
        return False


def _token_eq(alias_token: str, text_token: str) -> bool:
    if alias_token.isupper() and len(alias_token) <= 4:
        return alias_token == text_token  # acronyms stay case-sensitive
    return alias_token.lower() == text_token.lower()


def load_gazetteer(path: str | Path | None = None) -> Gazetteer:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return Gazetteer(json.load(fh))
    return _default()


@lru_cache(maxsize=1)
def _default() -> Gazetteer:
    raw = resources.files("litmine").joinpath("data/gazetteer.json").read_text("utf-8")
    return Gazetteer(json.loads(raw))

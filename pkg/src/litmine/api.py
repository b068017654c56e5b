"""Read-only HTTP service over the catalog.

Endpoints (all JSON):
  GET  /api/datasets            search + faceted filtering (paginated)
  GET  /api/datasets/{entry_id} full entry with card, evidence, source
  POST /api/rag/query           embedding retrieval, grounded entries
  GET  /api/stats               corpus distributions, cached per upsert

Responses are pure views of catalog state; ingestion happens through
the CLI, never over HTTP. Errors always carry a JSON body of
{"status", "code", "message"}: 4xx for caller faults, 5xx otherwise.
"""

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from litmine.catalog import Catalog, MAX_LIMIT, SearchQuery, StorageError
from litmine.providers.base import ProviderError
from litmine.records import entry_to_data
from litmine.catalog import stats_to_data


class ApiFault(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _int_param(params, name: str, default: int | None) -> int | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ApiFault(400, "invalid_param", f"{name} must be an integer") from None


def create_app(catalog: Catalog, cors_origins: tuple[str, ...] = ("*",), ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="litmine catalog API", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.state.stats_cache = None  # (catalog.version, payload)

    @app.exception_handler(ApiFault)
    async def _fault_handler(request: Request, exc: ApiFault):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(StorageError)
    async def _storage_handler(request: Request, exc: StorageError):
        return _error(500, "storage_fault", str(exc))

    @app.exception_handler(ProviderError)
    async def _provider_handler(request: Request, exc: ProviderError):
        return _error(502, "provider_fault", str(exc))

    @app.get("/api/datasets")
    def search_datasets(request: Request):
        params = request.query_params
        query = SearchQuery(
            keywords=params.get("q", ""),
            categories=tuple(params.getlist("category")),
            sub_categories=tuple(params.getlist("sub_category")),
            countries=tuple(params.getlist("country")),
            year_from=_int_param(params, "year_from", None),
            year_to=_int_param(params, "year_to", None),
            limit=_int_param(params, "limit", 20),
            offset=_int_param(params, "offset", 0),
        )
        try:
            result = catalog.search(query, max_limit=MAX_LIMIT)
        except ValueError as exc:
            raise ApiFault(400, "invalid_param", str(exc)) from exc
        body = {
            "total_matches": result.total_matches,
            "entries": [
                {**entry_to_data(entry), "score": score} for entry, score in result.entries
            ],
        }
        return JSONResponse(
            content=body,
            headers={
                "X-Total-Matches": str(result.total_matches),
                "X-Limit": str(query.limit),
                "X-Offset": str(query.offset),
            },
        )

    @app.get("/api/datasets/{entry_id}")
    def dataset_detail(entry_id: str):
        entry = catalog.get(entry_id)
        if entry is None:
            raise ApiFault(404, "not_found", f"no catalog entry {entry_id!r}")
        return entry_to_data(entry)

    @app.post("/api/rag/query")
    async def rag_query(request: Request):
        try:
            payload = await request.json()
        except ValueError:
            raise ApiFault(400, "invalid_body", "request body must be JSON") from None
        if not isinstance(payload, dict):
            raise ApiFault(400, "invalid_body", "request body must be a JSON object")
        text = str(payload.get("text") or "")
        if not text.strip():
            raise ApiFault(400, "empty_text", "text must be non-empty")
        try:
            k = int(payload.get("k", 10))
        except (TypeError, ValueError):
            raise ApiFault(400, "invalid_param", "k must be an integer") from None
        if k < 1:
            raise ApiFault(400, "invalid_param", "k must be >= 1")
        ranked = catalog.rag_retrieve(text, k)
        return {
            "results": [
                {**entry_to_data(entry), "score": score} for entry, score in ranked
            ]
        }

    @app.get("/api/stats")
    def stats():
        cached = app.state.stats_cache
        if cached is not None and cached[0] == catalog.version:
            return cached[1]
        payload = stats_to_data(catalog.compute_stats())
        app.state.stats_cache = (catalog.version, payload)
        return payload

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

import pytest

from litmine.pipeline import run_pipeline
from litmine.providers import load_providers
from litmine.synth import build_synthetic_corpus


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    return build_synthetic_corpus(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def providers(corpus):
    return load_providers(corpus.providers_path)


@pytest.fixture(scope="session")
def run_dir(corpus, providers, tmp_path_factory):
    """A completed pipeline run over the synthetic corpus."""
    out = tmp_path_factory.mktemp("run")
    run_pipeline(corpus.root, out, providers, jobs=2)
    return out


@pytest.fixture(scope="session")
def catalog(run_dir, providers):
    from litmine.pipeline import open_catalog

    return open_catalog(run_dir, providers)


def pytest_runtest_makereport(item, call):
    # one visible pass/fail line per acceptance criterion
    if call.when == "call" and item.fspath.basename == "test_acceptance.py":
        if call.excinfo is None:
            status = "PASS"
        elif call.excinfo.errisinstance(BaseException) and call.excinfo.typename == "Skipped":
            status = "SKIP"
        else:
            status = "FAIL"
        print(f"\nACCEPTANCE {item.name}: {status}", flush=True)

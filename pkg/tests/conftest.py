import pytest

from scriptswitch.fixtures import langid_fixture
from scriptswitch.langid import build_profile


@pytest.fixture(scope="session")
def langid_data():
    return langid_fixture(seed=0, n_train=200, n_heldout=40)


@pytest.fixture(scope="session")
def profiles(langid_data):
    train, _ = langid_data
    return [build_profile(texts, lang) for lang, texts in train.items()]


@pytest.fixture(scope="session")
def small_fixture(tmp_path_factory):
    """Three-language desk fixture; returns the config path."""
    from scriptswitch.corpus import LanguageCondition as L
    from scriptswitch.fixtures import write_fixture

    root = tmp_path_factory.mktemp("fixture")
    return write_fixture(root, seed=3, scale=0.02, n_abstracts=40, n_stream=200,
                         languages=[L.ENG, L.HIN, L.TAM])


@pytest.fixture(scope="session")
def small_run(small_fixture, tmp_path_factory):
    from scriptswitch.config import load_config
    from scriptswitch.pipeline import run_experiment

    out = tmp_path_factory.mktemp("runs") / "full"
    cfg = load_config(small_fixture).with_overrides(output_dir=out)
    return cfg, run_experiment(cfg)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

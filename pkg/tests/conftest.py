import pytest


@pytest.fixture
def criterion_report(request):
    """Print one [PASS]/[FAIL] line per release criterion straight to the
    terminal (bypassing capture), then assert."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def _report(num, desc, ok, measured=""):
        tag = "PASS" if ok else "FAIL"
        line = f"[{tag}] criterion {num}: {desc}"
        if measured:
            line += f" ({measured})"
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print(f"\n{line}", flush=True)
        else:
            print(line, flush=True)
        assert ok, line

    return _report

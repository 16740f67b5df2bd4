"""Shared pytest plumbing: the acceptance-criteria summary block.

Each acceptance test records exactly one PASS/FAIL line through
`record_criterion`; the lines are replayed in the terminal summary so a
full run always ends with a visible per-criterion verdict.
"""

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(num: int, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"[criterion {num}] {verdict} - {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

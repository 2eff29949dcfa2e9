ACCEPTANCE: dict = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    """Store a criterion result; repeated calls for one criterion are combined."""
    if number in ACCEPTANCE:
        _, was, old = ACCEPTANCE[number]
        passed, detail = was and passed, f"{old}; {detail}"
    ACCEPTANCE[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))

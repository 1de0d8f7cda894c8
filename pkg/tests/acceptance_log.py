"""Collects the one-line verdicts printed at the end of a pytest run."""

LINES: list[str] = []


def record(number: int, ok: bool, seconds: float, limit: float, detail: str) -> str:
    within = seconds < limit
    verdict = "PASS" if ok and within else "FAIL"
    line = f"criterion {number}: {verdict}  ({seconds:.2f}s, limit {limit:g}s)  {detail}"
    if ok and not within:
        line += "  [over time limit]"
    LINES.append(line)
    print(line)
    return verdict

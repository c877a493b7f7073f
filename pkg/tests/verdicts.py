"""Per-criterion PASS/FAIL lines collected by the acceptance suite."""

LINES: dict[int, str] = {}


def record(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    LINES[k] = line
    print(line)

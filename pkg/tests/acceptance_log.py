"""Shared registry for acceptance verdicts, printed at the end of the session."""
RESULTS = {}


def record(num, title, ok, detail):
    RESULTS[num] = (title, bool(ok), detail)
    line = format_line(num)
    print(line)
    return line


def format_line(num):
    title, ok, detail = RESULTS[num]
    return f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}  {title}: {detail}"

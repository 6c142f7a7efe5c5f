"""Recompute the worked examples and print expected vs computed values."""
import argparse
import sys

from orlicz_lab.examples import reproduce
from orlicz_lab.io import dumps


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = parser.parse_args(argv)
    rows = reproduce()
    if args.json:
        sys.stdout.write(dumps(rows))
    else:
        width = max(len(r["example"]) for r in rows)
        for r in rows:
            mark = "ok " if r["ok"] else "BAD"
            print(f"{mark} {r['example']:<{width}}  expected {r['expected']!s:<22} computed {r['computed']}")
    return 0 if all(r["ok"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())

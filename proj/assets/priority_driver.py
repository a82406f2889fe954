"""Runs a generated priority program under the gedprog subprocess protocol.

Usage: python3 priority_driver.py PROGRAM.py

Reads {"adj1", "adj2", "w0"} from stdin, calls the program's `priority`
function (or the highest-numbered `priority_vN`), and writes
{"weights": [[...], ...]} to stdout.
"""
import json
import re
import sys


def _load(path):
    namespace = {"__name__": "priority_program"}
    with open(path, encoding="utf-8") as f:
        code = compile(f.read(), path, "exec")
    exec(code, namespace)
    if callable(namespace.get("priority")):
        return namespace["priority"]
    versions = []
    for name, value in namespace.items():
        m = re.fullmatch(r"priority_v(\d+)", name)
        if m and callable(value):
            versions.append((int(m.group(1)), value))
    if not versions:
        raise SystemExit("no priority function defined")
    return max(versions)[1]


def main():
    if len(sys.argv) != 2:
        raise SystemExit("usage: priority_driver.py PROGRAM.py")
    priority = _load(sys.argv[1])
    request = json.load(sys.stdin)
    weights = priority(request["adj1"], request["adj2"], request["w0"])
    rows = [[float(x) for x in row] for row in weights]
    sys.stdout.write(json.dumps({"weights": rows}))
    sys.stdout.flush()


if __name__ == "__main__":
    main()

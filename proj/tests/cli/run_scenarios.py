#!/usr/bin/env python3
"""Drives the ultrajet binary: acceptance scenarios, determinism, config files and exit codes."""

import argparse
import json
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def load_scenarios(path):
    groups = {}
    current = None
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            current = line.strip("[]")
            groups[current] = []
            continue
        groups[current].append(shlex.split(line))
    return groups


class Runner:
    def __init__(self, exe, schema):
        self.exe = exe
        self.validator = jsonschema.Draft202012Validator(schema)
        self.failures = []

    def run(self, args):
        p = subprocess.run([self.exe, *args], capture_output=True, text=True, timeout=600)
        return p.returncode, p.stdout, p.stderr

    def report(self, args):
        code, out, err = self.run(args)
        doc = json.loads(out) if out.strip() else None
        if doc is not None:
            errors = sorted(self.validator.iter_errors(doc), key=lambda e: e.path)
            for e in errors[:3]:
                self.fail(f"{shlex.join(args)}: schema: {e.message}")
        return code, out, err, doc

    def fail(self, msg):
        self.failures.append(msg)
        print("  FAIL", msg)

    def expect(self, ok, msg):
        if not ok:
            self.fail(msg)
        return ok


def strip_timings(text):
    doc = json.loads(text)
    doc.pop("timings", None)
    return json.dumps(doc)


def scenarios(r, groups):
    for crit, invocations in groups.items():
        ok = True
        for args in invocations:
            code, out, _, doc = r.report(args)
            good = r.expect(code == 0 and doc is not None and doc["status"] == "ok",
                            f"criterion {crit}: exit {code}: {shlex.join(args)}")
            ok = ok and good
        print(f"criterion {crit}: {len(invocations)} invocations {'ok' if ok else 'FAILED'}")


def determinism(r, groups):
    flat = [a for g in groups.values() for a in g]
    first = [r.run(["--no-timings", *a])[1] for a in flat]
    again = [r.run(["--no-timings", *a])[1] for a in flat]
    serial = [r.run(["--no-timings", "--threads", "1", *a])[1] for a in flat]
    ok = True
    for args, a, b, c in zip(flat, first, again, serial):
        ok = r.expect(a == b, f"repeated run differs: {shlex.join(args)}") and ok
        ok = r.expect(a == c, f"--threads 1 differs: {shlex.join(args)}") and ok
    timed = r.run(flat[0])[1]
    ok = r.expect(strip_timings(timed) == strip_timings(first[0]), "timings are the only difference") and ok
    print(f"determinism: {len(flat)} scenarios x 3 runs {'ok' if ok else 'FAILED'}")


def config_files(r):
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "bundle.cfg"
        cfg.write_text(
            "# diff invert bundle\n"
            "map = \"id+[0.4*x1*exp(-x1^2)]\"\n"
            "grid = -6:6:241\n"
            "tol = 1e-10\n"
            "decay-radius = 5\n"
            "no-nodes = true\n"
            "no-timings = true\n")
        code, out, _, doc = r.report(["diff", "invert", "--config", str(cfg)])
        r.expect(code == 0 and doc["config_echo"]["tol"] == "1e-10", "config values are applied")
        r.expect(doc is not None and "nodes" not in doc["results"], "config flag true sets the flag")
        r.expect(doc is not None and "timings" not in doc, "config sets global flags")

        code, out, _, doc = r.report(["diff", "invert", "--config", str(cfg), "--tol", "1e-11"])
        r.expect(code == 0 and doc["config_echo"]["tol"] == "1e-11", "command-line flag wins over config")
        r.expect(doc is not None and doc["results"]["tol"] == 1e-11, "overridden value reaches the command")

        outfile = Path(tmp) / "report.json"
        code, out, _ = r.run(["diff", "invert", "--config", str(cfg), "--out", str(outfile)])
        r.expect(code == 0 and out == "" and json.loads(outfile.read_text())["status"] == "ok", "--out writes the file")

        bad = Path(tmp) / "bad.cfg"
        bad.write_text("grid = -1:1:5\nnot a pair\n")
        code, _, err = r.run(["diff", "invert", "--map", "id+[0]", "--config", str(bad)])
        r.expect(code == 1 and "bad.cfg:2" in err, "config syntax error reports file:line")

        dup = Path(tmp) / "dup.cfg"
        dup.write_text("K = 3\nK = 4\n")
        code, _, err = r.run(["ws", "analyze", "--seq", "one", "--config", str(dup)])
        r.expect(code == 1 and "dup.cfg:2" in err, "duplicate config key is rejected")

        unknown = Path(tmp) / "unknown.cfg"
        unknown.write_text("seq = one\nbogus = 3\n")
        code, _, err = r.run(["ws", "analyze", "--config", str(unknown)])
        r.expect(code == 1 and "config line 2" in err, "unknown config key names its line")
    print(f"config files: {'ok' if not r.failures else 'see failures'}")


def exit_codes(r):
    cases = [
        (["ws", "analyze"], 1, "missing required flag"),
        (["ws", "analyze", "--seq", "one", "--K", "abc"], 1, "malformed number"),
        (["nosuch"], 1, "unknown subcommand"),
        (["ws", "analyze", "--seq", "gevrey:-1"], 1, "invalid sequence"),
        (["diff", "invert", "--map", "id+[-2*x1]", "--grid", "-1:1:5"], 1, "not a diffeomorphism"),
        (["fourier", "check", "--expr", "exp(-x1^2)", "--grid", "-6:6:241", "--xi", "-1:1:5",
          "--expect", "exp(-x1^2)"], 2, "wrong closed form"),
        (["diff", "invert", "--map", "id+[0.4*x1*exp(-x1^2)]", "--grid", "-6:6:241", "--tol", "1e-10",
          "--decay-radius", "1", "--decay-tol", "1e-8"], 2, "decay assertion"),
        (["explaw", "counterexample", "--M", "qsquare:2", "--N", "3", "--K-search", "3"], 1, "search exhausted"),
        (["--help"], 0, "help"),
    ]
    ok = True
    for args, want, what in cases:
        code, out, err = r.run(args)
        ok = r.expect(code == want, f"{what}: exit {code}, expected {want}") and ok
        if want == 2:
            doc = json.loads(out)
            ok = r.expect(doc["status"] == "assertion_failed" and doc["failures"], f"{what}: envelope") and ok
        if want == 1 and out.strip():
            doc = json.loads(out)
            ok = r.expect(doc["status"] == "error", f"{what}: error envelope") and ok
    print(f"exit codes: {len(cases)} cases {'ok' if ok else 'FAILED'}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("exe")
    ap.add_argument("scenarios")
    ap.add_argument("schema")
    a = ap.parse_args()
    r = Runner(a.exe, json.loads(Path(a.schema).read_text()))
    groups = load_scenarios(a.scenarios)
    scenarios(r, groups)
    determinism(r, groups)
    config_files(r)
    exit_codes(r)
    if r.failures:
        print(f"{len(r.failures)} failures")
        return 1
    print("all CLI checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())

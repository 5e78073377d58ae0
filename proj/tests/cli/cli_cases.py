"""End-to-end checks of the coflow command line.

usage: cli_cases.py COFLOW_BINARY CASE
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path


def run(binary, *args, cwd):
    return subprocess.run([binary, *map(str, args)], cwd=cwd, capture_output=True, text=True)


def expect(cond, message):
    if not cond:
        raise AssertionError(message)


def case_gen_deterministic(binary, tmp):
    for name in ("a.json", "b.json"):
        r = run(binary, "gen", "--seed", 1, "--coflows", 4, "--max-flows", 3, "-o", name, cwd=tmp)
        expect(r.returncode == 0, r.stderr)
    a, b = (tmp / "a.json").read_bytes(), (tmp / "b.json").read_bytes()
    expect(a == b, "gen output differs between runs")
    doc = json.loads(a)
    expect(all(c.get("release", 0) == 0 for c in doc["coflows"]), "release without --release-max")
    expect(sum(len(c["flows"]) for c in doc["coflows"]) <= 12, "too many flows")


def case_solve_verify(binary, tmp):
    run(binary, "gen", "--seed", 3, "--coflows", 3, "-o", "i.json", cwd=tmp)
    r = run(binary, "solve", "i.json", "--algo", "combined", "--tau", 6, "-o", "s.json", cwd=tmp)
    expect(r.returncode == 0, r.stderr)
    cost_line = [l for l in r.stdout.splitlines() if l.startswith("cost: ")]
    expect(len(cost_line) == 1, r.stdout)
    r = run(binary, "verify", "i.json", "s.json", cwd=tmp)
    expect(r.returncode == 0, r.stdout + r.stderr)
    expect("valid" in r.stdout, r.stdout)
    expect(cost_line[0] in r.stdout, r.stdout)


def case_fixture_greedy(binary, tmp):
    run(binary, "fixture-a1", "-o", "a1.json", "--profile-out", "p.json", cwd=tmp)
    r = run(binary, "solve", "a1.json", "--algo", "greedy", "--profile", "p.json", "-o", "s.json", cwd=tmp)
    expect(r.returncode == 0, r.stderr)
    lines = [l for l in r.stdout.splitlines() if l.startswith("coflow ")]
    expect(len(lines) == 4 and all(l.endswith(" ok") for l in lines), r.stdout)


def case_tampered(binary, tmp):
    (tmp / "i.json").write_text(json.dumps(
        {"left": 1, "right": 2, "coflows": [{"weight": 1, "flows": [{"u": 0, "v": 0}, {"u": 0, "v": 1}]}]}))
    (tmp / "s.json").write_text(json.dumps(
        {"slots": {"3": [{"coflow": 0, "u": 0, "v": 0}, {"coflow": 0, "u": 0, "v": 1}]}}))
    r = run(binary, "verify", "i.json", "s.json", cwd=tmp)
    expect(r.returncode == 1, f"exit {r.returncode}")
    expect("slot 3" in r.stdout + r.stderr, r.stdout + r.stderr)


def case_unknown_coflow(binary, tmp):
    run(binary, "gen", "--seed", 2, "-o", "i.json", cwd=tmp)
    (tmp / "s.json").write_text(json.dumps({"slots": {"1": [{"coflow": 99, "u": 0, "v": 0}]}}))
    r = run(binary, "verify", "i.json", "s.json", cwd=tmp)
    expect(r.returncode == 2, f"exit {r.returncode}")


def case_unreadable(binary, tmp):
    r = run(binary, "solve", "missing.json", cwd=tmp)
    expect(r.returncode == 2, f"exit {r.returncode}")
    r = run(binary, "solve", cwd=tmp)
    expect(r.returncode == 2, f"exit {r.returncode}")


def case_certify(binary, tmp):
    r = run(binary, "certify", "--builtin", "main", cwd=tmp)
    expect(r.returncode == 0, r.stdout)
    expect("alpha = 70/41, ratio = 140/41" in r.stdout and "tight for all x" in r.stdout, r.stdout)
    r = run(binary, "certify", "--builtin", "improved", cwd=tmp)
    expect(r.returncode == 0, r.stdout)
    expect("ratio = 497/146" in r.stdout, r.stdout)
    for name in ("release", "intgap"):
        expect(run(binary, "certify", "--builtin", name, cwd=tmp).returncode == 0, name)


def case_certify_rejects(binary, tmp):
    run(binary, "certify", "--builtin", "main", "--dump", "c.json", cwd=tmp)
    doc = json.loads((tmp / "c.json").read_text())
    doc[0]["weight"] = "0.55"
    doc[1]["weight"] = "0.44"
    (tmp / "bad.json").write_text(json.dumps(doc))
    r = run(binary, "certify", "bad.json", cwd=tmp)
    expect(r.returncode == 1, f"exit {r.returncode}: {r.stdout}")
    expect("rejected" in r.stdout, r.stdout)
    (tmp / "broken.json").write_text("[{\"form\": \"linear\"}]")
    expect(run(binary, "certify", "broken.json", cwd=tmp).returncode == 2, "malformed certificate")


def case_bench_empty(binary, tmp):
    r = run(binary, "bench", "--instances", "nothing/*.json", cwd=tmp)
    expect(r.returncode == 0, r.stderr)
    expect(r.stdout.strip() == "instance,seed,algo,tau,lambda,b,cost,opt,ratio,ms", r.stdout)


def case_bench_opt(binary, tmp):
    r = run(binary, "bench", "--gen", 6, "--coflows", 3, "--max-flows", 2, "--portfolio", "greedy+cbf6+combined",
            "--with-opt", cwd=tmp)
    expect(r.returncode == 0, r.stderr)
    rows = [l.split(",") for l in r.stdout.strip().splitlines()[1:]]
    expect(len(rows) == 18, r.stdout)
    for row in rows:
        expect(row[7] != "", f"missing opt: {row}")


def case_opt(binary, tmp):
    (tmp / "i.json").write_text(json.dumps(
        {"left": 1, "right": 1, "coflows": [{"weight": 1, "flows": [{"u": 0, "v": 0}]},
                                            {"weight": 1, "flows": [{"u": 0, "v": 0}]}]}))
    r = run(binary, "opt", "i.json", cwd=tmp)
    expect(r.returncode == 0 and "opt: 3" in r.stdout, r.stdout + r.stderr)


CASES = {name[5:]: fn for name, fn in globals().items() if name.startswith("case_")}


def main():
    binary, case = sys.argv[1], sys.argv[2]
    with tempfile.TemporaryDirectory() as d:
        try:
            CASES[case](str(Path(binary).resolve()), Path(d))
        except AssertionError as e:
            print(f"{case}: {e}")
            return 1
    print(f"{case}: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())

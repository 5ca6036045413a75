#!/usr/bin/env python3
"""End-to-end checks of the p2ode binary beyond the documented examples."""

import json
import os
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import jsonschema

BIN = os.path.abspath(sys.argv[1])
SCHEMA = json.load(open(sys.argv[2], encoding="utf-8"))
failures = []


def p2ode(*args, cwd, env=None):
    e = {k: v for k, v in os.environ.items() if not k.startswith("P2ODE_")}
    e.update(env or {})
    return subprocess.run([BIN, *args], cwd=cwd, env=e, capture_output=True, text=True, timeout=600)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + ("" if cond else f": {detail}"))
    if not cond:
        failures.append(name)


def strip_clock(j):
    if isinstance(j, dict):
        return {k: strip_clock(v) for k, v in j.items() if k != "wall_clock_s"}
    if isinstance(j, list):
        return [strip_clock(v) for v in j]
    return j


def write(path, text):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def main():
    tmp = tempfile.mkdtemp()
    write(f"{tmp}/bad.ode", 'a = 1\nb = 1\nF1 = "X0^3 + Q"\nF2 = "A2^3"\n')
    write(f"{tmp}/dup.ode", "a = 1\na = 2\n")
    write(f"{tmp}/lines.ode", "name = lines\n")
    write(f"{tmp}/wrong_degree.ode", 'a = 1\nb = 1\nF1 = "X0^2"\nF2 = "A2^3"\n')

    r = p2ode("verify", "--ode", "bad.ode", "--curve", "x", cwd=tmp)
    check("parse error carries file:line:column", r.returncode == 3 and "bad.ode:3:14:" in r.stderr, r.stderr)
    r = p2ode("lines", "--ode", "dup.ode", cwd=tmp)
    check("duplicate key reported at its line", r.returncode == 3 and "dup.ode:2:1:" in r.stderr, r.stderr)
    r = p2ode("verify", "--ode", "lines.ode", "--curve", "x + * y", cwd=tmp)
    check("inline expression error position", r.returncode == 3 and "1:5:" in r.stderr, r.stderr)
    r = p2ode("lines", "--ode", "wrong_degree.ode", cwd=tmp)
    check("domain error text surfaced", r.returncode == 3 and r.stderr.startswith("error: "), r.stderr)
    r = p2ode("witness", "--a", "2", "--b", "1", cwd=tmp)
    check("witness range checked", r.returncode == 3 and "a >= 3" in r.stderr, r.stderr)

    r = p2ode("screen", "--ode", "lines.ode", "--primes", "4", cwd=tmp)
    check("non-prime rejected", r.returncode == 3 and "4 is not prime" in r.stderr, r.stderr)
    r = p2ode("screen", "--ode", "lines.ode", cwd=tmp, env={"P2ODE_PRIMES": "3,9"})
    check("non-prime in environment rejected", r.returncode == 3 and "9 is not prime" in r.stderr, r.stderr)
    r = p2ode("--json", "screen", "--ode", "lines.ode", cwd=tmp, env={"P2ODE_PRIMES": "3"})
    j = json.loads(r.stdout)
    check("environment primes used", j["primes"] == [3] and len(j["per_prime"][0]["found"]) == 13)
    r = p2ode("--json", "screen", "--ode", "lines.ode", "--primes", "5", cwd=tmp, env={"P2ODE_PRIMES": "3"})
    j = json.loads(r.stdout)
    check("flag overrides environment", j["primes"] == [5] and len(j["per_prime"][0]["found"]) == 31)

    env = {"P2ODE_JOURNAL": f"{tmp}/env.jsonl", "P2ODE_PRIMES": "3"}
    r1 = p2ode("screen", "--ode", "lines.ode", cwd=tmp, env=env)
    r2 = p2ode("screen", "--ode", "lines.ode", cwd=tmp, env=env)
    lines = open(f"{tmp}/env.jsonl", encoding="utf-8").read().splitlines()
    check("journal from environment, duplicate noticed",
          len(lines) == 1 and "already certified" not in r1.stderr and "already certified" in r2.stderr,
          f"{len(lines)} lines; {r2.stderr}")
    r3 = p2ode("screen", "--ode", "lines.ode", "--r", "2", cwd=tmp, env=env)
    check("different r is a new record", len(open(f"{tmp}/env.jsonl").read().splitlines()) == 2, r3.stderr)

    # Reproducibility and schema.
    outs = []
    for threads in ("1", "4"):
        d = tempfile.mkdtemp()
        r = p2ode("--json", "--threads", threads, "witness", "--a", "3", "--b", "1", "--r", "2", "--seed", "42",
                  cwd=d)
        outs.append((d, r))
    (d1, a), (d2, b) = outs
    ja, jb = json.loads(a.stdout), json.loads(b.stdout)
    check("witness exit code 0", a.returncode == 0 and b.returncode == 0, a.stderr)
    check("JSON identical modulo wall clock", strip_clock(ja) == strip_clock(jb))
    check("JSON text identical modulo wall clock",
          [l for l in a.stdout.splitlines() if "wall_clock_s" not in l] ==
          [l for l in b.stdout.splitlines() if "wall_clock_s" not in l])
    try:
        for c in (ja["web_certificate"], ja["ode_certificate"]):
            jsonschema.validate(c, SCHEMA)
        for line in open(f"{d1}/certificates.jsonl", encoding="utf-8"):
            jsonschema.validate(json.loads(line), SCHEMA)
        jsonschema.validate(json.loads(p2ode("--json", "screen", "--ode", "lines.ode", "--primes", "3", "--fibers",
                                             cwd=tmp).stdout), SCHEMA)
        check("certificates match schema", True)
    except jsonschema.ValidationError as e:
        check("certificates match schema", False, e.message)
    odes = ja["ode_certificate"]
    check("zero curves over F5 and F7",
          [p["prime"] for p in odes["per_prime"]] == [5, 7] and all(
              p["status"] == "ok" and not p["found"] and "semantics" in p for p in odes["per_prime"]))
    r = p2ode("--json", "screen", "--ode", ja["ode_file"], "--r", "1", cwd=d1)
    check("witness file reparses to the certified equation",
          json.loads(r.stdout)["content_hash"] == odes["content_hash"], r.stderr)
    r = p2ode("tangency", "--ode", ja["ode_file"], cwd=d1)
    check("witness bidegree recovered", "recovered from tangencies O(3,1)" in r.stdout, r.stdout + r.stderr)

    # Concurrent writers: every distinct record lands exactly once.
    d = tempfile.mkdtemp()
    seeds = ["1", "2", "1", "3", "2", "1"]
    with ThreadPoolExecutor(len(seeds)) as ex:
        list(ex.map(lambda s: p2ode("--journal", "j.jsonl", "witness", "--a", "3", "--b", "1", "--r", "1", "--seed", s,
                                    "--out", f"w{s}.ode", cwd=d), seeds))
    recs = [json.loads(l) for l in open(f"{d}/j.jsonl", encoding="utf-8")]
    keys = [(r["kind"], r["content_hash"], r["r"], tuple(r["primes"])) for r in recs]
    check("concurrent witnesses: each record once", len(keys) == len(set(keys)) == 6, f"{len(keys)} records")

    # Tangency counts along lifted lines and fibers.
    ok = True
    for a_ in range(-2, 5):
        for b_ in range(-2, 5):
            j = json.loads(p2ode("--json", "tangency", "--bidegree", f"{a_},{b_}", cwd=tmp).stdout)
            ok &= j["lifted_line"] == a_ - 1 and j["fiber"] == b_ - 1
    check("tangency counts a-1 and b-1", ok)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

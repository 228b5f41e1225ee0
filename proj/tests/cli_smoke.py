"""Command-line checks: every verb, output schemas, exit codes, reruns."""

import csv
import io
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


SQUARES = '{"family":"polynomial","params":{"coefficients":[0,0,1]}}'

r = run("generate", "--spec", "rudin_shapiro", "--count", "6")
check("generate csv", r.returncode == 0 and [int(x["a_k"]) for x in rows(r.stdout)] == [0, 1, 2, 4, 5, 7], r.stderr)

r = run("--format", "json", "generate", "--spec", '{"family":"floor_power","params":{"c":1.5}}', "--count", "5")
check("generate json", r.returncode == 0 and json.loads(r.stdout)["terms"] == [1, 2, 5, 8, 11], r.stderr)

with tempfile.TemporaryDirectory() as d:
    spec_file = Path(d) / "spec.json"
    spec_file.write_text(SQUARES)
    r = run("generate", "--spec", "@" + str(spec_file), "--count", "3")
    check("generate from spec file", r.returncode == 0 and "3,9" in r.stdout, r.stderr)

r = run("energy", "--spec", "kronecker", "--checkpoints", "2,3,100")
out = rows(r.stdout)
check("energy csv header", r.stdout.startswith("N,E,backend\n"))
check("energy values", [x["E"] for x in out] == ["6", "19", "666700"], r.stdout)

r = run("energy", "--spec", "kronecker", "--checkpoints", "10,20,30", "--backend", "bruteforce")
check("energy bruteforce backend", r.returncode == 0 and all(x["backend"] == "bruteforce" for x in rows(r.stdout)))

r = run("discrepancy", "--spec", "kronecker", "--alpha", "1/2", "--checkpoints", "1,2,3")
check("discrepancy single alpha", r.returncode == 0 and r.stdout.startswith("N,Dstar,NDstar\n"), r.stderr)
check("discrepancy D_3 at 1/2", abs(float(rows(r.stdout)[2]["Dstar"]) - 0.5) < 1e-15, r.stdout)

r = run("discrepancy", "--spec", "kronecker", "--checkpoints", "64,128,256", "--alphas", "5", "--seed", "9")
check("discrepancy metric csv", r.returncode == 0 and r.stdout.startswith("N,median_NDstar,q25,q75\n"), r.stderr)
r2 = run("discrepancy", "--spec", "kronecker", "--checkpoints", "64,128,256", "--alphas", "5", "--seed", "9")
check("discrepancy metric reproducible", r.stdout == r2.stdout)

r = run("--format", "json", "discrepancy", "--spec", "kronecker", "--alpha", "golden", "--checkpoints", "2,10,100")
check("discrepancy json", r.returncode == 0 and json.loads(r.stdout)["alpha_numerator"].startswith("0x9e3779b97f4a7c15"))

r = run("expsum", "--spec", SQUARES, "--checkpoints", "4,8,16", "--tol", "1e-6")
check("expsum csv header", r.stdout.startswith("N,I,fourth_moment,holder_bound,panels\n"), r.stderr)
check("expsum hoelder rows", r.returncode == 0 and all(float(x["I"]) >= float(x["holder_bound"]) for x in rows(r.stdout)))

r = run("expsum", "--spec", SQUARES, "--checkpoints", "4,8,512", "--panel-cap", "65536")
check("expsum over panel budget exits 3", r.returncode == 3, f"{r.returncode} {r.stderr}")

r = run("rs-verify", "--max-n", "8", "--max-l", "10000")
check("rs-verify passes", r.returncode == 0 and "FAIL" not in r.stdout, r.stdout + r.stderr)

r = run("--format", "json", "verify", "--suite", "energy")
check("verify json summary", r.returncode == 0 and json.loads(r.stdout)["passed"] is True, r.stderr)

check("usage error exits 2", run("energy").returncode == 2)
check("unknown verb exits 2", run("frobnicate").returncode == 2)
check("bad spec exits 2", run("generate", "--spec", "nope", "--count", "3").returncode == 2)
check("bad checkpoints exit 2", run("energy", "--spec", "kronecker", "--checkpoints", "5,3").returncode == 2)
check("bad format exits 2", run("--format", "xml", "generate", "--spec", "kronecker", "--count", "3").returncode == 2)
check("overflow exits 3", run("generate", "--spec", '{"family":"lacunary","params":{"ratio":2}}', "--count", "100").returncode == 3)
check("window exceeded exits 3",
      run("energy", "--spec", '{"family":"explicit_list","params":{"terms":[0,100000000]}}', "--checkpoints", "1,2",
          "--backend", "convolution").returncode == 3)
check("version flag", run("--version").stdout.strip() == "0.1.0")

with tempfile.TemporaryDirectory() as d:
    first, second = Path(d) / "a", Path(d) / "b"
    r = run("--out", str(first), "--checkpoints", "128,256,512,1024", "--alphas", "6", "--seed", "77",
            "experiment", "--spec", "thue_morse")
    check("experiment writes artifacts", r.returncode == 0 and all(
        (first / n).exists() for n in ("report.json", "energy.csv", "median.csv", "holder.csv")), r.stderr)
    rep = json.loads((first / "report.json").read_text())
    check("report schema", rep["schema_version"] == 1 and rep["config"]["seed"] == 77
          and rep["config"]["spec"] == {"family": "thue_morse", "params": {}})
    r = run("--out", str(second), "experiment", "--from-report", str(first / "report.json"))
    again = json.loads((second / "report.json").read_text())
    rep.pop("timestamps")
    again.pop("timestamps")
    check("experiment rerun is identical", r.returncode == 0 and rep == again
          and (first / "median.csv").read_text() == (second / "median.csv").read_text())
    check("from-report with spec is a usage error",
          run("experiment", "--spec", "kronecker", "--from-report", str(first / "report.json")).returncode == 2)

if failures:
    print(f"{len(failures)} CLI check(s) failed")
    sys.exit(1)
print("all CLI checks passed")

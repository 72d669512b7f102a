"""CLI contract: exit codes, JSON schema conformance, profile/check-cd round trip.

usage: cli_contract.py <cdd binary> <schema dir>
"""
import json
import math
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, SCHEMAS = sys.argv[1], sys.argv[2]
failures = []


def schema(name):
    with open(os.path.join(SCHEMAS, name)) as f:
        return json.load(f)


def run(*args):
    p = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=300)
    return p.returncode, p.stdout, p.stderr


def check(label, cond, detail=""):
    print(("PASS " if cond else "FAIL ") + label + ("" if cond else "  " + detail))
    if not cond:
        failures.append(label)


def check_json(label, args, schema_name, code=0):
    rc, out, err = run(*args, "--format", "json")
    check(label + " exit", rc == code, f"rc={rc} stderr={err.strip()}")
    if rc != code:
        return None
    doc = json.loads(out)
    try:
        jsonschema.validate(doc, schema(schema_name))
        check(label + " schema", True)
    except jsonschema.ValidationError as e:
        check(label + " schema", False, e.message)
    return doc


def read_csv(path):
    rows = [l for l in open(path) if not l.startswith("#")][1:]
    return [tuple(float(v) for v in l.split(",")) for l in rows]


bound = "bound_result.schema.json"
doc = check_json("bound zhong-yang", ["bound", "--inequality", "poincare", "--K", "0", "--N", "5", "--D", "2"], bound)
if doc:
    check("bound zhong-yang value", abs(doc["value"] - math.pi ** 2 / 4) < 1e-6 and doc["case_label"] == "1c")
doc = check_json("bound p-poincare", ["bound", "--inequality", "p-poincare", "--K", "0", "--N", "4", "--D", "2.418399", "--p", "3"], bound)
if doc:
    check("bound p-poincare value", abs(doc["value"] - 2.0) < 1e-5)
check_json("bound anomalous", ["bound", "--inequality", "poincare", "--K", "0", "--N", "-0.5", "--D", "1"], bound)
check_json("bound log-sobolev", ["bound", "--inequality", "log-sobolev", "--K", "-1", "--N", "inf", "--D", "2"], bound)
check_json("bound infinite", ["bound", "--inequality", "poincare", "--K", "0", "--N", "inf", "--D", "inf"], bound)

rc, _, err = run("bound", "--inequality", "poincare", "--K", "-1", "--N", "-2", "--D", "6")
check("proviso exit 2", rc == 2 and "l_delta" in err, err)
rc, _, err1 = run("bound", "--inequality", "poincare", "--K", "0", "--N", "0.5", "--D", "1")
rc2, _, err2 = run("bound", "--inequality", "poincare", "--K", "0", "--N", "1.5", "--D", "1")
check("N ranges rejected with distinct messages", rc == 2 and rc2 == 2 and err1 != err2, err1 + err2)
rc, _, _ = run("bound", "--inequality", "poincare", "--K", "zero", "--N", "3", "--D", "1")
check("malformed flag exit 1", rc == 1)
rc, _, _ = run("bound", "--inequality", "poincare", "--K", "0", "--N", "3", "--D", "1", "--bogus")
check("unknown flag exit 1", rc == 1)

sweep = "sweep_result.schema.json"
doc = check_json("sweep h regime (a)", ["sweep", "--param", "h", "--range", "0:2:9", "--K", "1", "--N", "3", "--d", "1"], sweep)
if doc:
    check("sweep h regime (a) verdict", doc["verdict"] == "PASS")
doc = check_json("sweep h regime (c)", ["sweep", "--param", "h", "--range", "0:2:5", "--K", "1", "--N", "-1", "--d", "1"], sweep)
if doc:
    check("sweep h regime (c) verdict", doc["verdict"] == "PASS")
doc = check_json("sweep d", ["sweep", "--param", "d", "--range", "1:4:4", "--K", "0", "--N", "2", "--h", "0"], sweep)
if doc:
    ok = all(abs(r["lambda"] - math.pi ** 2 / r["d"] ** 2) < 1e-7 * r["lambda"] for r in doc["rows"])
    check("sweep d values pi^2/d^2", ok)
check_json("sweep out of domain", ["sweep", "--param", "h", "--range", "0:20:3", "--K", "0", "--N", "-0.5", "--d", "1"], sweep, code=3)

with tempfile.TemporaryDirectory() as tmp:
    table = os.path.join(tmp, "sweep.csv")
    rc, out, _ = run("sweep", "--param", "h", "--range", "0:1:3", "--K", "1", "--N", "3", "--d", "1", "--out", table)
    rows = [l for l in open(table) if not l.startswith("#")]
    check("sweep table file", rc == 0 and rows[0].strip() == "h_or_d,lambda,residual,verdict_flag" and len(rows) == 4 and "PASS" in out)

    dens = os.path.join(tmp, "density.csv")
    rc, _, _ = run("profile", "--K", "1", "--N", "3", "--D", "2", "--h", "0.3", "--emit", "density", "--out", dens)
    cd = "cd_report.schema.json"
    check_json("round trip diff", ["check-cd", "--density", dens, "--K", "1", "--N", "3"], cd)
    check_json("round trip midpoint", ["check-cd", "--density", dens, "--K", "1", "--N", "3", "--mode", "midpoint"], cd)

    eg = os.path.join(tmp, "eg.csv")
    with open(eg, "w") as f:
        f.write("x,value\n")
        for i in range(401):
            x = -2 + 4 * i / 400
            f.write(f"{x!r},{math.exp(x * x / 2)!r}\n")
    doc = check_json("counterexample flagged", ["check-cd", "--density", eg, "--K", "1", "--N", "inf"], cd, code=4)
    if doc:
        check("counterexample violation ~2", abs(doc["max_violation"] - 2) < 1e-3)
    rc, _, _ = run("check-cd", "--density", os.path.join(tmp, "missing.csv"), "--K", "0", "--N", "2")
    check("unreadable csv exit 1", rc == 1)

    ef = os.path.join(tmp, "ef.csv")
    rc, _, _ = run("profile", "--K", "2", "--N", "3", "--D", "1", "--emit", "eigenfunction", "--out", ef)
    v = read_csv(ef)
    changes = sum(1 for a, b in zip(v, v[1:]) if (a[1] > 0) != (b[1] > 0))
    check("eigenfunction one sign change", rc == 0 and changes == 1, f"changes={changes}")

    iso = os.path.join(tmp, "iso.csv")
    rc, _, _ = run("profile", "--K", "0", "--N", "2", "--D", "1", "--emit", "isoperimetric", "--out", iso)
    check("isoperimetric uniform constant 1", rc == 0 and all(abs(t[1] - 1) < 1e-9 for t in read_csv(iso)))

    bg = os.path.join(tmp, "bg.csv")
    rc, _, _ = run("profile", "--K", "-1", "--N", "inf", "--D", "2", "--emit", "bg-supremand", "--out", bg)
    head = [l for l in open(bg) if l.startswith("# B_minus")][0]
    b_plus = float(head.split("B_plus=")[1].split()[0])
    curve_max = max(t[1] for t in read_csv(bg) if t[0] > 0)
    check("bg-supremand max matches B_plus", rc == 0 and abs(curve_max - b_plus) <= 1e-4 * b_plus, f"{curve_max} vs {b_plus}")

    cfg = os.path.join(tmp, "run.cfg")
    with open(cfg, "w") as f:
        f.write("format=json\ntol=1e-6\n")
    rc, out, _ = run("--config", cfg, "bound", "--inequality", "poincare", "--K", "2", "--N", "3", "--D", "2")
    try:
        jsonschema.validate(json.loads(out), schema(bound))
        ok = rc == 0
    except Exception:
        ok = False
    check("config file applies", ok)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)

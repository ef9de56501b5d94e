"""Drive the exset CLI end to end and validate every JSON output against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

exe, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
failures = 0


def run(*args, expect=0):
    proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True)
    if proc.returncode != expect:
        raise RuntimeError(f"{args[0]} exited {proc.returncode}: {proc.stderr.strip()}")
    return proc


def check(name, path, schema):
    global failures
    try:
        doc = json.loads(pathlib.Path(path).read_text())
        jsonschema.validate(doc, schemas[schema])
        print(f"ok   {name}")
        return doc
    except Exception as e:  # noqa: BLE001
        failures += 1
        print(f"FAIL {name}: {e}")
        return None


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    model = root / "configs" / "model_se2.cfg"
    grid = tmp / "f.xgrd"
    run("simulate", "--config", model, "--seed", 5, "--stream", 2, "--out", grid)
    again = tmp / "g.xgrd"
    run("simulate", "--config", model, "--seed", 5, "--stream", 2, "--out", again)
    if grid.read_bytes() != again.read_bytes():
        failures += 1
        print("FAIL simulate is not reproducible")
    if grid.read_bytes()[:4] != b"XGRD":
        failures += 1
        print("FAIL simulate output lacks the XGRD magic")

    run("measure", "--field", grid, "--levels", "-1,0,1", "--perimeter", "--out", tmp / "m.json")
    m = check("measure", tmp / "m.json", "measure")
    if m and not (m["volumes"][0] >= m["volumes"][1] >= m["volumes"][2]):
        failures += 1
        print("FAIL measure volumes not non-increasing in the level")

    run("variance", "--config", root / "configs" / "model_exp1.cfg", "--level", 0, "--lattice", 0.125,
        "--matrix", "-1,0,1", "--windowed", 2, "--out", tmp / "v.json")
    v = check("variance", tmp / "v.json", "variance")
    if v and abs(v["sigma2"]["value"] - 0.34657359027997264) > 1e-6:
        failures += 1
        print("FAIL variance sigma2 for the exponential model")
    run("variance", "--config", model, "--level", 0.5, "--surface", "--out", tmp / "s.json")
    check("variance --surface", tmp / "s.json", "variance")

    run("test", "--field", grid, "--null", model, "--levels", "-0.6745,0,0.6745", "--alpha", 0.05,
        "--block", 11, "--out", tmp / "t.json")
    check("test", tmp / "t.json", "test_report")

    raw = tmp / "raw"
    proc = subprocess.run([exe, "mc", "--config", str(root / "configs" / "smoke.cfg"), "--out",
                           str(tmp / "mc.json"), "--raw", str(raw), "--threads", "2"],
                          capture_output=True, text=True)
    if proc.returncode not in (0, 3):
        failures += 1
        print(f"FAIL mc exited {proc.returncode}: {proc.stderr.strip()}")
    mc = check("mc", tmp / "mc.json", "mc_report")
    if mc and len(list(raw.glob("window_*.csv"))) != len(mc["windows"]):
        failures += 1
        print("FAIL mc raw tables missing")

    bad = tmp / "bad.xgrd"
    bad.write_bytes(b"XGRE" + grid.read_bytes()[4:])
    proc = subprocess.run([exe, "measure", "--field", str(bad), "--levels", "0"], capture_output=True, text=True)
    if proc.returncode == 0 or "offset 0" not in proc.stderr:
        failures += 1
        print(f"FAIL corrupted magic not reported with its offset: {proc.stderr.strip()}")
    else:
        print("ok   corrupted magic")

print(f"{failures} failure(s)")
sys.exit(1 if failures else 0)

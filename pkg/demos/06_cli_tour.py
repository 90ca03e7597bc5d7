"""A tour of the ``loewner-basin`` command line tool.

Every library capability is reachable from the CLI with JSON on stdout,
so results can be piped, archived, and reproduced.  This script drives
the CLI as a subprocess the same way a shell user would: analyze a
field, evolve states, build a schedule, evaluate limit maps, run the
whole verification battery, and write a results directory whose
manifest carries content digests for reproducibility.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

CLI = [sys.executable, "-m", "loewner_basin.cli"]


def run(*args):
    proc = subprocess.run(CLI + list(args), capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


print("=" * 72)
print("1. analyze: hypothesis verdicts and bounds for a built-in field")
print("=" * 72)
code, out, _ = run("analyze", "--builtin", "koebe-1d", "--directions", "64")
payload = json.loads(out)
print(f"  exit code {code}, status {payload['status']}")
ver = payload["result"]["hypotheses"]["verdicts"]
for key, verdict in ver.items():
    print(f"    {key:28s} {verdict}")
print(f"  mass-ratio bound ell = {payload['result']['hypotheses']['ell']}")

print()
print("=" * 72)
print("2. flow: evolve one state of the Koebe field")
print("=" * 72)
code, out, _ = run("flow", "--builtin", "koebe-1d", "--t", "1.0",
                   "--points", "[[0.5]]")
payload = json.loads(out)
re_im = payload["result"]["images"][0][0]
print(f"  exit code {code}; phi_(0,1)(0.5) = {re_im[0]:.9f} "
      f"{re_im[1]:+.2e} i")

print()
print("=" * 72)
print("3. schedule: accepted budget for the 1-d identity field")
print("=" * 72)
code, out, _ = run("schedule", "--builtin", "constant-linear",
                   "--param", "dim=1", "--horizon", "5")
payload = json.loads(out)
sched = payload["result"]["schedule"]
print(f"  exit code {code}; u = {[round(x, 9) for x in sched['u']]}")
print(f"  mu = {sched['mu']:.9f}, nu = {sched['nu']:.9f}, "
      f"accepted = {sched['accepted']}")

print()
print("=" * 72)
print("4. a rejection travels as JSON with exit code 2")
print("=" * 72)
code, out, _ = run("schedule", "--builtin", "constant-linear",
                   "--param", "matrix=[[1,0],[0,2]]", "--ell", "1.2",
                   "--horizon", "3")
payload = json.loads(out)
print(f"  exit code {code}, status {payload['status']}")
print(f"  reason: {payload['result']['reason']}")
print("  Understating the mass ratio fails the budget test instead of")
print("  silently producing wrong maps.")

print()
print("=" * 72)
print("5. chain: limit-map value of the Koebe field at t = 0")
print("=" * 72)
code, out, _ = run("chain", "--builtin", "koebe-1d", "--t", "0",
                   "--points", "[[0.5]]", "--horizon", "30")
payload = json.loads(out)
val = payload["result"]["values"][0][0]
print(f"  exit code {code}; f_0(0.5) = {val[0]:.9f} {val[1]:+.2e} i "
      f"(closed form: 2)")

print()
print("=" * 72)
print("6. verify: the one-command consistency battery")
print("=" * 72)
code, out, _ = run("verify", "--builtin", "koebe-1d", "--directions", "4",
                   "--intervals", "0:1", "--horizon", "26")
payload = json.loads(out)
checks = payload["result"]["checks"]
for name in sorted(checks):
    print(f"    {name:24s} passed = {checks[name]['passed']}")
print(f"  exit code {code}; all_passed = {payload['result']['all_passed']}")

print()
print("=" * 72)
print("7. out-directories carry a digest manifest")
print("=" * 72)
with tempfile.TemporaryDirectory() as tmp:
    outdir = pathlib.Path(tmp) / "results"
    code, out, _ = run("flow", "--builtin", "koebe-1d", "--t", "1.0",
                       "--points", "[[0.5]]", "--dense", "--out",
                       str(outdir))
    names = sorted(p.name for p in outdir.iterdir())
    manifest = json.loads((outdir / "manifest.json").read_text())
    print(f"  exit code {code}; files: {names}")
    print(f"  manifest digests: {sorted(manifest['files'])}")
    print(f"  config sha256: {manifest['config_sha256'][:16]}...")
print("  Re-running the same command writes byte-identical artifacts,")
print("  so the digests make runs comparable across machines.")

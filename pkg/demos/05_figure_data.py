"""Regenerate the two headline data sets through the command surface.

Everything the command line can do is also callable in-process; main()
takes an argv list and returns the exit code.  This script produces the
beat-envelope data (three beat periods plus a zoomed start window) and
the first-order rate data (amplitude check against hbar*gamma*Omega),
then reads the manifests back and prints the recorded checks.
"""
import json
from pathlib import Path

from nclab import main

out = Path("demo_figures")

rc = main(["figure", "1", "--out", str(out / "fig1")])
print("figure 1 exit code:", rc)
with open(out / "fig1" / "figure1_manifest.json") as fh:
    man = json.load(fh)
for check in man["checks"]:
    print("  %-22s %-4s %.9g" % (check["name"], "pass" if check["passed"] else "FAIL", check["value"]))
print("  zoom starts:", man["measured_constants"]["zoom_start_xi1"], man["measured_constants"]["zoom_start_xi2"])

rc = main(["figure", "2", "--out", str(out / "fig2")])
print("figure 2 exit code:", rc)
with open(out / "fig2" / "figure2_manifest.json") as fh:
    man = json.load(fh)
for check in man["checks"]:
    print("  %-28s %-4s %.9g" % (check["name"], "pass" if check["passed"] else "FAIL", check["value"]))

# A small ratio sweep showing the quadratic shrink of the first-order
# window error; index.json aggregates the per-cell manifests.
rc = main(["sweep", "--ratios", "0.001,0.002,0.004", "--grid-points", "1000", "--out", str(out / "sweep")])
print("sweep exit code:", rc)
with open(out / "sweep" / "index.json") as fh:
    index = json.load(fh)
for cell in index["cells"]:
    print("  ratio %-6g first-order error %.6g" % (cell["ratio"], cell["first_order_rel_err"]))
for check in index["checks"]:
    print("  %-28s %s" % (check["name"], "pass" if check["passed"] else "FAIL"))

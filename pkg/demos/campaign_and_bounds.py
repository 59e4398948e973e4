"""Run a small verification campaign, pin a certificate, and read the bound verdicts."""

import tempfile
from pathlib import Path

from ettlab import guarantee_classifier, main3_lower_bound
from ettlab.harness import ALL_CHECKS, check_instance, emit_certificate, revalidate_certificate, run_campaign
from ettlab.multigraph import fat_triangle

report, certs = run_campaign("random:200:6:3:7", ALL_CHECKS, seed=7)
print(report.to_json())

inst = check_instance(fat_triangle(3), ALL_CHECKS, seed=3)
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "ft3.json"
    emit_certificate(inst.certificate(), path)
    print("certificate re-checks:", bool(revalidate_certificate(path)))

for delta, mu, chi in [(4, 1, 5), (39, 3, 41), (200, 20, 220)]:
    rep = guarantee_classifier(delta, mu, chi)
    met = [v.name for v in rep.verdicts if v.guaranteed]
    print(f"Delta={delta} mu={mu} chi={chi}: guaranteed by {met or 'nothing'}")

print("order forced when k = Delta + 1:", main3_lower_bound(40, 39))

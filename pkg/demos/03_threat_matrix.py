"""Run the scripted attack suite twice: once against the healthy build, then
against a build with the PKCE check disabled to show the suite catching the
regression.

    python demos/03_threat_matrix.py
"""

from vcbridge.faults import FaultInjection
from vcbridge.threats import ThreatHarness, run_all


def main():
    print("=== healthy build ===")
    print(run_all().to_markdown())
    print()
    print("=== PKCE check disabled (fault injection) ===")
    report = ThreatHarness(FaultInjection(skip_pkce_check=True)).run_all()
    print(report.to_markdown())
    print()
    print("suite verdict on faulty build:",
          "pass" if report.all_blocked else "REGRESSION DETECTED")


if __name__ == "__main__":
    main()

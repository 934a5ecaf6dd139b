"""`threats` command line: run the scripted attack suite and print the
traceability report."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from vcbridge.faults import FaultInjection
from vcbridge.threats import ThreatHarness, ThreatReport


@click.group()
def main():
    """Security scenario suite for the credential-verification bridge."""


@main.command()
@click.option("--scenario", default=None,
              help="Run a single scenario (e.g. AT3 or AT.3).")
@click.option("--report", "report_path", default=None, type=click.Path(),
              help="Write the markdown report to this path.")
@click.option("--fault", type=click.Choice(["pkce", "tenant-filter"]),
              default=None,
              help="Inject a regression to prove the suite detects it.")
def run(scenario, report_path, fault):
    """Execute the attack scenarios; exit non-zero if any is not blocked."""
    faults = FaultInjection(
        skip_pkce_check=(fault == "pkce"),
        skip_tenant_filter=(fault == "tenant-filter"),
    )
    harness = ThreatHarness(faults)
    if scenario:
        outcome = harness.run_scenario(scenario)
        report = ThreatReport(outcomes=[outcome])
    else:
        report = harness.run_all()
    click.echo(report.to_markdown())
    if report_path:
        Path(report_path).write_text(report.to_markdown() + "\n")
        click.echo(f"report written to {report_path}", err=True)
    sys.exit(0 if report.all_blocked else 1)


if __name__ == "__main__":
    main()

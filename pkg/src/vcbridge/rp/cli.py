"""`rp` command line: drive a full login against a running bridge.

Starts a loopback HTTP listener on the configured redirect URI, opens the
authorize URL (or prints it), waits for the provider callback, finishes the
login, and prints the validated claims as JSON.
"""

from __future__ import annotations

import json
import threading
import webbrowser
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qsl, urlsplit

import click
import httpx

from vcbridge.rp.client import RpConfig, begin_login, finish_login


class _CallbackHandler(BaseHTTPRequestHandler):
    captured: dict | None = None

    def do_GET(self):  # noqa: N802 (http.server API)
        query = dict(parse_qsl(urlsplit(self.path).query))
        type(self).captured = query
        self.send_response(200)
        self.send_header("Content-Type", "text/html")
        self.end_headers()
        self.wfile.write(b"<html><body>Login received. You can close this tab."
                         b"</body></html>")

    def log_message(self, *args):
        pass


def wait_for_callback(redirect_uri: str, timeout: float = 300.0) -> dict:
    parts = urlsplit(redirect_uri)
    host = parts.hostname or "127.0.0.1"
    port = parts.port or 80

    class Handler(_CallbackHandler):
        captured = None

    server = HTTPServer((host, port), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        done = threading.Event()

        def poll():
            import time
            deadline = time.time() + timeout
            while time.time() < deadline and Handler.captured is None:
                time.sleep(0.05)
            done.set()

        poller = threading.Thread(target=poll, daemon=True)
        poller.start()
        done.wait(timeout + 1)
        if Handler.captured is None:
            raise click.ClickException("timed out waiting for the provider callback")
        return Handler.captured
    finally:
        server.shutdown()


@click.group()
def main():
    """Reference relying party for the credential-verification bridge."""


@main.command()
@click.option("--issuer", required=True, help="Provider base URL.")
@click.option("--client-id", required=True)
@click.option("--client-secret", default=None)
@click.option("--scopes", default="openid",
              help="Comma- or space-separated scope list.")
@click.option("--redirect-uri", default="http://127.0.0.1:8912/cb",
              show_default=True)
@click.option("--open-browser/--no-open-browser", default=True)
def login(issuer, client_id, client_secret, scopes, redirect_uri, open_browser):
    """Run one authorization-code login and print the validated claims."""
    scope_list = tuple(s for s in scopes.replace(",", " ").split() if s)
    config = RpConfig(issuer_url=issuer, client_id=client_id,
                      client_secret=client_secret, redirect_uri=redirect_uri,
                      scopes=scope_list)
    with httpx.Client() as http:
        authorize_url, pending = begin_login(config, http)
        click.echo(f"Open this URL to authenticate:\n  {authorize_url}", err=True)
        if open_browser:
            webbrowser.open(authorize_url)
        callback = wait_for_callback(redirect_uri)
        claims = finish_login(config, callback, pending, http)
    click.echo(json.dumps(claims, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()

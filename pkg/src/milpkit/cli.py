"""Command-line entry points.

Exit codes: 1 parse error, 2 validation error, 3 bad script step,
4 I/O error, 5 bind failure.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .lpformat import LpParseError, parse_lp, write_lp
from .model import validate
from .omt import AnswerError, SessionError, answer, current_question, emit_model, load_tree, replay, start_session
from .owl import default_descriptor, write_owl
from .reporting import classification_payload, classification_table
from .verification import run_encoding_suite

EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_SCRIPT = 3
EXIT_IO = 4
EXIT_BIND = 5


@click.group()
def main():
    """MILP modelling toolkit: classify, elicit, verify, export, serve."""


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_IO)


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_IO)


@main.command()
@click.argument("model_file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report.")
def classify(model_file, as_json):
    """Tag every constraint of an LP file and report detected patterns."""
    text = _read_file(model_file)
    try:
        model = parse_lp(text)
    except LpParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(EXIT_PARSE)
    report = validate(model)
    if not report.ok:
        for v in report.violations:
            click.echo(f"validation error: [{v.code}] {v.message}", err=True)
        sys.exit(EXIT_VALIDATION)
    payload = classification_payload(model)
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(classification_table(payload), nl=False)


@main.command()
@click.option("--script", "script_path", type=click.Path(),
              help="JSON answer script (session document or bare answer list).")
@click.option("--out", "out_path", type=click.Path(), help="Output LP file (default: stdout).")
@click.option("--name", default="elicited", help="Model name for the LP header.")
def elicit(script_path, out_path, name):
    """Build a model by walking the question tree."""
    tree = load_tree()
    if script_path is not None:
        raw = _read_file(script_path)
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as e:
            click.echo(f"parse error: {e}", err=True)
            sys.exit(EXIT_PARSE)
        script = doc["transcript"] if isinstance(doc, dict) else doc
        try:
            model = replay(tree, script, name)
        except (AnswerError, SessionError) as e:
            click.echo(f"script error: {e}", err=True)
            sys.exit(EXIT_SCRIPT)
        _write_output(write_lp(model), out_path)
        return

    session = start_session(tree)
    click.echo("Answer with JSON, e.g. {\"choice\": 0} or "
               "{\"navigation\": \"FINISH_BRANCH\"}.", err=True)
    while not session.finished:
        q = current_question(session)
        click.echo(f"\n[{q['node']}] {q['question']}", err=True)
        for c in q["schema"].get("choices", ()):
            click.echo(f"  {c['index']}: {c['label']}", err=True)
        for p in q["schema"].get("params", ()):
            flags = " (optional)" if p.get("optional") else ""
            click.echo(f"  param {p['name']}: {p['type']}{flags}", err=True)
        line = click.prompt(">", err=True, default="", show_default=False)
        if not line.strip():
            continue
        try:
            answer(session, json.loads(line))
        except json.JSONDecodeError as e:
            click.echo(f"not JSON: {e}", err=True)
        except AnswerError as e:
            click.echo(f"invalid answer: {e}", err=True)
    try:
        model = emit_model(session, name)
    except SessionError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    _write_output(write_lp(model), out_path)


@main.command("verify-encodings")
@click.option("--max-n", default=10, show_default=True,
              help="Largest instance size per encoding family.")
@click.option("--inject-bad-m", is_flag=True, hidden=True,
              help="Add a deliberately broken big-M case (self-test).")
def verify_encodings(max_n, inject_bad_m):
    """Certify every logic encoding against brute-force enumeration."""
    results = run_encoding_suite(max_n=max_n, inject_bad_m=inject_bad_m)
    failures = 0
    for r in results:
        status = "PASS" if r.equal else "FAIL"
        click.echo(f"{status}  {r.name}")
        if not r.equal:
            failures += 1
            for ce in r.counterexamples:
                rendered = ", ".join(f"{k}={v}" for k, v in sorted(ce.items()))
                click.echo(f"      counterexample: {rendered}")
    click.echo(f"{len(results) - failures}/{len(results)} encodings verified")
    if failures:
        sys.exit(1)


@main.command("export-ontology")
@click.option("--out", "out_path", type=click.Path(), default="milp.owl",
              show_default=True, help="Output file ('-' for stdout).")
def export_ontology(out_path):
    """Write the modelling ontology as OWL/XML."""
    _write_output(write_owl(default_descriptor()), out_path)


@main.command()
@click.option("--port", type=int, default=None, help="Port (default: $OMT_PORT or 8000).")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, host):
    """Run the HTTP/JSON service."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("OMT_PORT", "8000"))
    try:
        uvicorn.run(create_app(), host=host, port=port, log_level="info")
    except OSError as e:
        click.echo(f"bind error: {e}", err=True)
        sys.exit(EXIT_BIND)


if __name__ == "__main__":
    main()

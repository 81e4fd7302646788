"""Command-line front door.

Every subcommand is a thin client of the wire API: with --url it talks to a
running server, otherwise it spins the FastAPI app up in-process behind an
ASGI transport. Identical payloads either way, so CLI results and API
results cannot drift apart.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import click
import httpx


class ApiClient:
    def __init__(self, url: Optional[str] = None):
        self._url = url.rstrip("/") if url else None
        self._app = None
        if not url:
            from .service.app import create_app

            self._app = create_app()

    def call(self, method: str, path: str, payload: Optional[dict] = None, params: Optional[dict] = None) -> dict:
        if self._url:
            with httpx.Client(base_url=self._url, timeout=600.0) as client:
                response = client.request(method, path, json=payload, params=params)
        else:
            import asyncio

            async def _go():
                transport = httpx.ASGITransport(app=self._app)
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://teachloop.local", timeout=600.0
                ) as client:
                    return await client.request(method, path, json=payload, params=params)

            response = asyncio.run(_go())
        if response.status_code >= 400:
            try:
                detail = response.json()
            except ValueError:
                detail = {"detail": response.text}
            raise click.ClickException(
                f"{detail.get('error', 'error')}: {detail.get('detail', response.text)}"
            )
        return response.json()


def _read(path: Optional[str]) -> Optional[str]:
    return Path(path).read_text(encoding="utf-8") if path else None


def _load_config(config_path: Optional[str], seed: Optional[int] = None) -> dict:
    """Config file (JSON of synthesis/session knobs) plus a seed override."""
    config = json.loads(Path(config_path).read_text(encoding="utf-8")) if config_path else {}
    if seed is not None:
        config["seed"] = seed
    return config


def _emit(data, as_json: bool, human) -> None:
    if as_json:
        click.echo(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        human(data)


@click.group()
@click.option("--url", default=None, help="Remote service URL (default: in-process).")
@click.pass_context
def main(ctx, url):
    """Pattern-rule teaching workbench."""
    ctx.obj = ApiClient(url)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def ingest(api: ApiClient, corpus_path, out_path, as_json):
    """Parse and annotate a corpus file; print or write the normalized records."""
    data = api.call("POST", "/api/tools/ingest", {"corpus_text": _read(corpus_path)})
    lines = "\n".join(json.dumps(s, ensure_ascii=False) for s in data["sentences"]) + "\n"
    if out_path:
        Path(out_path).write_text(lines, encoding="utf-8")
        click.echo(f"wrote {data['count']} annotated sentences to {out_path}")
    elif as_json:
        click.echo(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        click.echo(lines, nl=False)


@main.command()
@click.option("--pattern", required=True)
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", default=None, type=click.Path(exists=True))
@click.option("--wildcard-cap", default=None, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def match(api: ApiClient, pattern, corpus_path, lexicon_path, wildcard_cap, as_json):
    """List corpus sentences matching a pattern, with their spans."""
    data = api.call(
        "POST",
        "/api/tools/match",
        {
            "pattern": pattern,
            "corpus_text": _read(corpus_path),
            "lexicon_text": _read(lexicon_path),
            "wildcard_cap": wildcard_cap,
        },
    )

    def human(d):
        for m in d["matches"]:
            words = [t["t"] for t in m["sentence"]["tokens"]]
            for span in m["spans"]:
                marked = " ".join(
                    f"[{w}]" if span["start"] <= i < span["end"] else w
                    for i, w in enumerate(words)
                )
                click.echo(f"{m['sentence']['id']}: {marked}")
        click.echo(f"{len(d['matches'])} matching sentence(s)")

    _emit(data, as_json, human)


@main.command()
@click.option("--a", "text_a", required=True)
@click.option("--b", "text_b", required=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def diff(api: ApiClient, text_a, text_b, as_json):
    """Word-level insert/delete alignment printed as two aligned rows."""
    data = api.call("POST", "/api/tools/diff", {"a": text_a, "b": text_b})

    def human(d):
        top, bottom = [], []
        for run in d["runs"]:
            for tok in run["tokens"]:
                width = max(len(tok), 1)
                if run["op"] == "keep":
                    top.append(tok.ljust(width))
                    bottom.append(tok.ljust(width))
                elif run["op"] == "delete":
                    top.append(tok.ljust(width))
                    bottom.append("-".ljust(width))
                else:
                    top.append("-".ljust(width))
                    bottom.append(tok.ljust(width))
        click.echo("a: " + " ".join(top))
        click.echo("b: " + " ".join(bottom))
        click.echo(f"cost: {d['cost']}")

    _emit(data, as_json, human)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotations_path", required=True, type=click.Path(exists=True),
              help="JSON file: {sentence_id: [label, ...]}")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def synth(api: ApiClient, corpus_path, labels_path, lexicon_path, annotations_path, config_path, seed, as_json):
    """Learn pattern rules per label from an annotations file."""
    data = api.call(
        "POST",
        "/api/tools/synthesize",
        {
            "corpus_text": _read(corpus_path),
            "labels_text": _read(labels_path),
            "lexicon_text": _read(lexicon_path),
            "annotations": json.loads(_read(annotations_path)),
            "config": _load_config(config_path, seed),
        },
    )

    def human(d):
        for label, patterns in d["patterns"].items():
            click.echo(f"{label}:")
            for p in patterns:
                click.echo(
                    f"  {p['pattern']}  f1={p['f1']:.3f} p={p['precision']:.3f} "
                    f"r={p['recall']:.3f} support={p['support']}"
                )

    _emit(data, as_json, human)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotations_path", required=True, type=click.Path(exists=True))
@click.option("--oracle", "oracle_path", required=True, type=click.Path(exists=True),
              help="JSON file: {sentence_id: [label, ...]} for the held-out pool")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def eval(api: ApiClient, corpus_path, labels_path, lexicon_path, annotations_path, oracle_path, config_path, seed, as_json):
    """Train on the annotations and score against oracle labels."""
    data = api.call(
        "POST",
        "/api/tools/evaluate",
        {
            "corpus_text": _read(corpus_path),
            "labels_text": _read(labels_path),
            "lexicon_text": _read(lexicon_path),
            "annotations": json.loads(_read(annotations_path)),
            "oracle": json.loads(_read(oracle_path)),
            "config": _load_config(config_path, seed),
        },
    )

    def human(d):
        m = d["micro"]
        click.echo(f"micro: P={m['precision']:.3f} R={m['recall']:.3f} F1={m['f1']:.3f}")
        for label, lm in d["per_label"].items():
            click.echo(f"  {label}: P={lm['precision']:.3f} R={lm['recall']:.3f} F1={lm['f1']:.3f}")

    _emit(data, as_json, human)


@main.command()
@click.option("--session", "session_id", default=None, help="Existing session id.")
@click.option("--fixture", default=None, help="Bundled fixture name (demo, sim).")
@click.option("--corpus", "corpus_path", default=None, type=click.Path(exists=True))
@click.option("--labels", "labels_path", default=None, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", default=None, type=click.Path(exists=True))
@click.option("--sentence", "sentence_id", required=True)
@click.option("--label", "label_keys", multiple=True, help="Label(s) for the sentence before generating.")
@click.option("--client", "client_kind", type=click.Choice(["mock", "remote"]), default="mock")
@click.option("--transcript", "transcript_path", default=None, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def cf(api: ApiClient, session_id, fixture, corpus_path, labels_path, lexicon_path,
       sentence_id, label_keys, client_kind, transcript_path, config_path, seed, as_json):
    """Generate counterfactuals for a labeled sentence."""
    if session_id is None:
        req = {
            "fixture": fixture,
            "corpus_path": corpus_path and str(Path(corpus_path).resolve()),
            "labels_path": labels_path and str(Path(labels_path).resolve()),
            "lexicon_path": lexicon_path and str(Path(lexicon_path).resolve()),
            "client": {"kind": client_kind, "seed": seed},
            "config": _load_config(config_path, seed),
        }
        summary = api.call("POST", "/api/sessions", req)
        session_id = summary["session_id"]
        if label_keys:
            api.call(
                "POST",
                f"/api/sessions/{session_id}/labels",
                {"sentence_id": sentence_id, "labels": list(label_keys)},
            )
        api.call("POST", f"/api/sessions/{session_id}/retrain")
    data = api.call("POST", f"/api/sessions/{session_id}/counterfactuals", {"sentence_id": sentence_id})

    def human(records):
        for r in records:
            click.echo(f"{r['id']} [{r['target_label']}] {r['text']}")
            click.echo(f"    rule: {r['pattern']}  phrase: {r['included_phrase']}")
        click.echo(f"{len(records)} counterfactual(s); session {session_id}")

    _emit(data, as_json, human)
    if transcript_path:
        Path(transcript_path).write_text(
            json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )


@main.command()
@click.option("--fixture", default="sim", show_default=True)
@click.option("--seeds", default=10, show_default=True, type=int)
@click.option("--rounds", default=5, show_default=True, type=int)
@click.option("--budget", default=8, show_default=True, type=int)
@click.option("--condition", type=click.Choice(["both", "with_cf", "without_cf"]), default="both")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def simulate(api: ApiClient, fixture, seeds, rounds, budget, condition, config_path, as_json):
    """Scripted annotator loop; compares with/without counterfactuals."""
    payload = {
        "fixture": fixture,
        "seeds": list(range(seeds)),
        "rounds": rounds,
        "budget": budget,
        "condition": condition,
    }
    if config_path:
        payload["config"] = _load_config(config_path)
    data = api.call("POST", "/api/simulate", payload)

    def fmt(value):
        return f"{value:>8.3f}" if value is not None else f"{'-':>8}"

    def human(d):
        click.echo(f"{'seed':>4}  {'with_cf':>8}  {'without':>8}  result")
        for report in d["reports"]:
            conditions = report["conditions"]
            w = conditions.get("with_cf", {}).get("final_micro_f1")
            wo = conditions.get("without_cf", {}).get("final_micro_f1")
            verdict = ""
            if w is not None and wo is not None:
                verdict = "win" if w >= wo else "loss"
            click.echo(f"{report['seed']:>4}  {fmt(w)}  {fmt(wo)}  {verdict}")
        if condition == "both":
            click.echo(f"with_cf >= without_cf on {d['wins']}/{d['seeds']} seeds")

    _emit(data, as_json, human)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--sessions-dir", default=None, type=click.Path())
def serve(host, port, sessions_dir):
    """Run the teaching service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(sessions_dir), host=host, port=port)


if __name__ == "__main__":
    main()

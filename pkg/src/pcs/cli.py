"""pcs command line: batch entry point over the core package.

Exit codes:
    0  success
    1  internal error (store write failures, unexpected conditions)
    2  usage error (bad flags, missing query)
    3  query rejected (parse errors, provider 4xx, inconsistent inputs)
    4  transport error (provider unreachable after retries)
    5  no signal (retrieval held no dated citation edges)
    6  snapshot corruption (checksum or id mismatch)
    7  not found (unknown patent id, missing snapshot)
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import __version__
from .client import (
    FetchPolicy,
    PatentsViewClient,
    RetrievalResult,
    forward_citation_query,
    normalize_patent_id,
    replay_retrieval,
)
from .errors import (
    CacheMissError,
    CorruptSnapshotError,
    EmptyTableError,
    InconsistentInputError,
    IntegrityError,
    InvalidRecordError,
    NoSignalError,
    NotFoundError,
    PcsError,
    PersistenceError,
    QueryError,
    QueryRejectedError,
    ReplayMismatchError,
    TransportError,
)
from .diffusion import build_profile
from .output import (
    diffusion_csv,
    diffusion_payload,
    diffusion_table,
    render_json,
    seminal_csv,
    seminal_payload,
    seminal_table,
    snapshots_table,
    spectrum_csv,
    spectrum_payload,
    spectrum_table,
)
from .pipeline import analyze_retrieval, cited_metadata
from .query import Query, parse_advanced, parse_keyword, query_hash
from .store import SnapshotStore, resolve_snapshot

EXIT_USAGE = 2
EXIT_QUERY = 3
EXIT_TRANSPORT = 4
EXIT_NO_SIGNAL = 5
EXIT_CORRUPTION = 6
EXIT_NOT_FOUND = 7
EXIT_INTERNAL = 1

_EXIT_CODES: list[tuple[type[PcsError], int]] = [
    (CorruptSnapshotError, EXIT_CORRUPTION),
    (IntegrityError, EXIT_CORRUPTION),
    (CacheMissError, EXIT_NOT_FOUND),
    (NotFoundError, EXIT_NOT_FOUND),
    (NoSignalError, EXIT_NO_SIGNAL),
    (EmptyTableError, EXIT_NO_SIGNAL),
    (TransportError, EXIT_TRANSPORT),
    (QueryRejectedError, EXIT_QUERY),
    (QueryError, EXIT_QUERY),
    (InvalidRecordError, EXIT_QUERY),
    (InconsistentInputError, EXIT_QUERY),
    (ReplayMismatchError, EXIT_QUERY),
    (PersistenceError, EXIT_INTERNAL),
]


def exit_code_for(exc: PcsError) -> int:
    for exc_type, code in _EXIT_CODES:
        if isinstance(exc, exc_type):
            return code
    return EXIT_INTERNAL


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PcsError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exit_code_for(exc))

    return wrapper


def _query_options(fn):
    fn = click.option("--keyword", "keyword", default=None, help="Free-text keyword phrase.")(fn)
    fn = click.option(
        "--advanced", "advanced", default=None, help="Advanced JSON query criteria."
    )(fn)
    return fn


def _source_options(fn):
    fn = click.option(
        "--replay",
        "replay",
        default=None,
        metavar="SNAPSHOT",
        help="Replay a recorded snapshot (id, id prefix, or directory path).",
    )(fn)
    fn = click.option("--live", "live", is_flag=True, help="Fetch live from the provider.")(fn)
    fn = click.option(
        "--store",
        "store_path",
        envvar="PCS_STORE",
        default="snapshots",
        show_default=True,
        metavar="DIR",
        help="Snapshot store root.",
    )(fn)
    return fn


def _output_options(fn):
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv", "table"]),
        default="table",
        show_default=True,
    )(fn)
    fn = click.option("--out", "out", type=click.Path(dir_okay=False), default=None)(fn)
    return fn


def _build_query(keyword: str | None, advanced: str | None) -> Query | None:
    if keyword is not None and advanced is not None:
        raise click.UsageError("give exactly one of --keyword or --advanced")
    if keyword is not None:
        return parse_keyword(keyword)
    if advanced is not None:
        return parse_advanced(advanced)
    return None


def _make_client(store: SnapshotStore, mode: str) -> PatentsViewClient:
    return PatentsViewClient(store=store, mode=mode)


def _load_retrieval(
    keyword: str | None,
    advanced: str | None,
    replay: str | None,
    live: bool,
    store_path: str,
) -> RetrievalResult:
    """Resolve the query/source flag combination into a retrieval."""
    if live and replay:
        raise click.UsageError("--live and --replay are mutually exclusive")
    store = SnapshotStore(store_path)
    query = _build_query(keyword, advanced)

    if replay is not None:
        snapshot = resolve_snapshot(replay, store)
        if query is not None and query_hash(query) != snapshot.id:
            raise ReplayMismatchError(
                f"snapshot {snapshot.id[:12]} was recorded for a different query"
            )
        return replay_retrieval(snapshot)

    if query is None:
        raise click.UsageError("a query is required: give --keyword or --advanced")
    if not live:
        # default source: replay by query hash if recorded, otherwise require --live
        try:
            snapshot = store.get(query_hash(query))
        except CacheMissError:
            raise click.UsageError(
                "no recorded snapshot for this query; pass --live to fetch or --replay SNAPSHOT"
            )
        return replay_retrieval(snapshot)
    client = _make_client(store, "live")
    return client.fetch_patents(query)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(__version__, prog_name="pcs")
def main():
    """Patent citation spectroscopy toolkit.

    Runs patent searches, aggregates the cited references of the retrieved
    patents by grant year, de-trends each year against its centered 5-year
    median, scales by the top patent's share, and reports the peak as the
    technology area's most likely foundational patent.
    """


@main.command()
@_query_options
@_source_options
@_output_options
@click.option("--top-k", "top_k", default=5, show_default=True, help="Runner-up years to keep.")
@_handle_errors
def spectrum(keyword, advanced, replay, live, store_path, fmt, out, top_k):
    """Compute the citation-year spectrum for a query."""
    result = _load_retrieval(keyword, advanced, replay, live, store_path)
    outcome = analyze_retrieval(result, top_k=top_k)
    if outcome.no_signal or outcome.spectrum is None:
        raise NoSignalError("retrieval held no dated citation edges; broaden the query")
    if fmt == "json":
        _emit(render_json(spectrum_payload(outcome.spectrum)), out)
    elif fmt == "csv":
        _emit(spectrum_csv(outcome.spectrum), out)
    else:
        _emit(spectrum_table(outcome.spectrum), out)


@main.command()
@_query_options
@_source_options
@_output_options
@click.option("--top-k", "top_k", default=5, show_default=True, help="Runner-up years to keep.")
@_handle_errors
def seminal(keyword, advanced, replay, live, store_path, fmt, out, top_k):
    """Identify the most likely foundational patent for a query."""
    result = _load_retrieval(keyword, advanced, replay, live, store_path)
    outcome = analyze_retrieval(result, top_k=top_k)
    if outcome.no_signal or outcome.seminal is None:
        raise NoSignalError("retrieval held no dated citation edges; broaden the query")
    title = cited_metadata(result).get(outcome.seminal.patent_id, {}).get("title")
    if fmt == "json":
        _emit(render_json(seminal_payload(outcome.seminal, title=title)), out)
    elif fmt == "csv":
        _emit(seminal_csv(outcome.seminal), out)
    else:
        _emit(seminal_table(outcome.seminal, title=title), out)


@main.command()
@click.argument("patent_id")
@_source_options
@_output_options
@_handle_errors
def diffusion(patent_id, replay, live, store_path, fmt, out):
    """Country-by-year spread of the patents citing PATENT_ID."""
    if live and replay:
        raise click.UsageError("--live and --replay are mutually exclusive")
    pid = normalize_patent_id(patent_id)
    store = SnapshotStore(store_path)
    if replay is not None:
        snapshot = resolve_snapshot(replay, store)
        result = replay_retrieval(snapshot)
    elif live:
        client = _make_client(store, "live")
        result = client.fetch_forward_citations(pid)
    else:
        snapshot = store.get(query_hash(forward_citation_query(pid)))
        result = replay_retrieval(snapshot)
    profile = build_profile(pid, result.patents)
    if fmt == "json":
        _emit(render_json(diffusion_payload(profile)), out)
    elif fmt == "csv":
        _emit(diffusion_csv(profile), out)
    else:
        _emit(diffusion_table(profile), out)


@main.command()
@_query_options
@click.option(
    "--store",
    "store_path",
    envvar="PCS_STORE",
    default="snapshots",
    show_default=True,
    metavar="DIR",
)
@click.option("--forward-citations", "forward_of", default=None, metavar="PATENT_ID",
              help="Record the patents citing PATENT_ID instead of a search query.")
@click.option("--per-page", "per_page", default=1000, show_default=True)
@_handle_errors
def fetch(keyword, advanced, store_path, forward_of, per_page):
    """Fetch live results and record them as a replayable snapshot."""
    store = SnapshotStore(store_path)
    client = _make_client(store, "live")
    policy = FetchPolicy(per_page=per_page)
    if forward_of is not None:
        if keyword is not None or advanced is not None:
            raise click.UsageError("--forward-citations cannot be combined with a query")
        query = forward_citation_query(forward_of)
        result = client.fetch_forward_citations(forward_of, policy)
    else:
        query = _build_query(keyword, advanced)
        if query is None:
            raise click.UsageError("a query is required: give --keyword or --advanced")
        result = client.fetch_patents(query, policy)
    snapshot_id = client.record_snapshot(query, result, store)
    click.echo(
        f"recorded {result.provenance.patents_received} patents "
        f"({result.provenance.page_count} pages)",
        err=True,
    )
    click.echo(snapshot_id)


@main.group()
def snapshots():
    """Inspect the snapshot store."""


@snapshots.command("list")
@click.option(
    "--store",
    "store_path",
    envvar="PCS_STORE",
    default="snapshots",
    show_default=True,
    metavar="DIR",
)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="table", show_default=True
)
@_handle_errors
def snapshots_list(store_path, fmt):
    """List recorded snapshots, newest first."""
    summaries = SnapshotStore(store_path).list()
    if fmt == "json":
        click.echo(render_json({"snapshots": summaries}), nl=False)
    else:
        click.echo(snapshots_table(summaries), nl=False)


@snapshots.command("show")
@click.argument("snapshot_ref")
@click.option(
    "--store",
    "store_path",
    envvar="PCS_STORE",
    default="snapshots",
    show_default=True,
    metavar="DIR",
)
@_handle_errors
def snapshots_show(snapshot_ref, store_path):
    """Show one snapshot's metadata."""
    snapshot = resolve_snapshot(snapshot_ref, SnapshotStore(store_path))
    meta = snapshot.meta()
    meta.pop("page_sha256")
    click.echo(render_json(meta), nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option(
    "--store",
    "store_path",
    envvar="PCS_STORE",
    default="snapshots",
    show_default=True,
    metavar="DIR",
)
@click.option("--ui-dist", "ui_dist", default=None, help="Directory of built UI assets to serve at /.")
def serve(host, port, store_path, ui_dist):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(store_root=store_path, static_dir=ui_dist)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()

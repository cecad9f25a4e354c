"""CLI behavior: formats, exit codes, determinism under replay."""

import csv
import io
import json
import random
import shutil

import pytest
from click.testing import CliRunner

from pcs import cli
from pcs.client import PatentsViewClient
from pcs.store import SnapshotStore

from .wire import ScriptedTransport, paged, route_key, wire_page, wire_patent

ADVANCED_541 = '{"cpc_subgroup_id":"Y02E10V541"}'
ADVANCED_542 = '{"cpc_subgroup_id":"Y02E10V542"}'


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(cli.main, args, catch_exceptions=False, **kwargs)


class TestSpectrumCommand:
    def test_replay_peak_names_seminal_patent(self, runner, fixture_store, manifest):
        result = invoke(
            runner,
            [
                "spectrum",
                "--advanced", ADVANCED_541,
                "--replay", manifest["Y02E10V541"]["snapshot_id"],
                "--store", fixture_store,
                "--format", "json",
            ],
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        peak = max(payload["points"], key=lambda p: p["pcs"])
        assert peak["top_patent_id"] == "4335266"
        assert peak["year"] == 1982

    def test_no_query_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(cli.main, ["spectrum", "--store", str(tmp_path)])
        assert result.exit_code == 2

    def test_csv_and_json_agree(self, runner, fixture_store, manifest):
        snapshot_id = manifest["Y02E10V541"]["snapshot_id"]
        base = ["spectrum", "--advanced", ADVANCED_541, "--replay", snapshot_id,
                "--store", fixture_store]
        as_json = json.loads(invoke(runner, base + ["--format", "json"]).stdout)
        as_csv = list(csv.DictReader(io.StringIO(invoke(runner, base + ["--format", "csv"]).stdout)))
        assert len(as_csv) == len(as_json["points"])
        for row, point in zip(as_csv, as_json["points"]):
            assert int(row["year"]) == point["year"]
            assert int(row["c_total"]) == point["c_total"]
            assert float(row["f"]) == point["f"]
            assert float(row["pcs"]) == point["pcs"]

    def test_replay_by_directory_path(self, runner, fixture_store, manifest):
        snapshot_dir = f"{fixture_store}/{manifest['Y02E10V541']['snapshot_id']}"
        result = invoke(
            runner,
            ["spectrum", "--replay", snapshot_dir, "--store", fixture_store, "--format", "csv"],
        )
        assert result.exit_code == 0
        assert result.stdout.startswith("year,c_total,median5,f,top_patent_id,top_count,pcs")

    def test_replay_mismatched_query_rejected(self, runner, fixture_store, manifest):
        result = runner.invoke(
            cli.main,
            [
                "spectrum",
                "--advanced", ADVANCED_542,
                "--replay", manifest["Y02E10V541"]["snapshot_id"],
                "--store", fixture_store,
            ],
        )
        assert result.exit_code == cli.EXIT_QUERY
        assert "different query" in result.stderr

    def test_unknown_snapshot_not_found(self, runner, tmp_path):
        result = runner.invoke(
            cli.main,
            ["spectrum", "--advanced", ADVANCED_541, "--replay", "feed", "--store", str(tmp_path)],
        )
        assert result.exit_code == cli.EXIT_NOT_FOUND

    def test_malformed_advanced_query(self, runner, tmp_path):
        result = runner.invoke(
            cli.main, ["spectrum", "--advanced", "{", "--store", str(tmp_path)]
        )
        assert result.exit_code == cli.EXIT_QUERY
        assert "offset" in result.stderr

    def test_corrupt_snapshot_distinct_exit_code(self, runner, fixture_store, manifest, tmp_path):
        snapshot_id = manifest["Y02E10V541"]["snapshot_id"]
        shutil.copytree(f"{fixture_store}/{snapshot_id}", tmp_path / snapshot_id)
        page = tmp_path / snapshot_id / "pages" / "1.json"
        page.write_bytes(page.read_bytes()[:-5])
        result = runner.invoke(
            cli.main,
            ["spectrum", "--advanced", ADVANCED_541, "--replay", snapshot_id,
             "--store", str(tmp_path)],
        )
        assert result.exit_code == cli.EXIT_CORRUPTION
        assert "pages/1.json" in result.stderr

    def test_no_signal_exit_code(self, runner, tmp_path, monkeypatch):
        # a recorded retrieval whose citations all lack grant dates
        corpus = [
            wire_patent("9000001", "2010-01-01", cited=[("8000000", None, None)]),
            wire_patent("9000002", "2011-01-01", cited=[]),
        ]
        store = SnapshotStore(tmp_path)
        _record(store, ADVANCED_541, corpus)
        result = runner.invoke(
            cli.main,
            ["spectrum", "--advanced", ADVANCED_541, "--store", str(tmp_path)],
        )
        assert result.exit_code == cli.EXIT_NO_SIGNAL
        assert "broaden" in result.stderr


def _record(store, advanced_text, corpus):
    from pcs.query import parse_advanced

    query = parse_advanced(advanced_text)
    transport = ScriptedTransport({route_key(query): paged(corpus, 100)})
    client = PatentsViewClient(
        transport=transport,
        base_url="https://example.test",
        store=store,
        sleep=lambda s: None,
        rng=random.Random(0),
        now=lambda: "2026-08-01T00:00:00Z",
    )
    from pcs.client import FetchPolicy

    result = client.fetch_patents(query, FetchPolicy(per_page=100, rate_limit=10_000.0))
    return client.record_snapshot(query, result, store)


class TestSeminalCommand:
    def test_dye_sensitized_snapshot(self, runner, fixture_store, manifest):
        result = invoke(
            runner,
            [
                "seminal",
                "--advanced", ADVANCED_542,
                "--replay", manifest["Y02E10V542"]["snapshot_id"],
                "--store", fixture_store,
                "--format", "json",
            ],
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["patent_id"] == "4927721"
        assert payload["title"] == "Photo-electrochemical cell"

    def test_table_format_shows_title(self, runner, fixture_store, manifest):
        result = invoke(
            runner,
            ["seminal", "--advanced", ADVANCED_541,
             "--replay", manifest["Y02E10V541"]["snapshot_id"],
             "--store", fixture_store],
        )
        assert result.exit_code == 0
        assert "4335266" in result.stdout
        assert "heterojunction solar cell" in result.stdout


class TestDiffusionCommand:
    def test_replay_totals(self, runner, fixture_store, manifest):
        result = invoke(
            runner,
            ["diffusion", "4335266",
             "--replay", manifest["forward_citations"]["snapshot_id"],
             "--store", fixture_store, "--format", "json"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["totals"]["citing_patents"] == 151
        assert payload["inventor_tallies"]["JP"] == 56

    def test_resolves_snapshot_by_query_hash_without_replay_flag(
        self, runner, fixture_store
    ):
        result = invoke(
            runner, ["diffusion", "US4,335,266", "--store", fixture_store, "--format", "csv"]
        )
        assert result.exit_code == 0
        assert result.stdout.startswith("year,country,citing_patents")

    def test_unknown_patent_not_found(self, runner, tmp_path):
        result = runner.invoke(cli.main, ["diffusion", "1", "--store", str(tmp_path)])
        assert result.exit_code == cli.EXIT_NOT_FOUND


class TestSnapshotsCommand:
    def test_list_empty_store(self, runner, tmp_path):
        result = invoke(runner, ["snapshots", "list", "--store", str(tmp_path / "none")])
        assert result.exit_code == 0
        assert "id" in result.stdout

    def test_list_fixture_store(self, runner, fixture_store, manifest):
        result = invoke(runner, ["snapshots", "list", "--store", fixture_store])
        assert result.exit_code == 0
        assert manifest["Y02E10V541"]["snapshot_id"][:12] in result.stdout

    def test_show_by_prefix(self, runner, fixture_store, manifest):
        snapshot_id = manifest["Y02E10V542"]["snapshot_id"]
        result = invoke(runner, ["snapshots", "show", snapshot_id[:10], "--store", fixture_store])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["id"] == snapshot_id


class TestFetchCommand:
    def test_fetch_records_replayable_snapshot(self, runner, tmp_path, monkeypatch):
        corpus = [
            wire_patent("9000001", "2010-01-01", cited=[("8000000", "1990-05-01", None)]),
            wire_patent("9000002", "2011-01-01", cited=[("8000000", "1990-05-01", None)]),
        ]

        def fake_client(store, mode):
            from pcs.query import parse_advanced

            query = parse_advanced(ADVANCED_541)
            transport = ScriptedTransport({route_key(query): paged(corpus, 100)})
            return PatentsViewClient(
                transport=transport,
                base_url="https://example.test",
                store=store,
                mode=mode,
                sleep=lambda s: None,
                rng=random.Random(0),
                now=lambda: "2026-08-01T00:00:00Z",
            )

        monkeypatch.setattr(cli, "_make_client", fake_client)
        fetched = invoke(
            runner, ["fetch", "--advanced", ADVANCED_541, "--store", str(tmp_path)]
        )
        assert fetched.exit_code == 0
        snapshot_id = fetched.stdout.strip()
        assert len(snapshot_id) == 64
        assert "recorded 2 patents" in fetched.stderr

        replayed = invoke(
            runner,
            ["spectrum", "--advanced", ADVANCED_541, "--store", str(tmp_path),
             "--format", "csv"],
        )
        assert replayed.exit_code == 0
        assert "8000000" in replayed.stdout


class TestDeterminism:
    @pytest.mark.parametrize("fmt", ["json", "csv", "table"])
    def test_repeated_replay_runs_are_byte_identical(
        self, runner, fixture_store, manifest, fmt
    ):
        args = [
            "spectrum", "--advanced", ADVANCED_541,
            "--replay", manifest["Y02E10V541"]["snapshot_id"],
            "--store", fixture_store, "--format", fmt,
        ]
        first = invoke(runner, args).stdout
        second = invoke(runner, args).stdout
        assert first == second

    def test_out_file_matches_stdout(self, runner, fixture_store, manifest, tmp_path):
        out_path = tmp_path / "spectrum.json"
        args = [
            "spectrum", "--advanced", ADVANCED_541,
            "--replay", manifest["Y02E10V541"]["snapshot_id"],
            "--store", fixture_store, "--format", "json",
        ]
        printed = invoke(runner, args).stdout
        written = invoke(runner, args + ["--out", str(out_path)])
        assert written.exit_code == 0
        assert out_path.read_text() == printed

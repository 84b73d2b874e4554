import json

import pytest
from click.testing import CliRunner

from framewright.cli import main
from framewright.conditions import ConditionLabel
from framewright.review import EditKind
from framewright.store import Workbench
from helpers import write_demo_inputs


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def env(tmp_path):
    inputs = write_demo_inputs(tmp_path / "inputs")
    return {"inputs": inputs, "data_dir": tmp_path / "data"}


def fw(runner, env, *args):
    return runner.invoke(main, ["--data-dir", str(env["data_dir"]), *args])


def import_all(runner, env, with_human=False):
    for kind in ("framebank", "corpus", "preannot"):
        result = fw(runner, env, "import", kind, str(env["inputs"][kind]))
        assert result.exit_code == 0, result.output
    if with_human:
        result = fw(
            runner, env, "import", "annotations", str(env["inputs"]["annotations"]),
            "--condition", "human",
        )
        assert result.exit_code == 0, result.output


def finalize_all(env):
    wb = Workbench(env["data_dir"])
    wb.load()
    for doc in wb.documents:
        lease = wb.acquire_lease(doc.id, "ann1")
        for sentence in doc.sentences:
            for as_ in list(
                wb.conditions[ConditionLabel.MACHINE_HUMAN.value].sets_for_sentence(sentence.id)
            ):
                wb.append(kind=EditKind.TIMER_START, annotator="ann1", as_id=as_.id,
                          ts=0.0, lease_token=lease.token)
                wb.append(kind=EditKind.ACCEPT, annotator="ann1", as_id=as_.id,
                          lease_token=lease.token)
                wb.append(kind=EditKind.TIMER_STOP, annotator="ann1", as_id=as_.id,
                          ts=45.0, lease_token=lease.token)


class TestImport:
    def test_framebank_summary(self, runner, env):
        result = fw(runner, env, "import", "framebank", str(env["inputs"]["framebank"]))
        assert result.exit_code == 0
        assert "frames: 3" in result.output

    def test_large_framebank_count(self, runner, env, tmp_path):
        frames = [
            {"name": f"Frame_{i:04d}", "fes": [{"name": "X", "coreness": "core"}]}
            for i in range(1429)
        ]
        path = tmp_path / "big.json"
        path.write_text(json.dumps({"frames": frames, "lus": []}))
        result = fw(runner, env, "import", "framebank", str(path))
        assert result.exit_code == 0
        assert "frames: 1429" in result.output

    def test_empty_corpus(self, runner, env, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        result = fw(runner, env, "import", "corpus", str(path))
        assert result.exit_code == 0
        assert "documents: 0" in result.output

    def test_malformed_line_exits_2_with_line_number(self, runner, env, tmp_path):
        lines = [json.dumps({"id": f"d{i}", "title": "", "sentences": []}) for i in range(6)]
        lines.append("{broken")
        path = tmp_path / "bad.jsonl"
        path.write_text("\n".join(lines))
        result = fw(runner, env, "import", "corpus", str(path))
        assert result.exit_code == 2
        assert "line 7" in result.output

    def test_reimport_is_idempotent(self, runner, env):
        import_all(runner, env)
        result = fw(runner, env, "import", "corpus", str(env["inputs"]["corpus"]))
        assert result.exit_code == 0
        assert "unchanged" in result.output


class TestResolve:
    def test_summary(self, runner, env):
        import_all(runner, env)
        result = fw(runner, env, "resolve")
        assert result.exit_code == 0
        assert "created: 5" in result.output
        assert "1 UNKNOWN_FRAME" in result.output and "1 UNKNOWN_FE" in result.output

    def test_rerun_identical_no_duplicate_lus(self, runner, env):
        import_all(runner, env)
        first = fw(runner, env, "resolve")
        second = fw(runner, env, "resolve")
        assert first.output == second.output
        wb = Workbench(env["data_dir"])
        wb.load()
        keys = [(lu.lemma, lu.pos, lu.frame_id) for lu in wb.bank.lus()]
        assert len(keys) == len(set(keys))

    def test_missing_preannot_exits_3(self, runner, env):
        for kind in ("framebank", "corpus"):
            fw(runner, env, "import", kind, str(env["inputs"][kind]))
        result = fw(runner, env, "resolve")
        assert result.exit_code == 3


class TestReport:
    def test_table5_with_pending_exits_4(self, runner, env, tmp_path):
        import_all(runner, env)
        fw(runner, env, "resolve")
        result = fw(runner, env, "report", "--tables", "5", "--conditions", "machine_human",
                    "--out", str(tmp_path / "r"))
        assert result.exit_code == 4

    def test_full_report_flow(self, runner, env, tmp_path):
        import_all(runner, env, with_human=True)
        fw(runner, env, "resolve")
        finalize_all(env)
        out = tmp_path / "reports"
        result = fw(runner, env, "report", "--tables", "1,2,3,4,5", "--out", str(out))
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.iterdir())
        assert names == [
            "table1_diversity.csv",
            "table2_similarity.csv",
            "table3_completeness.csv",
            "table4_time.csv",
            "table5_edits.csv",
        ]
        header = (out / "table1_diversity.csv").read_text().splitlines()[0]
        assert header.count("Sent") == 3  # one column group per condition

    def test_report_json_pairs(self, runner, env, tmp_path):
        import_all(runner, env, with_human=True)
        fw(runner, env, "resolve")
        out = tmp_path / "reports"
        result = fw(runner, env, "report", "--tables", "2", "--format", "json",
                    "--out", str(out))
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "table2_similarity.json").read_text())
        assert doc["columns"] == [
            "Doc", "Human vs Machine", "Human vs Machine+Human", "Machine vs Machine+Human",
        ]

    def test_missing_condition_exits_3(self, runner, env, tmp_path):
        import_all(runner, env)  # no human condition imported
        fw(runner, env, "resolve")
        result = fw(runner, env, "report", "--tables", "1", "--out", str(tmp_path / "r"))
        assert result.exit_code == 3


class TestExport:
    def test_export_round_trips_as_annotations(self, runner, env, tmp_path):
        import_all(runner, env, with_human=True)
        fw(runner, env, "resolve")
        out = tmp_path / "human_export.jsonl"
        result = fw(runner, env, "export", "--condition", "human", "--out", str(out))
        assert result.exit_code == 0
        assert "4 annotation sets" in result.output
        lines = [json.loads(line) for line in out.read_text().splitlines()]
        assert {l["id"] for l in lines} == {"h1", "h2", "h3", "h4"}

    def test_export_machine_condition(self, runner, env, tmp_path):
        import_all(runner, env)
        fw(runner, env, "resolve")
        out = tmp_path / "machine.jsonl"
        result = fw(runner, env, "export", "--condition", "machine", "--out", str(out))
        assert result.exit_code == 0
        assert "5 annotation sets" in result.output

import glob
import json
import os
import subprocess
import sys

import pytest

from crsym import cli, jobs
from crsym.jobs import JobError, dump_json, load_job, parse_job, render_text, run, with_overrides
from crsym.lie import VerificationError

from conftest import JOBS

JOB_FILES = sorted(glob.glob(os.path.join(JOBS, "*.job")))


def golden_command(path):
    return "minimality" if os.path.basename(path) == "levi_flat.job" else "full"


@pytest.mark.parametrize("path", JOB_FILES, ids=lambda p: os.path.basename(p)[:-4])
def test_golden(path):
    with open(path[:-4] + ".golden.json", encoding="utf-8") as fh:
        expected = fh.read()
    assert dump_json(run(load_job(path), golden_command(path))) == expected


def test_corpus_covers_examples():
    names = {os.path.basename(p)[:-4] for p in JOB_FILES}
    for prefix, count in (("tube_", 9), ("rigid_", 10), ("hermitian_", 8)):
        assert sum(n.startswith(prefix) for n in names) == count
    assert {"heisenberg", "heisenberg_r", "levi_flat"} <= names


def test_parse_job_defaults_and_comments():
    job = parse_job("# comment\nkind = tube\nphi = y^2  # trailing\n")
    assert (job.order, job.ansatz_degree, job.dep_degree, job.dep_order, job.kmax, job.seed) == (20, 3, 4, 24, 6, 0)
    assert job.phi == ("y^2",)
    multi = parse_job("kind = tube\nd = 2\nm = 2\nphi = y1^2 + y2^2; y1*y2\n")
    assert multi.phi == ("y1^2 + y2^2", "y1*y2")


@pytest.mark.parametrize(
    "text, msg",
    [
        ("kind = tube\n", "at least"),
        ("kind = tube\nphi = y^2\nphi = y^3\n", "duplicate"),
        ("kind = tube\nphi = y^2\ncolour = red\n", "unknown keys"),
        ("kind = tube\nphi = y^2\norder = 2\n", "at least 3"),
        ("kind = tube\nphi = y^2\norder = ten\n", "integer"),
        ("kind = cone\nphi = y^2\n", "unknown kind"),
        ("kind = tube\nphi = y^2\njust text\n", "key = value"),
        ("kind = tube\nphi = y^2\nkmax = 0\n", "positive"),
        ("kind = tube\nphi = y^2\nformat = xml\n", "text or json"),
        ("kind = tube\nd = 2\nphi = y^2\n", "expected 2 phi"),
        ("kind = tube\nphi = y^2\nlevi_signs = a\n", "levi_signs"),
    ],
)
def test_parse_job_errors(text, msg):
    with pytest.raises(JobError, match=msg):
        parse_job(text)


def test_bad_expression_is_job_error():
    with pytest.raises(JobError, match="unknown identifier"):
        run(parse_job("kind = tube\nphi = q^2\n"), "derive")


@pytest.fixture(scope="module")
def trace_job():
    return load_job(os.path.join(JOBS, "rigid_strong_trace.job"))


def test_full_is_union_of_subcommands(trace_job):
    full = json.loads(dump_json(run(trace_job, "full")))
    for command in ("derive", "symmetries", "classify", "obstruct", "minimality"):
        part = json.loads(dump_json(run(trace_job, command)))
        for key, value in part.items():
            if key == "command":
                continue
            assert full[key] == value, (command, key)


def test_derive_trace_rigid(trace_job):
    out = run(trace_job, "derive")
    F = out["pde"]["F"]["1,1"]
    for piece in ("15/8*z1^4*W1^5", "5/8*i*z1^3*W1^6", "225/64*z1^9*W1^9"):
        assert piece in F


def test_determinism(trace_job):
    assert dump_json(run(trace_job)) == dump_json(run(trace_job))


def test_text_rendering(trace_job):
    text = render_text(run(trace_job, "symmetries"))
    lines = text.splitlines()
    assert lines[0] == "# rigid_strong_trace  (symmetries)"
    assert "symmetries.dim: 1" in lines
    assert any(l.startswith("time.symmetries: ") for l in lines)


def test_overrides(trace_job):
    job = with_overrides(trace_job, order=12, seed=None)
    assert job.order == 12 and job.seed == trace_job.seed
    with pytest.raises(JobError):
        with_overrides(trace_job, order=1)


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "crsym", *args], capture_output=True, text=True, cwd=os.path.dirname(JOBS)
    )


def test_cli_symmetries_quadric():
    proc = _cli("symmetries", "jobs/heisenberg.job", "--format", "json")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["symmetries"]["dim"] == 8


def test_cli_input_error(tmp_path):
    bad = tmp_path / "bad.job"
    bad.write_text("kind = tube\nphi = sin(1 + y)\n")
    proc = _cli("derive", str(bad))
    assert proc.returncode == 1
    assert "input error" in proc.stderr and "1 + y" in proc.stderr
    assert _cli("derive", str(tmp_path / "missing.job")).returncode == 1
    assert _cli("derive", "jobs/levi_flat.job").returncode == 1


def test_cli_verification_failure(monkeypatch, capsys):
    def boom(*a, **k):
        raise VerificationError("symmetry failed re-verification")

    monkeypatch.setattr(jobs, "compute_symmetries", boom)
    assert cli.main(["symmetries", os.path.join(JOBS, "tube_sextic_nonic.job")]) == 2
    assert "verification failure" in capsys.readouterr().err


def test_cli_out_and_batch(tmp_path):
    out = tmp_path / "report.json"
    proc = _cli(
        "derive", "jobs/tube_sextic_nonic.job", "jobs/hermitian_sin.job", "--order", "10",
        "--format", "json", "--out", str(out), "--workers", "2",
    )
    assert proc.returncode == 0 and proc.stdout == ""
    data = json.loads(out.read_text())
    assert [d["job"]["name"] for d in data] == ["tube_sextic_nonic", "hermitian_sin"]
    assert all(d["job"]["order"] == 10 for d in data)

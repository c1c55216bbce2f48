# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

import csv
import dataclasses
import io
import json

import pytest

from saitpc import SaitStageError, SaitSyntaxError, SaitValueError
from saitpc.bench import SCHEMA_VERSION, cli, export, runner
from saitpc.bench.config import (AxisName, ExperimentConfig, PrecondKind,
                                 PrecondSpec, ProblemKind, ProblemSpec,
                                 SolverSpec, SweepAxis)
from saitpc.bench.report import (COLUMNS, TIMING_FIELDS, ReportFormat,
                                 parse_csv, parse_json, read_report, report,
                                 report_text)
from saitpc.bench.runner import exit_code, expand, run, run_recorded, sweep
from saitpc.problems.laplacian import laplacian_3d
from saitpc.problems.matrix_market import mm_read
from saitpc.problems.rhs import RhsMode
from saitpc.sparse.ilu import ilu_k


def config(problem="laplacian:20", precond="sait-thr:0.05:10", solver="pcg", **kwargs) -> ExperimentConfig:
	return ExperimentConfig(ProblemSpec.parse(problem), PrecondSpec.parse(precond), SolverSpec.parse(solver), **kwargs)

def write_mtx(tmp_path, name, entries: str):
	path = tmp_path / name
	path.write_text("%%MatrixMarket matrix coordinate real general\n" + entries)
	return str(path)


@pytest.mark.parametrize("text", ["laplacian:20", "mtx:/data/thermomech_TC.mtx", "mtx:C:/matrices/a.mtx"])
def test_problem_spec(text):
	spec = ProblemSpec.parse(text)
	assert str(spec) == text
	assert ProblemSpec.parse(str(spec)) == spec

def test_problem_spec_fields():
	assert ProblemSpec.parse("Laplacian:7") == ProblemSpec(ProblemKind.LAPLACIAN, n=7)
	assert ProblemSpec.parse("mtx:a:b.mtx").path == "a:b.mtx"

@pytest.mark.parametrize("text", ["none", "exact", "sait-thr:0.05:10", "sait-thr:0:15", "sait-pat:2:10", "jacobi:4"])
def test_precond_spec(text):
	assert str(PrecondSpec.parse(text)) == text

def test_precond_spec_fields():
	spec = PrecondSpec.parse("sait-thr:1e-3:5")
	assert spec.kind is PrecondKind.SAIT_THR
	assert spec.thr_params.tau == 0.001
	assert str(spec) == "sait-thr:0.001:5"
	assert PrecondSpec.parse(str(spec)) == spec

	assert PrecondSpec.parse("sait-pat:0:3").pat_params.p == 0
	assert not PrecondSpec.parse("none").needs_factors
	assert PrecondSpec.parse("jacobi:2").needs_factors

@pytest.mark.parametrize("text, error", [
	("ilut:0.1", SaitSyntaxError),
	("sait-thr:0.1", SaitSyntaxError),
	("sait-thr:x:10", SaitSyntaxError),
	("exact:1", SaitSyntaxError),
	("sait-thr:1.5:10", SaitValueError),
	("sait-thr:0.1:0", SaitValueError),
	("sait-pat:-1:10", SaitValueError),
	("jacobi:0", SaitValueError),
])
def test_precond_spec_errors(text, error):
	with pytest.raises(error):
		PrecondSpec.parse(text)

@pytest.mark.parametrize("text, error", [
	("grid:3", SaitSyntaxError),
	("laplacian", SaitSyntaxError),
	("laplacian:x", SaitSyntaxError),
	("laplacian:0", SaitValueError),
	("mtx:", SaitValueError),
])
def test_problem_spec_errors(text, error):
	with pytest.raises(error):
		ProblemSpec.parse(text)

def test_solver_spec():
	assert str(SolverSpec.parse("lobpcg:4")) == "lobpcg:4"
	assert SolverSpec.parse("pcg").nev is None

	with pytest.raises(SaitValueError):
		SolverSpec.parse("lobpcg:0")
	with pytest.raises(SaitSyntaxError):
		SolverSpec.parse("gmres")

def test_config_validation():
	for kwargs in [dict(tol=0.0), dict(threads=0), dict(ilu_level=-1), dict(maxit=-1)]:
		with pytest.raises(SaitValueError):
			config(**kwargs)


def test_sweep_axis():
	axis = SweepAxis.parse("tau=0,0.01,0.05")
	assert axis.name is AxisName.TAU
	assert axis.values == (0.0, 0.01, 0.05)
	assert str(axis) == "tau=0,0.01,0.05"

	assert SweepAxis.parse("m=1..3,7").values == (1, 2, 3, 7)
	assert SweepAxis.parse("K=1..10").values == tuple(range(1, 11))

@pytest.mark.parametrize("text, error", [
	("tau", SaitSyntaxError),
	("q=1", SaitSyntaxError),
	("tau=0..1", SaitSyntaxError),
	("m=a..3", SaitSyntaxError),
	("m=", SaitValueError),
])
def test_sweep_axis_errors(text, error):
	with pytest.raises(error):
		SweepAxis.parse(text)

def test_expand():
	configs = expand(config(), [SweepAxis.parse("tau=0.05,0.01"), SweepAxis.parse("m=5,10")])
	assert [str(c.precond) for c in configs] == ["sait-thr:0.05:5", "sait-thr:0.05:10", "sait-thr:0.01:5", "sait-thr:0.01:10"]

	configs = expand(config(precond="exact"), [SweepAxis.parse("ilu=0..2")])
	assert [c.ilu_level for c in configs] == [0, 1, 2]

	with pytest.raises(SaitValueError):
		expand(config(), [SweepAxis.parse("k=1,2")])
	with pytest.raises(SaitValueError):
		expand(config(), [SweepAxis.parse("tau=1.0")])

	(row,) = sweep(config(), [SweepAxis.parse("tau=1.0")], progress=False)
	assert row.error.startswith("config: tau=1.0: ")


def test_run_sait():
	row = run(config())

	assert row.schema_version == SCHEMA_VERSION
	assert row.problem == "laplacian:20"
	assert row.precond == "sait-thr:0.05:10"
	assert row.rows == 8000
	assert row.nnz_a == 7 * 20**3 - 6 * 20**2
	assert row.nnz_l > 0 and row.nnz_u > 0
	assert row.ratio == pytest.approx((row.nnz_ml + row.nnz_mu) / (row.nnz_l + row.nnz_u))
	assert row.ratio > 1.0
	assert row.converged
	assert 0 < row.iterations < 200
	assert row.residual_final <= 1e-10
	assert row.time_total >= row.time_precond > 0.0
	assert row.error == ""
	assert not row.failed

def test_run_without_preconditioner():
	row = run(config(problem="laplacian:8", precond="none"))
	assert row.nnz_l is None and row.nnz_ml is None
	assert row.ratio == 0.0
	assert row.converged

def test_run_lobpcg():
	row = run(config(problem="laplacian:10", precond="exact", solver="lobpcg:2", tol=1e-8))
	assert row.converged
	assert len(row.eigenvalues) == 2
	assert row.eigenvalues[0] <= row.eigenvalues[1]

def test_stage_errors(tmp_path):
	cases = [
		("problem", f"mtx:{tmp_path / 'missing.mtx'}"),
		("problem", write_mtx(tmp_path, "bad.mtx", "2 2 1\n3 3 1.0\n")),
		("ilu", write_mtx(tmp_path, "swap.mtx", "2 2 2\n1 2 1.0\n2 1 1.0\n")),
		("solve", write_mtx(tmp_path, "indef.mtx", "2 2 2\n1 1 1.0\n2 2 -1.0\n")),
	]

	for stage, problem in cases:
		if not problem.startswith("mtx:"):
			problem = f"mtx:{problem}"
		cfg = config(problem=problem, precond="exact")

		with pytest.raises(SaitStageError) as e:
			run(cfg)
		assert e.value.stage == stage

		row = run_recorded(cfg)
		assert row.failed
		assert row.error.startswith(f"{stage}: ")
		assert row.iterations is None
		assert row.problem == problem
	assert row.rows == 2

def test_determinism():
	for cfg in [config(problem="laplacian:12", precond="sait-pat:2:5", rhs=RhsMode.RANDOM, seed=4),
			config(problem="laplacian:10", precond="sait-thr:0.03:10", solver="lobpcg:3", tol=1e-8, seed=1)]:
		assert run(cfg).without_timings() == run(cfg).without_timings()

def test_sweep():
	axes = [SweepAxis.parse("m=1,5")]
	rows = sweep(config(problem="laplacian:6", precond="sait-thr:0.05:1"), axes, progress=False)

	assert [r.precond for r in rows] == ["sait-thr:0.05:1", "sait-thr:0.05:5"]
	assert all(r.converged for r in rows)
	assert exit_code(rows) == 0

	parallel = sweep(config(problem="laplacian:6", precond="sait-thr:0.05:1"), axes, jobs=2, progress=False)
	assert [r.without_timings() for r in parallel] == [r.without_timings() for r in rows]

def test_sweep_records_failures(tmp_path):
	problem = "mtx:" + write_mtx(tmp_path, "swap.mtx", "2 2 2\n1 2 1.0\n2 1 1.0\n")
	rows = sweep(config(problem=problem, precond="exact"), [SweepAxis.parse("ilu=0,1")], progress=False)
	assert len(rows) == 2
	assert all(r.failed for r in rows)
	assert exit_code(rows) == 1

def test_sweep_records_invalid_points():
	base = config(problem="laplacian:4", precond="sait-thr:0.05:3")
	rows = sweep(base, [SweepAxis.parse("tau=0.05,1.0,0.01")], progress=False)

	assert [r.precond for r in rows] == ["sait-thr:0.05:3", "sait-thr:0.05:3", "sait-thr:0.01:3"]
	assert rows[0].converged and rows[2].converged
	assert rows[1].failed
	assert rows[1].error.startswith("config: tau=1.0: ")
	assert rows[1].rows is None
	assert exit_code(rows) == 1

def test_sweep_reuses_problem_and_factors():
	base = config(problem="laplacian:6", precond="sait-thr:0.05:1")
	axes = [SweepAxis.parse("ilu=0,1"), SweepAxis.parse("m=1,4")]

	rows = sweep(base, axes, progress=False)
	single = [run(c) for c in expand(base, axes)]

	assert [r.without_timings() for r in rows] == [r.without_timings() for r in single]
	assert all(r.time_setup > 0.0 for r in rows)
	assert runner._cached_problem.cache_info().currsize == 0
	assert runner._cached_factors.cache_info().currsize == 0


def ratios(precond: str, axis: str) -> "list[float]":
	rows = sweep(config(problem="laplacian:12", precond=precond), [SweepAxis.parse(axis)], progress=False)
	assert all(r.converged for r in rows)
	return [r.ratio for r in rows]

def test_sweep_unthresholded_ratio_grows():
	r = ratios("sait-thr:0:1", "m=1..6")
	assert all(a < b for a, b in zip(r, r[1:]))

@pytest.mark.parametrize("tau, plateau, first", [(0.01, 4.327, 4), (0.05, 1.672, 2)])
def test_sweep_thresholded_ratio_plateaus(tau, plateau, first):
	r = ratios(f"sait-thr:{tau}:1", "m=1..6")
	assert r[first - 1:] == [r[first - 1]] * (7 - first)
	assert r[first - 1] == pytest.approx(plateau, abs=1e-3)

def test_sweep_pattern_iterations_flat():
	rows = sweep(config(problem="laplacian:12", precond="sait-pat:2:1"), [SweepAxis.parse("m=1..10")], progress=False)
	iterations = [r.iterations for r in rows]
	assert all(r.converged for r in rows)
	assert max(iterations) - min(iterations) <= 2
	assert abs(iterations[-1] - 20) <= 2

def test_sweep_jacobi_reaches_exact_count():
	exact = run(config(problem="laplacian:12", precond="exact")).iterations
	rows = sweep(config(problem="laplacian:12", precond="jacobi:1"), [SweepAxis.parse("k=1..10")], progress=False)
	iterations = [r.iterations for r in rows]

	assert all(r.converged for r in rows)
	assert all(b <= a + 2 for a, b in zip(iterations, iterations[1:]))
	assert iterations[0] > iterations[-1]
	assert abs(iterations[-1] - exact) <= 2


def test_golden_sweep(golden):
	rows = sweep(config(problem="laplacian:1", precond="sait-thr:0:10"), [SweepAxis.parse("tau=0,0.01,0.05")], progress=False)
	rows = [dataclasses.replace(r, **dict.fromkeys(TIMING_FIELDS)) for r in rows]
	golden("sweep_laplacian_1.csv", report_text(rows, "csv"))

def test_golden_run(golden):
	columns = ["problem", "precond", "solver", "ilu_level", "rows", "nnz_a", "nnz_l", "nnz_u", "converged"]
	row = run(config())
	(cells,) = csv.DictReader(io.StringIO(report_text([row], "csv")))

	golden("run_laplacian_20.csv", ",".join(columns) + "\n" + ",".join(cells[c] for c in columns) + "\n")
	assert row.ratio > 1.0
	assert 0 < row.iterations < 200

def test_exit_codes():
	converged = run(config(problem="laplacian:4", precond="exact"))
	stopped = run(config(problem="laplacian:4", precond="none", maxit=1))
	assert not stopped.converged

	assert exit_code([converged]) == 0
	assert exit_code([converged, stopped]) == 2
	assert exit_code([stopped, dataclasses.replace(converged, error="solve: x")]) == 1


@pytest.fixture(scope="module")
def rows():
	return [
		run(config(problem="laplacian:8", precond="sait-thr:0.05:10")),
		run(config(problem="laplacian:8", precond="none")),
		run(config(problem="laplacian:6", precond="exact", solver="lobpcg:2", tol=1e-8)),
	]

def test_report_csv(rows):
	text = report_text(rows[:1])
	lines = text.splitlines()
	assert len(lines) == 2
	assert lines[0] == ",".join(COLUMNS)
	assert lines[1].startswith(f"{SCHEMA_VERSION},laplacian:8,sait-thr:0.05:10,pcg,0,1e-10,")

@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_report_read_back(tmp_path, rows, fmt):
	path = tmp_path / f"report.{fmt}"
	report(rows, path, ReportFormat.from_path(path))
	assert read_report(path) == [r.rounded() for r in rows]

def test_report_json(rows):
	data = json.loads(report_text(rows, "json"))
	assert data["schema_version"] == SCHEMA_VERSION
	assert list(data["rows"][0]) == list(COLUMNS)
	assert data["rows"][1]["nnz_l"] is None
	assert len(data["rows"][2]["eigenvalues"]) == 2

def test_report_table(rows):
	failed = dataclasses.replace(rows[0], error="solve: boom")
	text = report_text(rows + [failed], ReportFormat.TABLE)

	assert text.startswith(f"# saitpc report, schema version {SCHEMA_VERSION}\n")
	assert "sait-thr:0.05:10" in text
	assert "FAILED laplacian:8 sait-thr:0.05:10 pcg: solve: boom" in text
	assert "eigenvalues laplacian:6 exact: " in text

	lines = text.splitlines()
	assert len({len(line) for line in lines[1:6]}) == 1

def test_report_errors(rows, tmp_path):
	with pytest.raises(SaitValueError):
		report_text([])

	with pytest.raises(SaitSyntaxError):
		parse_csv(io.StringIO("a,b\n1,2\n"))

	data = json.loads(report_text(rows, "json"))
	data["schema_version"] = SCHEMA_VERSION + 1
	with pytest.raises(SaitValueError):
		parse_json(io.StringIO(json.dumps(data)))

	(tmp_path / "r.txt").write_text("")
	with pytest.raises(SaitValueError):
		read_report(tmp_path / "r.txt", "table")

def test_report_format_from_path():
	assert ReportFormat.from_path("out.json") is ReportFormat.JSON
	assert ReportFormat.from_path("out.CSV") is ReportFormat.CSV
	assert ReportFormat.from_path(None) is ReportFormat.CSV
	assert ReportFormat.from_path("out.txt", ReportFormat.TABLE) is ReportFormat.TABLE


def test_cli_run(tmp_path):
	out = tmp_path / "r.json"
	with pytest.raises(SystemExit) as e:
		cli.main(["--problem", "laplacian:6", "--precond", "sait-thr:0.05:5", "-o", str(out), "--log", "warning"])
	assert e.value.code == 0

	(row,) = read_report(out)
	assert row.precond == "sait-thr:0.05:5"
	assert row.converged

def test_cli_sweep(capsys):
	with pytest.raises(SystemExit) as e:
		cli.main(["--problem", "laplacian:5", "--precond", "jacobi:1", "--sweep", "k=1..3", "--no-progress", "--format", "csv", "--log", "warning"])
	assert e.value.code == 0

	out_rows = parse_csv(io.StringIO(capsys.readouterr().out))
	assert [r.precond for r in out_rows] == ["jacobi:1", "jacobi:2", "jacobi:3"]

def test_cli_sweep_invalid_point(tmp_path):
	out = tmp_path / "r.csv"
	with pytest.raises(SystemExit) as e:
		cli.main(["--problem", "laplacian:4", "--precond", "sait-thr:0.05:3", "--sweep", "tau=1.0,0.05", "--no-progress", "-o", str(out), "--log", "critical"])
	assert e.value.code == 1

	failed, ok = read_report(out)
	assert failed.error.startswith("config: ")
	assert ok.converged

def test_cli_exit_codes(tmp_path):
	with pytest.raises(SystemExit) as e:
		cli.main(["--problem", "laplacian:6", "--precond", "none", "--maxit", "2", "-o", str(tmp_path / "r.csv"), "--log", "error"])
	assert e.value.code == 2

	with pytest.raises(SystemExit) as e:
		cli.main(["--problem", f"mtx:{tmp_path / 'missing.mtx'}", "-o", str(tmp_path / "r.csv"), "--log", "critical"])
	assert e.value.code == 1

	for argv in [[], ["--problem", "laplacian:6", "--precond", "sait-thr:2:10"], ["--problem", "grid:6"]]:
		with pytest.raises(SystemExit) as e:
			cli.main(argv)
		assert e.value.code == 2

def test_cli_list_matrices(capsys):
	cli.main(["--list-matrices"])
	out = capsys.readouterr().out
	assert "thermomech_TC" in out
	assert "https://sparse.tamu.edu/GHS_psdef/apache1" in out


def test_export(tmp_path):
	export.main([str(tmp_path / "out"), "--problem", "laplacian:4", "--precond", "sait-pat:1:3", "--matrix", "--log", "warning"])

	a = laplacian_3d(4)
	factors = ilu_k(a, 0)
	out = tmp_path / "out"

	assert mm_read(out / "A.mtx").equals(a)
	assert (out / "A.mtx").read_text().splitlines()[0].endswith("symmetric")
	assert mm_read(out / "L.mtx").equals(factors.L)
	assert mm_read(out / "U.mtx").equals(factors.U)
	assert mm_read(out / "M_L.mtx").is_triangular(factors.L_KIND)
	assert mm_read(out / "M_U.mtx").is_triangular(factors.U_KIND)

def test_export_options(tmp_path):
	export.main([str(tmp_path), "--problem", "laplacian:3", "--precond", "sait-thr:0:2", "--no-factors", "--log", "warning"])
	assert sorted(p.name for p in tmp_path.iterdir()) == ["M_L.mtx", "M_U.mtx"]

	with pytest.raises(SystemExit) as e:
		export.main([str(tmp_path / "none"), "--problem", "laplacian:3", "--precond", "none", "--log", "critical"])
	assert e.value.code == 1
	assert not (tmp_path / "none").exists()

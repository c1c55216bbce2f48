# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Single runs and sweeps.

A run goes through the stages ``problem``, ``ilu``, ``precond`` and ``solve``. An error
in any of them is raised as :exc:`~saitpc.SaitStageError` naming the stage. Sweeps
record such errors in the row of the failed point and continue with the next one.
"""

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from functools import lru_cache, partial

from tqdm import tqdm

from .. import SaitError, SaitStageError
from ..krylov.lobpcg import lobpcg
from ..krylov.pcg import pcg
from ..krylov.precond import (ExactIluPrecond, IdentityPrecond,
                              JacobiSweepsPrecond, PrecondOp, SaitPairPrecond)
from ..problems import suitesparse
from ..problems.laplacian import laplacian_3d
from ..problems.matrix_market import mm_read
from ..problems.rhs import make_rhs
from ..sparse.csr import CsrMatrix
from ..sparse.ilu import IluFactors, ilu_k
from . import SCHEMA_VERSION
from .config import (ExperimentConfig, PrecondKind, PrecondSpec, ProblemKind,
                     ProblemSpec, SolverKind, SweepAxis)
from .report import ReportRow

logger = logging.getLogger("runner")


@contextmanager
def stage(name: str):
	"""Re-raise library and IO errors as :exc:`~saitpc.SaitStageError` of stage ``name``."""

	logger.debug("entering stage %s", name)
	try:
		yield
	except SaitStageError:
		raise
	except (SaitError, OSError) as e:
		raise SaitStageError(name, e) from e

def build_problem(spec: ProblemSpec) -> CsrMatrix:
	if spec.kind is ProblemKind.LAPLACIAN:
		return laplacian_3d(spec.n)

	a = mm_read(spec.path)

	entry = suitesparse.lookup(spec.path)
	if entry is not None and (a.nrows, a.nnz) != (entry.rows, entry.nnz):
		logger.warning("%s has %d rows and %d entries, the collection lists %d and %d", spec.path, a.nrows, a.nnz, entry.rows, entry.nnz)

	return a

def build_precond(spec: PrecondSpec, factors: IluFactors, n: int, threads: int = 1) -> PrecondOp:
	if spec.kind is PrecondKind.NONE:
		return IdentityPrecond(n, threads)
	if spec.kind is PrecondKind.EXACT:
		return ExactIluPrecond(factors, threads)
	if spec.kind is PrecondKind.SAIT_THR:
		return SaitPairPrecond.from_thr(factors, spec.thr_params, threads)
	if spec.kind is PrecondKind.SAIT_PAT:
		return SaitPairPrecond.from_pat(factors, spec.pat_params, threads)
	return JacobiSweepsPrecond(factors, spec.k, threads)


def _config_fields(config: ExperimentConfig) -> dict:
	return dict(
		schema_version=SCHEMA_VERSION,
		problem=str(config.problem),
		precond=str(config.precond),
		solver=str(config.solver),
		ilu_level=config.ilu_level,
		tol=float(config.tol),
		maxit=config.maxit,
		seed=config.seed,
		threads=config.threads,
		rhs=config.rhs.value,
	)

@lru_cache(maxsize=1)
def _cached_problem(spec: ProblemSpec) -> "tuple[CsrMatrix, float]":
	start = time.perf_counter()
	a = build_problem(spec)
	return a, time.perf_counter() - start

@lru_cache(maxsize=1)
def _cached_factors(spec: ProblemSpec, level: int) -> "tuple[IluFactors, float]":
	a, _ = _cached_problem(spec)
	start = time.perf_counter()
	factors = ilu_k(a, level)
	return factors, time.perf_counter() - start

def clear_caches():
	"""Drop the problem and factors kept by sweeps with ``reuse``."""

	_cached_factors.cache_clear()
	_cached_problem.cache_clear()

def _run(config: ExperimentConfig, fields: dict, reuse: bool = False):
	logger.info("running %s / ilu(%d) / %s / %s", config.problem, config.ilu_level, config.precond, config.solver)
	setup_start = time.perf_counter()
	# time spent building cached objects on an earlier run, charged to every run using them
	cached_seconds = 0.0

	with stage("problem"):
		if reuse:
			a, seconds = _cached_problem(config.problem)
			cached_seconds += seconds
		else:
			a = build_problem(config.problem)
		fields.update(rows=a.nrows, nnz_a=a.nnz)

	factors = None
	if config.precond.needs_factors:
		with stage("ilu"):
			if reuse:
				factors, seconds = _cached_factors(config.problem, config.ilu_level)
				cached_seconds += seconds
			else:
				factors = ilu_k(a, config.ilu_level)
			fields.update(nnz_l=factors.L.nnz, nnz_u=factors.U.nnz)

	with stage("precond"):
		precond_start = time.perf_counter()
		precond = build_precond(config.precond, factors, a.nrows, config.threads)
		fields.update(ratio=float(precond.ratio), ratio_l=float(precond.ratio_l), ratio_u=float(precond.ratio_u))
		if isinstance(precond, SaitPairPrecond):
			fields.update(nnz_ml=precond.m_l.nnz, nnz_mu=precond.m_u.nnz)

	if reuse:
		fields.update(time_setup=cached_seconds + time.perf_counter() - precond_start)
	else:
		fields.update(time_setup=time.perf_counter() - setup_start)

	with stage("solve"):
		if config.solver.kind is SolverKind.PCG:
			b = make_rhs(a, config.rhs, config.seed)
			_, stats = pcg(a, b, precond, config.tol, config.maxit, config.threads)
			logger.info("%d iterations, %.3g s preconditioner and %.3g s other work per iteration",
				stats.iterations, stats.precond_seconds_per_iteration, stats.other_seconds_per_iteration)
		else:
			stats = lobpcg(a, precond, config.solver.nev, config.tol, config.maxit, config.seed, config.threads)
			fields.update(eigenvalues=tuple(float(v) for v in stats.eigenvalues))

		fields.update(
			iterations=int(stats.iterations),
			converged=bool(stats.converged),
			residual_final=float(stats.residual_final),
			time_precond=float(stats.precond_seconds),
			time_other=float(stats.other_seconds),
			time_total=float(stats.total_seconds),
		)

def run(config: ExperimentConfig) -> ReportRow:
	"""Run one experiment. Raises :exc:`~saitpc.SaitStageError` if a stage fails."""

	fields = _config_fields(config)
	_run(config, fields)
	return ReportRow(**fields)

def run_recorded(config: ExperimentConfig, reuse: bool = False) -> ReportRow:
	"""Like :func:`run`, but a failed stage ends up in the ``error`` field of the row,
	which keeps every field filled before the failure. With ``reuse``, the problem and
	its factors are taken from the previous run if it used the same ones.
	"""

	fields = _config_fields(config)
	try:
		_run(config, fields, reuse)
	except SaitStageError as e:
		logger.error("run %s / %s failed: %s", config.problem, config.precond, e)
		fields.update(error=str(e))

	return ReportRow(**fields)

def _point(base: ExperimentConfig, axes: "list[SweepAxis]", point: tuple) -> ExperimentConfig:
	config = base
	for axis, value in zip(axes, point):
		config = axis.apply(config, value)
	return config

def expand(base: ExperimentConfig, axes: "list[SweepAxis]") -> "list[ExperimentConfig]":
	"""Configurations of the cartesian product of ``axes``, the last axis varying fastest.
	Raises if any point is not a valid configuration.
	"""

	return [_point(base, axes, point) for point in itertools.product(*(axis.values for axis in axes))]

def sweep(base: ExperimentConfig, axes: "list[SweepAxis]", jobs: int = 1, progress: bool = True) -> "list[ReportRow]":
	"""One row per point of the axes' cartesian product, in axis order. Points that give no
	valid configuration are recorded with a ``config`` error. Runs go to a pool of
	``jobs`` processes if ``jobs > 1``. Runs sharing a problem and ILU level reuse its
	matrix and factors.
	"""

	rows = {}
	configs = {}
	for index, point in enumerate(itertools.product(*(axis.values for axis in axes))):
		try:
			configs[index] = _point(base, axes, point)
		except SaitError as e:
			where = " ".join(f"{axis.name.value}={value}" for axis, value in zip(axes, point))
			logger.error("sweep point %s is not a valid configuration: %s", where, e)
			rows[index] = ReportRow(**_config_fields(base), error=f"config: {where}: {e}")

	logger.info("sweeping %s, %d points", " x ".join(str(a) for a in axes), len(rows) + len(configs))

	work = partial(run_recorded, reuse=True)
	if jobs > 1:
		with ProcessPoolExecutor(max_workers=jobs) as pool:
			done = tqdm(pool.map(work, configs.values()), total=len(configs), disable=not progress)
			rows.update(zip(configs.keys(), done))
	else:
		try:
			rows.update((index, work(c)) for index, c in tqdm(configs.items(), disable=not progress))
		finally:
			clear_caches()

	rows = [rows[index] for index in sorted(rows)]

	failed = sum(r.failed for r in rows)
	if failed:
		logger.warning("%d of %d sweep points failed", failed, len(rows))

	return rows

def exit_code(rows: "list[ReportRow]") -> int:
	"""0 if every run converged, 1 if any failed, 2 otherwise."""

	if any(r.failed for r in rows):
		return 1
	if all(r.converged for r in rows):
		return 0
	return 2

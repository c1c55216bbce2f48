# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Locally optimal block preconditioned conjugate gradient eigensolver.

Each iteration runs Rayleigh-Ritz on the span of the current block ``X``, the
preconditioned residuals ``W`` and the conjugate directions ``P``, all orthonormalized
against ``X``. Columns whose residual norm reached ``tol`` are soft locked: they remain
in ``X`` but contribute no ``W`` or ``P`` directions.

The preconditioner sees the whole residual block at once, so a
:class:`~saitpc.krylov.precond.SaitPairPrecond` costs two sparse times dense block
products per iteration.
"""

import logging

import numpy as np
import scipy.linalg

from .. import SaitConvergenceError, SaitDimensionError, SaitValueError
from ..sparse.csr import CsrMatrix
from ..sparse.kernels import spmm
from . import EigResult, Stopwatch
from .precond import PrecondOp, apply_precond

logger = logging.getLogger("lobpcg")

MAX_RESTARTS = 3
"""Consecutive Rayleigh-Ritz failures tolerated before giving up."""

DENSE_FALLBACK_FACTOR = 5
"""Systems with fewer than ``DENSE_FALLBACK_FACTOR * nev`` rows are solved densely."""


def _project_out(x: np.ndarray, v: np.ndarray) -> np.ndarray:
	# two passes of classical Gram-Schmidt against the orthonormal x
	for _ in range(2):
		v = v - x @ (x.T @ v)
	return v

def _normalize_columns(v: np.ndarray, rtol: float = 1e-12):
	norms = np.linalg.norm(v, axis=0)
	keep = norms > rtol * max(norms.max(initial=0.0), 1.0)
	return v[:, keep] / norms[keep]

def _dense(a: CsrMatrix, nev: int, precond: PrecondOp) -> EigResult:
	logger.info("%d rows are too few for %d eigenpairs, using dense eigensolver", a.nrows, nev)

	total = Stopwatch()
	with total.running():
		vals, vecs = scipy.linalg.eigh(a.toarray(), subset_by_index=(0, nev - 1))
		res = np.linalg.norm(a.as_scipy @ vecs - vecs * vals, axis=0)

	return EigResult(vals, vecs, vals[np.newaxis, :], res[np.newaxis, :], 0, True, precond.ratio, 0.0, total.seconds)

def lobpcg(a: CsrMatrix, precond: PrecondOp, nev: int, tol: float = 1e-8, maxit: int = 500, seed: int = 0, threads: int = 1) -> EigResult:
	"""Compute the ``nev`` smallest eigenpairs of the SPD matrix ``a``.

	The initial block is drawn from a normal distribution seeded with ``seed``. A pair is
	converged once ``||A v - lambda v|| <= tol`` for its unit eigenvector ``v``. If
	``maxit`` iterations do not suffice, the current block is returned marked as not
	converged.
	"""

	if not a.is_square:
		raise SaitDimensionError(f"eigenproblem needs a square matrix, got {a.nrows}x{a.ncols}")
	if precond.n != a.nrows:
		raise SaitDimensionError(f"preconditioner of size {precond.n} does not fit {a.nrows}x{a.ncols} matrix")
	if not 1 <= nev <= a.nrows:
		raise SaitValueError(f"number of eigenpairs must lie in [1, {a.nrows}], got {nev}")
	if tol <= 0.0:
		raise SaitValueError(f"residual tolerance must be positive, got {tol}")

	if a.nrows < DENSE_FALLBACK_FACTOR * nev:
		return _dense(a, nev, precond)

	total = Stopwatch()
	in_precond = Stopwatch()

	with total.running():
		rng = np.random.default_rng(seed)
		x, _ = np.linalg.qr(rng.standard_normal((a.nrows, nev)))

		ax = spmm(a, x, threads)
		lam, c = scipy.linalg.eigh(x.T @ ax)
		x, ax = x @ c, ax @ c

		p = None
		restarts = 0
		lam_hist, res_hist = [], []
		converged = False
		it = 0

		while True:
			r = ax - x * lam
			res = np.linalg.norm(r, axis=0)
			lam_hist.append(lam)
			res_hist.append(res)

			active = res > tol
			logger.debug("iteration %d: %d active, eigenvalues %s, residuals %s", it, active.sum(), lam, res)

			if not active.any():
				converged = True
				break
			if it == maxit:
				break
			it += 1

			with in_precond.running():
				w = apply_precond(precond, r[:, active])

			blocks = [x, _normalize_columns(_project_out(x, w))]
			if p is not None:
				blocks.append(_normalize_columns(_project_out(x, p[:, active])))

			try:
				q = scipy.linalg.orth(np.hstack(blocks))
				if q.shape[1] < nev:
					raise np.linalg.LinAlgError(f"search space collapsed to {q.shape[1]} directions")

				aq = spmm(a, q, threads)
				gram = q.T @ aq
				theta, c = scipy.linalg.eigh((gram + gram.T) / 2)
			except np.linalg.LinAlgError as e:
				restarts += 1
				if restarts > MAX_RESTARTS:
					raise SaitConvergenceError(f"Rayleigh-Ritz failed {restarts} times in a row, last: {e}") from e

				logger.warning("iteration %d: Rayleigh-Ritz failed (%s), restarting without conjugate directions", it, e)
				p = None
				continue

			restarts = 0

			x_new = q @ c[:, :nev]
			ax = aq @ c[:, :nev]
			lam = theta[:nev]

			p = x_new - x @ (x.T @ x_new)
			x = x_new

	logger.info("LOBPCG with %s preconditioner: %d iterations, converged=%s, eigenvalues %s", precond, it, converged, lam)

	return EigResult(
		eigenvalues=lam,
		eigenvectors=x,
		eigenvalue_history=np.vstack(lam_hist),
		residual_history=np.vstack(res_hist),
		iterations=it,
		converged=converged,
		precond_ratio=precond.ratio,
		precond_seconds=in_precond.seconds,
		other_seconds=max(total.seconds - in_precond.seconds, 0.0),
	)

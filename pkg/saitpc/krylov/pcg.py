# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Preconditioned conjugate gradient method.

Iterations start from ``x = 0`` and stop once the relative residual ``||r|| / ||b||`` of
the recurrence drops to ``tol``. Convergence is then confirmed on the true residual
``b - A x``; if rounding let the two drift apart, the recurrence continues from the true
residual instead.

The preconditioner does not need to be symmetric. Products of approximate inverses
``M_U M_L`` are not, and are still used here as they are.
"""

import logging

import numpy as np

from .. import SaitDimensionError, SaitIndefiniteError, SaitValueError
from ..sparse.csr import CsrMatrix
from ..sparse.kernels import spmv
from . import SolveStats, Stopwatch
from .precond import PrecondOp, apply_precond

logger = logging.getLogger("pcg")

DEFAULT_TOL = 1e-10


def pcg(a: CsrMatrix, b, precond: PrecondOp, tol: float = DEFAULT_TOL, maxit: int = 1000, threads: int = 1) -> "tuple[np.ndarray, SolveStats]":
	"""Solve the SPD system ``a x = b``. Returns the solution and the run statistics. When
	``maxit`` iterations do not suffice, the iterate with the smallest residual is
	returned and the stats are marked as not converged.
	"""

	b = np.asarray(b, dtype=np.float64)
	if not a.is_square or b.shape != (a.nrows,):
		raise SaitDimensionError(f"cannot solve {a.nrows}x{a.ncols} system with right hand side of shape {b.shape}")
	if precond.n != a.nrows:
		raise SaitDimensionError(f"preconditioner of size {precond.n} does not fit {a.nrows}x{a.ncols} system")
	if tol <= 0.0 or maxit < 0:
		raise SaitValueError(f"invalid stopping criterion tol={tol} maxit={maxit}")

	total = Stopwatch()
	in_precond = Stopwatch()

	with total.running():
		norm_b = np.linalg.norm(b)
		x = np.zeros_like(b)

		if norm_b == 0.0:
			logger.info("zero right hand side, returning zero solution")
			return x, SolveStats(0, np.ones(1), True, 0.0, precond.ratio, 0.0, 0.0)

		r = b.copy()
		with in_precond.running():
			z = apply_precond(precond, r)
		p = z.copy()
		rz = r @ z

		history = [1.0]
		best_x, best_res = x.copy(), 1.0
		converged = False

		for it in range(1, maxit + 1):
			q = spmv(a, p, threads)
			pq = p @ q
			if not pq > 0.0:
				raise SaitIndefiniteError(f"p^T A p = {pq:.3e} in iteration {it}, matrix or preconditioner is not positive definite")

			alpha = rz / pq
			x += alpha * p
			r -= alpha * q

			res = np.linalg.norm(r) / norm_b

			if res <= tol:
				true_res = np.linalg.norm(b - spmv(a, x, threads)) / norm_b
				if true_res <= tol:
					history.append(true_res)
					converged = True
					break

				logger.warning("iteration %d: recurrence residual %.3e but true residual %.3e, continuing from true residual", it, res, true_res)
				r = b - spmv(a, x, threads)
				res = true_res

			history.append(res)
			logger.debug("iteration %d: relative residual %.6e", it, res)

			if res < best_res:
				best_x, best_res = x.copy(), res

			with in_precond.running():
				z = apply_precond(precond, r)

			rz_new = r @ z
			p = z + (rz_new / rz) * p
			rz = rz_new

		if not converged:
			logger.warning("no convergence after %d iterations, best relative residual %.3e", maxit, best_res)
			x = best_x

		res_final = np.linalg.norm(b - spmv(a, x, threads)) / norm_b

	iterations = len(history) - 1
	logger.info("PCG with %s preconditioner: %d iterations, converged=%s, residual %.3e", precond, iterations, converged, res_final)

	return x, SolveStats(
		iterations=iterations,
		residual_history=np.asarray(history),
		converged=converged,
		residual_final=float(res_final),
		precond_ratio=precond.ratio,
		precond_seconds=in_precond.seconds,
		other_seconds=max(total.seconds - in_precond.seconds, 0.0),
	)

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Preconditioned iterative solvers.

* :mod:`saitpc.krylov.precond`, the preconditioner variants behind a common
  :class:`~saitpc.krylov.precond.PrecondOp` interface.
* :mod:`saitpc.krylov.pcg`, preconditioned conjugate gradients for ``A x = b``.
* :mod:`saitpc.krylov.lobpcg`, block eigensolver for the smallest eigenpairs of ``A``.

Both solvers account the wall clock time spent inside the preconditioner separately from
everything else, following the cost model ``iterations * (precond + other)``.
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Stopwatch:
	"""Accumulates monotonic wall clock time over any number of timed sections."""

	seconds: float = 0.0

	@contextmanager
	def running(self):
		start = time.perf_counter()
		try:
			yield self
		finally:
			self.seconds += time.perf_counter() - start

@dataclass(frozen=True)
class SolveStats:
	"""Outcome of a :func:`~saitpc.krylov.pcg.pcg` run.

	``residual_history[k]`` is the relative residual ``||r_k|| / ||b||`` after ``k``
	iterations; ``residual_final`` is the true relative residual of the returned iterate.
	"""

	iterations: int
	residual_history: np.ndarray = field(repr=False)
	converged: bool
	residual_final: float
	precond_ratio: float
	precond_seconds: float
	other_seconds: float

	@property
	def total_seconds(self) -> float:
		return self.precond_seconds + self.other_seconds

	@property
	def precond_seconds_per_iteration(self) -> float:
		return self.precond_seconds / max(self.iterations, 1)

	@property
	def other_seconds_per_iteration(self) -> float:
		return self.other_seconds / max(self.iterations, 1)

@dataclass(frozen=True)
class EigResult:
	"""Outcome of a :func:`~saitpc.krylov.lobpcg.lobpcg` run.

	The histories have one row per iteration plus one for the initial block, and one
	column per eigenpair.
	"""

	eigenvalues: np.ndarray
	eigenvectors: np.ndarray = field(repr=False)
	eigenvalue_history: np.ndarray = field(repr=False)
	residual_history: np.ndarray = field(repr=False)
	iterations: int
	converged: bool
	precond_ratio: float
	precond_seconds: float
	other_seconds: float

	@property
	def total_seconds(self) -> float:
		return self.precond_seconds + self.other_seconds

	@property
	def residual_final(self) -> float:
		return float(np.max(self.residual_history[-1]))

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Right hand sides for the linear solves."""

from enum import Enum

import numpy as np

from .. import SaitDimensionError
from ..sparse.csr import CsrMatrix
from ..sparse.kernels import spmv


class RhsMode(Enum):
	ONES = "ones"
	"""``b = A 1``, so the exact solution is the all-ones vector."""
	RANDOM = "random"
	"""Unit norm vector with normally distributed entries from a seeded generator."""


def make_rhs(a: CsrMatrix, mode: RhsMode = RhsMode.ONES, seed: int = 0) -> np.ndarray:
	if not a.is_square:
		raise SaitDimensionError(f"right hand side needs a square matrix, got {a.nrows}x{a.ncols}")

	mode = RhsMode(mode)

	if mode is RhsMode.ONES:
		return spmv(a, np.ones(a.ncols))

	b = np.random.default_rng(seed).standard_normal(a.nrows)
	norm = np.linalg.norm(b)
	return b / norm if norm > 0 else b

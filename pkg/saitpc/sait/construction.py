# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Construction of the approximate inverses by the dropped Horner recursion."""

import logging
from functools import partial
from typing import Callable

import numpy as np

from ..sparse import TriangularKind
from ..sparse.csr import CsrMatrix, SparsityPattern, pattern_union
from ..sparse.kernels import (add_identity, drop_by_pattern, drop_by_threshold,
                              scale_columns, spgemm, structural_spgemm)
from . import SaitPatParams, SaitThrParams
from .jacobi import jacobi_split

logger = logging.getLogger("sait")

DropRule = Callable[[CsrMatrix], CsrMatrix]

STALL_RTOL = 1e-15
"""A step changing neither the pattern nor any value by more than this (relative to the
largest magnitude) ends the recursion early.
"""


def keep_all(mat: CsrMatrix) -> CsrMatrix:
	return mat

def _stalled(old: CsrMatrix, new: CsrMatrix) -> bool:
	if not (np.array_equal(old.row_ptr, new.row_ptr) and np.array_equal(old.col_idx, new.col_idx)):
		return False
	if new.nnz == 0:
		return True

	delta = np.max(np.abs(new.values - old.values))
	return bool(delta <= STALL_RTOL * new.max_abs())

def _recurse(tt: CsrMatrix, mat: CsrMatrix, steps: int, drop: DropRule) -> CsrMatrix:
	"""Run ``steps`` iterations of ``M <- drop(tT @ M + I)``."""

	for step in range(1, steps + 1):
		new = drop(add_identity(spgemm(tt, mat)))
		logger.debug("step %d: nnz=%d", step, new.nnz)

		if _stalled(mat, new):
			logger.debug("recursion stalled at step %d, skipping the remaining %d", step, steps - step)
			return new

		mat = new

	return mat

def sait_core(t: CsrMatrix, kind: TriangularKind, drop: DropRule, m: int) -> CsrMatrix:
	"""Approximate ``t^-1`` by ``m`` dropped Horner steps followed by the ``D^-1`` scaling.
	Without dropping, the result times ``D`` is ``I + tT + ... + tT^m``.
	"""

	split = jacobi_split(t, kind)

	mat = _recurse(split.tT, CsrMatrix.identity(t.nrows), m, drop)
	return scale_columns(mat, split.inv_diag)

def sait_thr(t: CsrMatrix, kind: TriangularKind, params: SaitThrParams) -> CsrMatrix:
	"""Threshold-based approximate inverse. Entries below ``tau`` are dropped after every
	step, before the final scaling, so ``tau`` applies to the unit-diagonal polynomial.
	"""

	logger.info("building %s for %s matrix of size %d", params, kind, t.nrows)
	return sait_core(t, kind, partial(drop_by_threshold, tau=params.tau), params.m)

def _grow_pattern(tt: CsrMatrix, p: int) -> SparsityPattern:
	diag = SparsityPattern.diagonal(tt.nrows)
	pattern = diag

	for step in range(1, p + 1):
		new = pattern_union(structural_spgemm(tt, pattern), diag)
		if new == pattern:
			logger.debug("pattern growth stalled at step %d", step)
			break
		pattern = new

	return pattern

def sait_pattern(t: CsrMatrix, kind: TriangularKind, p: int) -> SparsityPattern:
	"""Structural pattern of ``I + tT + ... + tT^p``, the pattern of ``t^p``."""

	return _grow_pattern(jacobi_split(t, kind).tT, p)

def sait_pat(t: CsrMatrix, kind: TriangularKind, params: SaitPatParams) -> CsrMatrix:
	"""Pattern-based approximate inverse: ``p`` steps without dropping, then ``m`` steps
	masked to the structural pattern reached after those ``p`` steps.
	"""

	logger.info("building %s for %s matrix of size %d", params, kind, t.nrows)

	split = jacobi_split(t, kind)
	pattern = _grow_pattern(split.tT, params.p)
	logger.debug("frozen pattern has %d entries", pattern.nnz)

	mat = _recurse(split.tT, CsrMatrix.identity(t.nrows), params.p, keep_all)
	mat = _recurse(split.tT, mat, params.m, partial(drop_by_pattern, pattern=pattern))

	return scale_columns(mat, split.inv_diag)

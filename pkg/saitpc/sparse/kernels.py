# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Sparse kernels on :class:`~saitpc.sparse.csr.CsrMatrix`.

Products go through the compiled scipy CSR routines, which accumulate every output row
in the column order of the left operand, so results are reproducible run to run. SpMV
and SpMM may split the rows of ``A`` into contiguous blocks evaluated on a thread pool;
each output row is computed by exactly one block, which keeps the result independent of
the thread count.

Triangular substitution is sequential and single-threaded.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Union

import numpy as np
import scipy.sparse.linalg

from .. import SaitDimensionError, SaitSingularError, SaitValueError
from . import TriangularKind
from .csr import (INDEX_DTYPE, VALUE_DTYPE, CsrMatrix, SparsityPattern,
                  from_arrays, pattern_of)

logger = logging.getLogger("kernels")

PARALLEL_MIN_ROWS = 4096
"""Below this row count SpMV always runs on the calling thread."""


@lru_cache(maxsize=None)
def _executor(threads: int) -> ThreadPoolExecutor:
	return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="saitpc-spmv")

def _row_parallel(a: CsrMatrix, x: np.ndarray, threads: int) -> np.ndarray:
	if threads <= 1 or a.nrows < PARALLEL_MIN_ROWS:
		return a.as_scipy @ x

	bounds = np.linspace(0, a.nrows, threads + 1).astype(int)
	out = np.empty((a.nrows,) + x.shape[1:], dtype=VALUE_DTYPE)

	def work(start, stop):
		out[start:stop] = a.row_block(start, stop) @ x

	futures = [_executor(threads).submit(work, int(start), int(stop)) for start, stop in zip(bounds[:-1], bounds[1:]) if stop > start]
	for f in futures:
		f.result()

	return out

def spmv(a: CsrMatrix, x, threads: int = 1) -> np.ndarray:
	"""Sparse matrix times dense vector."""

	x = np.asarray(x, dtype=VALUE_DTYPE)
	if x.ndim != 1 or len(x) != a.ncols:
		raise SaitDimensionError(f"cannot multiply {a.nrows}x{a.ncols} matrix with vector of shape {x.shape}")

	return _row_parallel(a, x, threads)

def spmm(a: CsrMatrix, x, threads: int = 1) -> np.ndarray:
	"""Sparse matrix times dense block of column vectors."""

	x = np.asarray(x, dtype=VALUE_DTYPE)
	if x.ndim != 2 or x.shape[0] != a.ncols:
		raise SaitDimensionError(f"cannot multiply {a.nrows}x{a.ncols} matrix with block of shape {x.shape}")

	return _row_parallel(a, x, threads)

def spgemm(a: CsrMatrix, b: CsrMatrix) -> CsrMatrix:
	"""Sparse matrix product. Entries that cancel to exactly zero may be missing from the
	result, so its pattern is a subset of :func:`structural_spgemm`.
	"""

	if a.ncols != b.nrows:
		raise SaitDimensionError(f"cannot multiply {a.nrows}x{a.ncols} and {b.nrows}x{b.ncols} matrices")

	return CsrMatrix.from_scipy(a.as_scipy @ b.as_scipy)

def structural_spgemm(a: Union[CsrMatrix, SparsityPattern], b: Union[CsrMatrix, SparsityPattern]) -> SparsityPattern:
	"""Pattern of the product assuming no numerical cancellation."""

	a, b = pattern_of(a), pattern_of(b)
	if a.ncols != b.nrows:
		raise SaitDimensionError(f"cannot multiply {a.nrows}x{a.ncols} and {b.nrows}x{b.ncols} patterns")

	# all-ones operands: every structural product position sums strictly positive terms
	return pattern_of(spgemm(a.to_matrix(), b.to_matrix()))

def add_identity(mat: CsrMatrix) -> CsrMatrix:
	"""``mat + I``. Every diagonal position is present in the result, even where the sum
	is zero.
	"""

	if not mat.is_square:
		raise SaitDimensionError(f"cannot add identity to non-square {mat.nrows}x{mat.ncols} matrix")

	n = mat.nrows
	diag = np.arange(n, dtype=INDEX_DTYPE)

	return from_arrays(n, n,
		np.concatenate([mat.row_idx, diag]),
		np.concatenate([mat.col_idx, diag]),
		np.concatenate([mat.values, np.ones(n, dtype=VALUE_DTYPE)]))

def scale_columns(mat: CsrMatrix, scale) -> CsrMatrix:
	"""``mat @ diag(scale)``, same structure as ``mat``."""

	scale = np.asarray(scale, dtype=VALUE_DTYPE)
	if scale.shape != (mat.ncols,):
		raise SaitDimensionError(f"scale vector of shape {scale.shape} does not match {mat.ncols} columns")

	return CsrMatrix(mat.nrows, mat.ncols, mat.row_ptr, mat.col_idx, mat.values * scale[mat.col_idx])

def _keep(mat: CsrMatrix, mask: np.ndarray) -> CsrMatrix:
	row_ptr = np.zeros(mat.nrows + 1, dtype=INDEX_DTYPE)
	np.cumsum(np.bincount(mat.row_idx[mask], minlength=mat.nrows), out=row_ptr[1:])
	return CsrMatrix(mat.nrows, mat.ncols, row_ptr, mat.col_idx[mask], mat.values[mask])

def drop_by_threshold(mat: CsrMatrix, tau: float) -> CsrMatrix:
	"""Remove every off-diagonal entry with magnitude below ``tau``. Diagonal entries are
	always kept. ``tau = 0`` returns ``mat`` itself.
	"""

	if not 0.0 <= tau < 1.0:
		raise SaitValueError(f"drop threshold must lie in [0, 1), got {tau}")

	if tau == 0.0:
		return mat

	mask = (np.abs(mat.values) >= tau) | (mat.row_idx == mat.col_idx)
	if mask.all():
		return mat

	return _keep(mat, mask)

def drop_by_pattern(mat: CsrMatrix, pattern: SparsityPattern) -> CsrMatrix:
	"""Remove every entry outside ``pattern``; kept values are unchanged."""

	if mat.shape != pattern.shape:
		raise SaitDimensionError(f"matrix shape {mat.shape} does not match pattern shape {pattern.shape}")

	mask = np.isin(mat.keys, pattern.keys, assume_unique=True)
	if mask.all():
		return mat

	return _keep(mat, mask)

def purge_zeros(mat: CsrMatrix) -> CsrMatrix:
	"""Remove explicitly stored zeros."""

	mask = mat.values != 0.0
	if mask.all():
		return mat

	return _keep(mat, mask)

def check_triangular(mat: CsrMatrix, kind: TriangularKind):
	"""Raise if ``mat`` is not square, not of triangle ``kind`` or has a zero diagonal. For
	a unit ``kind`` every diagonal entry must be stored as exactly one.
	"""

	if not mat.is_square:
		raise SaitDimensionError(f"triangular matrix must be square, got {mat.nrows}x{mat.ncols}")

	if not mat.is_triangular(kind):
		raise SaitValueError(f"matrix has entries outside the {kind} triangle")

	diag = mat.diagonal()
	zero = np.flatnonzero(diag == 0.0)
	if len(zero) > 0:
		raise SaitSingularError(f"zero diagonal in row {zero[0]}", int(zero[0]))

	if kind.unit_diagonal:
		off_unit = np.flatnonzero(diag != 1.0)
		if len(off_unit) > 0:
			row = int(off_unit[0])
			raise SaitValueError(f"diagonal entry {diag[row]:g} in row {row} of a {kind} matrix")

def trisolve(t: CsrMatrix, kind: TriangularKind, b) -> np.ndarray:
	"""Solve ``t @ x = b`` by forward (lower) or backward (upper) substitution. ``b`` may
	be a vector or a block of column vectors.
	"""

	check_triangular(t, kind)
	return substitute(t, kind, b)

def substitute(t: CsrMatrix, kind: TriangularKind, b) -> np.ndarray:
	"""Substitution without the structural checks of :func:`trisolve`, for callers that
	validated ``t`` once up front.
	"""

	b = np.asarray(b, dtype=VALUE_DTYPE)
	if b.ndim == 0 or b.ndim > 2 or b.shape[0] != t.nrows:
		raise SaitDimensionError(f"right hand side of shape {b.shape} does not match {t.nrows}x{t.ncols} matrix")

	if t.nrows == 0:
		return b.copy()

	# unit diagonals are stored, so the general substitution is exact for them too
	# scipy's SuperLU backend only accepts C int indices
	a = t.scipy_copy
	a.indices = a.indices.astype(np.intc)
	a.indptr = a.indptr.astype(np.intc)
	return scipy.sparse.linalg.spsolve_triangular(a, b, lower=kind.lower)

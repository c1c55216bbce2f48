# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Level-of-fill incomplete LU factorization, ILU(k).

The factorization runs row by row (IKJ, up-looking), which matches the CSR layout. Each
row goes through two phases:

1) Symbolic: fill levels are propagated with ``lev(i,j) = min_k lev(i,k) + lev(k,j) + 1``
   over the already factored rows ``k``; positions with a level above ``k`` are not
   created. Original entries of ``A`` and the diagonal have level 0.
2) Numeric: Gaussian elimination restricted to the pattern found in 1), so that
   ``(L @ U)[i, j] == A[i, j]`` at every retained position.

There is no pivoting. A pivot below ``1e-14 * max|A|`` raises
:exc:`~saitpc.SaitBreakdownError` naming the row.
"""

import heapq
import logging
from dataclasses import dataclass

import numpy as np

from .. import SaitBreakdownError, SaitDimensionError
from . import UNIT_LOWER, UPPER
from .csr import INDEX_DTYPE, CsrMatrix, pattern_of
from .kernels import drop_by_pattern, spgemm

logger = logging.getLogger("ilu")

PIVOT_RTOL = 1e-14


@dataclass(frozen=True)
class IluFactors:
	"""The factors ``L`` (unit lower, diagonal stored) and ``U`` (upper) of ILU(level)."""

	L: CsrMatrix
	U: CsrMatrix
	level: int

	L_KIND = UNIT_LOWER
	U_KIND = UPPER

	@property
	def nnz(self) -> int:
		return self.L.nnz + self.U.nnz


def _to_csr(n: int, rows_cols: "list[list[int]]", rows_vals: "list[list[float]]") -> CsrMatrix:
	counts = np.fromiter((len(c) for c in rows_cols), dtype=INDEX_DTYPE, count=n)
	row_ptr = np.zeros(n + 1, dtype=INDEX_DTYPE)
	np.cumsum(counts, out=row_ptr[1:])

	nnz = int(row_ptr[-1])
	col_idx = np.fromiter((c for row in rows_cols for c in row), dtype=INDEX_DTYPE, count=nnz)
	values = np.fromiter((v for row in rows_vals for v in row), dtype=np.float64, count=nnz)
	return CsrMatrix(n, n, row_ptr, col_idx, values)

def ilu_k(a: CsrMatrix, level: int) -> IluFactors:
	"""Compute the ILU(``level``) factors of the square matrix ``a``."""

	if not a.is_square:
		raise SaitDimensionError(f"ILU needs a square matrix, got {a.nrows}x{a.ncols}")
	if level < 0:
		raise SaitDimensionError(f"fill level must be non-negative, got {level}")

	n = a.nrows
	pivot_tol = PIVOT_RTOL * a.max_abs()

	a_ptr = a.row_ptr.tolist()
	a_cols = a.col_idx.tolist()
	a_vals = a.values.tolist()

	# strictly upper part of every factored row of U, with the fill level of each entry
	u_cols: "list[list[int]]" = [None] * n
	u_vals: "list[list[float]]" = [None] * n
	u_levs: "list[list[int]]" = [None] * n
	u_diag: "list[float]" = [0.0] * n

	l_rows_cols, l_rows_vals = [], []
	u_rows_cols, u_rows_vals = [], []

	logger.info("computing ILU(%d) of %dx%d matrix with %d entries", level, n, n, a.nnz)

	for i in range(n):
		start, stop = a_ptr[i], a_ptr[i + 1]
		row_cols = a_cols[start:stop]

		lev = dict.fromkeys(row_cols, 0)
		lev.setdefault(i, 0)

		# symbolic phase, lower positions are visited in increasing column order
		heap = [j for j in lev if j < i]
		heapq.heapify(heap)
		lower = []

		while heap:
			k = heapq.heappop(heap)
			lower.append(k)

			lk = lev[k] + 1
			if lk > level:
				continue

			for j, lkj in zip(u_cols[k], u_levs[k]):
				new = lk + lkj
				if new > level:
					continue

				old = lev.get(j)
				if old is None:
					lev[j] = new
					if j < i:
						heapq.heappush(heap, j)
				elif new < old:
					lev[j] = new

		# numeric phase
		w = dict.fromkeys(lev, 0.0)
		for j, v in zip(row_cols, a_vals[start:stop]):
			w[j] = v

		for k in lower:
			mult = w[k] / u_diag[k]
			w[k] = mult
			for j, ukj in zip(u_cols[k], u_vals[k]):
				if j in w:
					w[j] -= mult * ukj

		pivot = w[i]
		if not abs(pivot) >= pivot_tol or pivot == 0.0:
			raise SaitBreakdownError(f"ILU({level}) pivot breakdown in row {i}: |u_ii| = {abs(pivot):.3e}", i)

		upper = sorted(j for j in lev if j > i)

		l_rows_cols.append(lower + [i])
		l_rows_vals.append([w[k] for k in lower] + [1.0])

		u_cols[i] = upper
		u_vals[i] = [w[j] for j in upper]
		u_levs[i] = [lev[j] for j in upper]
		u_diag[i] = pivot

		u_rows_cols.append([i] + upper)
		u_rows_vals.append([pivot] + u_vals[i])

	factors = IluFactors(_to_csr(n, l_rows_cols, l_rows_vals), _to_csr(n, u_rows_cols, u_rows_vals), level)
	logger.info("ILU(%d) done, nnz(L)=%d nnz(U)=%d", level, factors.L.nnz, factors.U.nnz)
	return factors

def ilu_residual_on_pattern(a: CsrMatrix, factors: IluFactors) -> float:
	"""``max |(L @ U)[i, j] - A[i, j]|`` over the stored positions of ``a``."""

	if a.shape != factors.L.shape or a.shape != factors.U.shape:
		raise SaitDimensionError(f"factor shapes do not match {a.nrows}x{a.ncols} matrix")

	if a.nnz == 0:
		return 0.0

	lu = drop_by_pattern(spgemm(factors.L, factors.U), pattern_of(a))

	lu_on_a = np.zeros(a.nnz)
	lu_on_a[np.searchsorted(a.keys, lu.keys)] = lu.values
	return float(np.max(np.abs(lu_on_a - a.values)))

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Jacobi splitting of a triangular matrix and the sweep applicator."""

import logging
from dataclasses import dataclass

import numpy as np

from .. import SaitValueError
from ..sparse import TriangularKind
from ..sparse.csr import INDEX_DTYPE, CsrMatrix
from ..sparse.kernels import check_triangular, spmm, spmv

logger = logging.getLogger("jacobi")


@dataclass(frozen=True)
class JacobiSplit:
	"""``T = D (I - tT)``: the inverse diagonal of ``T`` and the strictly triangular
	iteration matrix ``tT = I - D^-1 T``.
	"""

	inv_diag: np.ndarray
	tT: CsrMatrix
	kind: TriangularKind

	def sweep(self, b, k: int, threads: int = 1) -> np.ndarray:
		"""``k`` Jacobi sweeps for ``T x = b`` from ``x = 0``. ``b`` may be a block."""

		if k < 1:
			raise SaitValueError(f"sweep count must be positive, got {k}")

		b = np.asarray(b, dtype=np.float64)
		if b.ndim == 2:
			db = self.inv_diag[:, np.newaxis] * b
			mult = spmm
		else:
			db = self.inv_diag * b
			mult = spmv

		x = db
		for _ in range(k - 1):
			x = mult(self.tT, x, threads) + db

		return x

def jacobi_split(t: CsrMatrix, kind: TriangularKind) -> JacobiSplit:
	"""Split the triangular ``t`` into inverse diagonal and iteration matrix."""

	check_triangular(t, kind)

	inv_diag = 1.0 / t.diagonal()

	off = t.row_idx != t.col_idx
	rows = t.row_idx[off]

	row_ptr = np.zeros(t.nrows + 1, dtype=INDEX_DTYPE)
	np.cumsum(np.bincount(rows, minlength=t.nrows), out=row_ptr[1:])

	tt = CsrMatrix(t.nrows, t.ncols, row_ptr, t.col_idx[off], -t.values[off] * inv_diag[rows])

	logger.debug("split %s matrix of size %d, nnz(tT)=%d", kind, t.nrows, tt.nnz)
	return JacobiSplit(inv_diag, tt, kind)

def jacobi_sweeps_apply(t: CsrMatrix, kind: TriangularKind, b, k: int) -> np.ndarray:
	"""Approximate ``t^-1 b`` by ``k`` Jacobi sweeps from a zero initial guess, i.e.
	``(I + tT + ... + tT^(k-1)) D^-1 b``.
	"""

	return jacobi_split(t, kind).sweep(b, k)

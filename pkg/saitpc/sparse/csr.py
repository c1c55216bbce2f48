# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Compressed sparse row containers.

:class:`CsrMatrix` carries every matrix of the library: the system matrix, the ILU
factors, the Jacobi iteration matrices and the approximate inverses. It is immutable
after construction, its arrays are marked read-only, and 64 bit indices are used
throughout. :class:`SparsityPattern` is the same layout without values.

Conversion to :mod:`scipy.sparse` is cheap (the arrays are shared) and is how the
compiled kernels in :mod:`saitpc.sparse.kernels` are reached.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

import numpy as np
import scipy.sparse

from .. import SaitDimensionError, SaitIndexError, SaitValueError
from . import TriangularKind

logger = logging.getLogger("csr")

INDEX_DTYPE = np.int64
VALUE_DTYPE = np.float64


def _readonly(arr: np.ndarray) -> np.ndarray:
	arr.flags.writeable = False
	return arr

def _check_structure(nrows: int, ncols: int, row_ptr: np.ndarray, col_idx: np.ndarray):
	"""Validate the CSR structural invariants, raising :exc:`SaitValueError` on the first
	violation found.
	"""

	if nrows < 0 or ncols < 0:
		raise SaitValueError(f"negative shape {nrows}x{ncols}")
	if row_ptr.ndim != 1 or len(row_ptr) != nrows + 1:
		raise SaitValueError(f"row_ptr has length {len(row_ptr)}, expected {nrows + 1}")
	if row_ptr[0] != 0:
		raise SaitValueError("row_ptr[0] must be 0")
	if np.any(np.diff(row_ptr) < 0):
		raise SaitValueError("row_ptr is not non-decreasing")
	if row_ptr[-1] != len(col_idx):
		raise SaitValueError(f"row_ptr[-1]={row_ptr[-1]} does not match nnz={len(col_idx)}")

	nnz = len(col_idx)
	if nnz == 0:
		return

	if col_idx.min() < 0 or col_idx.max() >= ncols:
		raise SaitValueError(f"column index out of range [0, {ncols})")

	# columns must increase strictly, except across row boundaries
	increasing = np.diff(col_idx) > 0
	boundary = np.zeros(nnz - 1, dtype=bool)
	starts = row_ptr[1:-1]
	starts = starts[(starts > 0) & (starts < nnz)]
	boundary[starts - 1] = True
	bad = np.flatnonzero(~increasing & ~boundary)
	if len(bad) > 0:
		row = int(np.searchsorted(row_ptr, bad[0], side="right") - 1)
		raise SaitValueError(f"column indices of row {row} are not strictly increasing")


@dataclass(frozen=True, eq=False)
class SparsityPattern:
	"""Positions-only view of a CSR matrix."""

	nrows: int
	ncols: int
	row_ptr: np.ndarray
	col_idx: np.ndarray

	def __post_init__(self):
		object.__setattr__(self, "row_ptr", _readonly(np.array(self.row_ptr, dtype=INDEX_DTYPE)))
		object.__setattr__(self, "col_idx", _readonly(np.array(self.col_idx, dtype=INDEX_DTYPE)))
		_check_structure(self.nrows, self.ncols, self.row_ptr, self.col_idx)

	@property
	def shape(self) -> "tuple[int, int]":
		return (self.nrows, self.ncols)

	@property
	def nnz(self) -> int:
		return len(self.col_idx)

	@cached_property
	def row_idx(self) -> np.ndarray:
		"""Row index of every stored position."""
		return _readonly(np.repeat(np.arange(self.nrows, dtype=INDEX_DTYPE), np.diff(self.row_ptr)))

	@cached_property
	def keys(self) -> np.ndarray:
		"""Linearized positions ``row * ncols + col``, sorted ascending."""
		return _readonly(self.row_idx * self.ncols + self.col_idx)

	def to_matrix(self, value: float = 1.0) -> "CsrMatrix":
		return CsrMatrix(self.nrows, self.ncols, self.row_ptr, self.col_idx,
			np.full(self.nnz, value, dtype=VALUE_DTYPE))

	def issubset(self, other: "SparsityPattern") -> bool:
		if self.shape != other.shape:
			return False
		return bool(np.all(np.isin(self.keys, other.keys, assume_unique=True)))

	def __eq__(self, other) -> bool:
		if not isinstance(other, SparsityPattern):
			return NotImplemented
		return self.shape == other.shape and np.array_equal(self.row_ptr, other.row_ptr) \
			and np.array_equal(self.col_idx, other.col_idx)

	__hash__ = object.__hash__

	@classmethod
	def diagonal(cls, n: int) -> "SparsityPattern":
		return cls(n, n, np.arange(n + 1, dtype=INDEX_DTYPE), np.arange(n, dtype=INDEX_DTYPE))

	def __str__(self) -> str:
		return f"<SparsityPattern object>: shape={self.nrows}x{self.ncols}, nnz={self.nnz}"


@dataclass(frozen=True, eq=False)
class CsrMatrix:
	"""An immutable real CSR matrix.

	Within a row, column indices are strictly increasing. Explicitly stored zeros are
	allowed; see :func:`saitpc.sparse.kernels.purge_zeros`.
	"""

	nrows: int
	ncols: int
	row_ptr: np.ndarray
	col_idx: np.ndarray
	values: np.ndarray
	_row_blocks: dict = field(default_factory=dict, init=False, repr=False)

	def __post_init__(self):
		object.__setattr__(self, "row_ptr", _readonly(np.array(self.row_ptr, dtype=INDEX_DTYPE)))
		object.__setattr__(self, "col_idx", _readonly(np.array(self.col_idx, dtype=INDEX_DTYPE)))
		object.__setattr__(self, "values", _readonly(np.array(self.values, dtype=VALUE_DTYPE)))

		_check_structure(self.nrows, self.ncols, self.row_ptr, self.col_idx)
		if self.values.ndim != 1 or len(self.values) != len(self.col_idx):
			raise SaitValueError(f"values has length {len(self.values)}, expected {len(self.col_idx)}")

	@property
	def shape(self) -> "tuple[int, int]":
		return (self.nrows, self.ncols)

	@property
	def nnz(self) -> int:
		return len(self.col_idx)

	@property
	def is_square(self) -> bool:
		return self.nrows == self.ncols

	@cached_property
	def row_idx(self) -> np.ndarray:
		"""Row index of every stored entry."""
		return _readonly(np.repeat(np.arange(self.nrows, dtype=INDEX_DTYPE), np.diff(self.row_ptr)))

	@cached_property
	def keys(self) -> np.ndarray:
		return _readonly(self.row_idx * self.ncols + self.col_idx)

	@cached_property
	def as_scipy(self) -> scipy.sparse.csr_array:
		"""A :class:`scipy.sparse.csr_array` sharing this matrix' arrays."""

		ret = scipy.sparse.csr_array((self.values, self.col_idx, self.row_ptr), shape=self.shape)
		# both hold by construction, setting them keeps scipy from rewriting the arrays
		ret.has_sorted_indices = True
		ret.has_canonical_format = True
		return ret

	@cached_property
	def scipy_copy(self) -> scipy.sparse.csr_array:
		"""A writable copy of :attr:`as_scipy`, for scipy routines that may convert or
		modify their input in place.
		"""

		return scipy.sparse.csr_array(self.as_scipy, copy=True)

	def row_block(self, start: int, stop: int) -> scipy.sparse.csr_array:
		"""The rows ``start:stop`` as a scipy matrix, cached for repeated parallel SpMV."""

		key = (start, stop)
		if key not in self._row_blocks:
			lo, hi = self.row_ptr[start], self.row_ptr[stop]
			block = scipy.sparse.csr_array((self.values[lo:hi], self.col_idx[lo:hi], self.row_ptr[start:stop + 1] - lo),
				shape=(stop - start, self.ncols))
			block.has_sorted_indices = True
			block.has_canonical_format = True
			self._row_blocks[key] = block
		return self._row_blocks[key]

	def diagonal(self) -> np.ndarray:
		"""Diagonal values, zero where no diagonal entry is stored."""

		n = min(self.nrows, self.ncols)
		ret = np.zeros(n, dtype=VALUE_DTYPE)
		on_diag = self.row_idx == self.col_idx
		ret[self.col_idx[on_diag]] = self.values[on_diag]
		return ret

	def has_full_diagonal(self) -> bool:
		return int(np.count_nonzero(self.row_idx == self.col_idx)) == min(self.nrows, self.ncols)

	def is_triangular(self, kind: TriangularKind) -> bool:
		if kind.lower:
			return not np.any(self.col_idx > self.row_idx)
		return not np.any(self.col_idx < self.row_idx)

	def transpose(self) -> "CsrMatrix":
		return CsrMatrix.from_scipy(self.as_scipy.T)

	def toarray(self) -> np.ndarray:
		"""Dense copy, meant for tests and small diagnostics only."""
		return self.as_scipy.toarray()

	def max_abs(self) -> float:
		return float(np.abs(self.values).max()) if self.nnz else 0.0

	def norm_inf(self) -> float:
		if self.nnz == 0:
			return 0.0
		return float(np.bincount(self.row_idx, weights=np.abs(self.values), minlength=self.nrows).max())

	def equals(self, other: "CsrMatrix") -> bool:
		"""Bit-exact equality of shape, structure and values."""

		return self.shape == other.shape and np.array_equal(self.row_ptr, other.row_ptr) \
			and np.array_equal(self.col_idx, other.col_idx) and np.array_equal(self.values, other.values)

	@classmethod
	def from_scipy(cls, mat) -> "CsrMatrix":
		"""Convert any scipy sparse matrix, summing duplicates and sorting column indices."""

		csr = scipy.sparse.csr_array(mat, dtype=VALUE_DTYPE, copy=True)
		csr.sum_duplicates()
		return cls(csr.shape[0], csr.shape[1], csr.indptr, csr.indices, csr.data)

	@classmethod
	def identity(cls, n: int, value: float = 1.0) -> "CsrMatrix":
		return cls(n, n, np.arange(n + 1, dtype=INDEX_DTYPE), np.arange(n, dtype=INDEX_DTYPE),
			np.full(n, value, dtype=VALUE_DTYPE))

	@classmethod
	def diag(cls, values: np.ndarray) -> "CsrMatrix":
		values = np.asarray(values, dtype=VALUE_DTYPE)
		n = len(values)
		return cls(n, n, np.arange(n + 1, dtype=INDEX_DTYPE), np.arange(n, dtype=INDEX_DTYPE), values)

	def __str__(self) -> str:
		return f"<CsrMatrix object>: shape={self.nrows}x{self.ncols}, nnz={self.nnz}"


def from_arrays(nrows: int, ncols: int, rows, cols, vals) -> CsrMatrix:
	"""Assemble a CSR matrix from coordinate arrays. Duplicates are summed in input
	order, explicitly given zeros are kept.
	"""

	rows = np.asarray(rows, dtype=INDEX_DTYPE)
	cols = np.asarray(cols, dtype=INDEX_DTYPE)
	vals = np.asarray(vals, dtype=VALUE_DTYPE)

	if not (len(rows) == len(cols) == len(vals)):
		raise SaitDimensionError("coordinate arrays differ in length")

	bad = np.flatnonzero((rows < 0) | (rows >= nrows) | (cols < 0) | (cols >= ncols))
	if len(bad) > 0:
		i = bad[0]
		raise SaitIndexError(f"entry {i} ({rows[i]}, {cols[i]}, {vals[i]}) out of range for {nrows}x{ncols} matrix")

	# lexsort is stable, so duplicates stay in input order for summation
	order = np.lexsort((cols, rows))
	rows, cols, vals = rows[order], cols[order], vals[order]

	if len(rows) > 0:
		first = np.ones(len(rows), dtype=bool)
		first[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
		starts = np.flatnonzero(first)
		if len(starts) != len(rows):
			vals = np.add.reduceat(vals, starts)
			rows, cols = rows[starts], cols[starts]

	row_ptr = np.zeros(nrows + 1, dtype=INDEX_DTYPE)
	np.cumsum(np.bincount(rows, minlength=nrows), out=row_ptr[1:])

	return CsrMatrix(nrows, ncols, row_ptr, cols, vals)

def from_triplets(nrows: int, ncols: int, triplets: "Iterable[tuple[int, int, float]]") -> CsrMatrix:
	"""Build a CSR matrix from ``(row, col, value)`` triplets, summing duplicates."""

	triplets = list(triplets)

	for t in triplets:
		row, col, _ = t
		if not (0 <= row < nrows and 0 <= col < ncols):
			raise SaitIndexError(f"triplet {t} out of range for {nrows}x{ncols} matrix")

	if not triplets:
		return from_arrays(nrows, ncols, [], [], [])

	rows, cols, vals = zip(*triplets)
	return from_arrays(nrows, ncols, rows, cols, vals)

def pattern_of(mat: Union[CsrMatrix, SparsityPattern]) -> SparsityPattern:
	if isinstance(mat, SparsityPattern):
		return mat
	return SparsityPattern(mat.nrows, mat.ncols, mat.row_ptr, mat.col_idx)

def nnz(mat: Union[CsrMatrix, SparsityPattern]) -> int:
	return mat.nnz

def nnz_ratio(mat: CsrMatrix, ref: CsrMatrix) -> float:
	"""Storage overhead ``nnz(mat) / nnz(ref)``."""

	if ref.nnz == 0:
		raise SaitValueError("reference matrix has no stored entries")
	return mat.nnz / ref.nnz

def pattern_union(a: SparsityPattern, b: SparsityPattern) -> SparsityPattern:
	if a.shape != b.shape:
		raise SaitDimensionError(f"pattern shapes differ: {a.shape} vs {b.shape}")

	keys = np.union1d(a.keys, b.keys)
	rows = keys // a.ncols
	row_ptr = np.zeros(a.nrows + 1, dtype=INDEX_DTYPE)
	np.cumsum(np.bincount(rows, minlength=a.nrows), out=row_ptr[1:])
	return SparsityPattern(a.nrows, a.ncols, row_ptr, keys % a.ncols)

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Preconditioners built from the ILU factors ``L`` and ``U`` of ``A``.

Every variant approximates ``(L U)^-1 r``:

* :class:`IdentityPrecond` does nothing.
* :class:`ExactIluPrecond` solves with ``L`` and then ``U`` by substitution.
* :class:`SaitPairPrecond` replaces both solves by products with the approximate
  inverses, ``M_U (M_L r)``.
* :class:`JacobiSweepsPrecond` replaces both solves by ``k`` Jacobi sweeps each.

Applying a preconditioner is a pure function of its argument, which may be a single
vector or a block of column vectors.
"""

import logging
from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from .. import SaitDimensionError
from ..sait import SaitPatParams, SaitThrParams
from ..sait.construction import sait_pat, sait_thr
from ..sait.jacobi import jacobi_split
from ..sparse.csr import CsrMatrix, nnz_ratio
from ..sparse.ilu import IluFactors
from ..sparse.kernels import check_triangular, spmm, spmv, substitute

logger = logging.getLogger("precond")


class PrecondOp(ABC):
	"""Base class of all preconditioners of an ``n x n`` system."""

	def __init__(self, n: int, threads: int = 1):
		self.n = n
		self.threads = threads

	@abstractmethod
	def apply(self, r: np.ndarray) -> np.ndarray:
		"""Approximate ``A^-1 r`` for a vector or block ``r`` already checked to have
		``n`` rows.
		"""

	@property
	def ratio(self) -> float:
		"""Storage of the applied operators relative to the ILU factors."""
		return 1.0

	@property
	def ratio_l(self) -> float:
		return self.ratio

	@property
	def ratio_u(self) -> float:
		return self.ratio

	def __call__(self, r) -> np.ndarray:
		return apply_precond(self, r)

class IdentityPrecond(PrecondOp):
	@property
	def ratio(self) -> float:
		return 0.0

	def apply(self, r):
		return r.copy()

	def __str__(self) -> str:
		return "none"

class ExactIluPrecond(PrecondOp):
	"""Forward substitution with ``L`` followed by backward substitution with ``U``."""

	def __init__(self, factors: IluFactors, threads: int = 1):
		super().__init__(factors.L.nrows, threads)

		check_triangular(factors.L, factors.L_KIND)
		check_triangular(factors.U, factors.U_KIND)
		self.factors = factors

	def apply(self, r):
		y = substitute(self.factors.L, self.factors.L_KIND, r)
		return substitute(self.factors.U, self.factors.U_KIND, y)

	def __str__(self) -> str:
		return "exact"

class SaitPairPrecond(PrecondOp):
	"""``M_U (M_L r)`` with sparse approximate inverses ``M_L ~ L^-1`` and ``M_U ~ U^-1``.
	Ratios are reported relative to ``factors`` if given, otherwise as ``nan``.
	"""

	def __init__(self, m_l: CsrMatrix, m_u: CsrMatrix, factors: IluFactors = None, threads: int = 1, label: str = "sait"):
		if m_l.shape != m_u.shape or not m_l.is_square:
			raise SaitDimensionError(f"approximate inverses of shapes {m_l.shape} and {m_u.shape} do not form a pair")

		super().__init__(m_l.nrows, threads)
		self.m_l = m_l
		self.m_u = m_u
		self.factors = factors
		self.label = label

	@classmethod
	def from_thr(cls, factors: IluFactors, params: SaitThrParams, threads: int = 1) -> "SaitPairPrecond":
		m_l = sait_thr(factors.L, factors.L_KIND, params)
		m_u = sait_thr(factors.U, factors.U_KIND, params)
		return cls(m_l, m_u, factors, threads, str(params))

	@classmethod
	def from_pat(cls, factors: IluFactors, params: SaitPatParams, threads: int = 1) -> "SaitPairPrecond":
		m_l = sait_pat(factors.L, factors.L_KIND, params)
		m_u = sait_pat(factors.U, factors.U_KIND, params)
		return cls(m_l, m_u, factors, threads, str(params))

	@property
	def ratio(self) -> float:
		if self.factors is None:
			return float("nan")
		return (self.m_l.nnz + self.m_u.nnz) / self.factors.nnz

	@property
	def ratio_l(self) -> float:
		return float("nan") if self.factors is None else nnz_ratio(self.m_l, self.factors.L)

	@property
	def ratio_u(self) -> float:
		return float("nan") if self.factors is None else nnz_ratio(self.m_u, self.factors.U)

	def apply(self, r):
		mult = spmm if r.ndim == 2 else spmv
		return mult(self.m_u, mult(self.m_l, r, self.threads), self.threads)

	def __str__(self) -> str:
		return self.label

class JacobiSweepsPrecond(PrecondOp):
	"""``k`` Jacobi sweeps on ``L y = r`` followed by ``k`` sweeps on ``U x = y``."""

	def __init__(self, factors: IluFactors, k: int, threads: int = 1):
		super().__init__(factors.L.nrows, threads)
		self.factors = factors
		self.k = k

		self._split_l = jacobi_split(factors.L, factors.L_KIND)
		self._split_u = jacobi_split(factors.U, factors.U_KIND)

	def apply(self, r):
		y = self._split_l.sweep(r, self.k, self.threads)
		return self._split_u.sweep(y, self.k, self.threads)

	def __str__(self) -> str:
		return f"jacobi({self.k})"


def apply_precond(precond: PrecondOp, r: Union[np.ndarray, list]) -> np.ndarray:
	"""Apply ``precond`` to the vector or block ``r``, result has the shape of ``r``."""

	r = np.asarray(r, dtype=np.float64)
	if r.ndim not in (1, 2) or r.shape[0] != precond.n:
		raise SaitDimensionError(f"cannot apply preconditioner of size {precond.n} to array of shape {r.shape}")

	return precond.apply(r)

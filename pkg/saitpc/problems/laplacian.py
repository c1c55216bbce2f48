# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Seven point finite difference Laplacian on a uniform grid of the unit cube.

Only interior points are unknowns (homogeneous Dirichlet boundary), numbered
lexicographically with ``i`` running fastest: ``idx = i + n j + n^2 k``. The stencil is
unscaled, diagonal ``6`` and ``-1`` for each of the up to six neighbours, so eigenvalues
are those of ``h^2`` times the scaled operator.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .. import SaitCapacityError, SaitValueError
from ..sparse.csr import CsrMatrix

logger = logging.getLogger("laplacian")

DEFAULT_MEMORY_BUDGET = 8 * 2**30

ASSEMBLY_OVERHEAD = 4
"""Peak memory of the Kronecker assembly in multiples of the final CSR storage."""


@dataclass(frozen=True)
class Grid3D:
	"""Uniform grid with ``n`` interior points per axis and mesh width ``h = 1/(n+1)``."""

	n: int

	def __post_init__(self):
		if self.n < 1:
			raise SaitValueError(f"grid needs at least one interior point per axis, got {self.n}")

	@property
	def h(self) -> float:
		return 1.0 / (self.n + 1)

	@property
	def size(self) -> int:
		return self.n ** 3

	@property
	def nnz(self) -> int:
		return 7 * self.n ** 3 - 6 * self.n ** 2

	def storage_bytes(self) -> int:
		"""Bytes of the assembled CSR matrix with 64 bit indices and values."""
		return 16 * self.nnz + 8 * (self.size + 1)

	def analytic_eigenvalues(self, count: int) -> np.ndarray:
		"""The ``count`` smallest eigenvalues of the unscaled stencil in ascending order,
		``4 (sin^2(pi i h/2) + sin^2(pi j h/2) + sin^2(pi k h/2))`` for ``1 <= i, j, k <= n``.
		"""

		if not 1 <= count <= self.size:
			raise SaitValueError(f"grid has {self.size} eigenvalues, {count} requested")

		axis = 4.0 * np.sin(np.pi * np.arange(1, self.n + 1) * self.h / 2) ** 2
		# the smallest count values only involve the smallest count modes per axis
		axis = axis[:min(count, self.n)]
		vals = (axis[:, None, None] + axis[None, :, None] + axis[None, None, :]).ravel()
		return np.sort(vals)[:count]


def laplacian_3d(n: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> CsrMatrix:
	"""Assemble the ``n^3 x n^3`` Laplacian with ``7 n^3 - 6 n^2`` stored entries."""

	grid = Grid3D(n)

	need = ASSEMBLY_OVERHEAD * grid.storage_bytes()
	if need > memory_budget:
		raise SaitCapacityError(f"laplacian of {n}^3 points needs about {need / 2**30:.1f} GiB, budget is {memory_budget / 2**30:.1f} GiB")

	logger.info("assembling 3D laplacian, n=%d, %d rows", n, grid.size)

	tri = scipy.sparse.diags_array([-1.0, 2.0, -1.0], offsets=[-1, 0, 1], shape=(n, n), format="csr")
	eye = scipy.sparse.eye_array(n, format="csr")

	a = scipy.sparse.kron(eye, scipy.sparse.kron(eye, tri)) \
		+ scipy.sparse.kron(eye, scipy.sparse.kron(tri, eye)) \
		+ scipy.sparse.kron(tri, scipy.sparse.kron(eye, eye))

	return CsrMatrix.from_scipy(a)

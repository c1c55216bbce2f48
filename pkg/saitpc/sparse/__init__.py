# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""This module contains the sparse matrix layer everything else is built from.

* :mod:`saitpc.sparse.csr`, the immutable :class:`~saitpc.sparse.csr.CsrMatrix` and
  :class:`~saitpc.sparse.csr.SparsityPattern` containers and their construction.
* :mod:`saitpc.sparse.kernels`, SpMV, SpGEMM, dropping and triangular substitution.
* :mod:`saitpc.sparse.ilu`, level-of-fill incomplete LU factorization.

Triangular matrices are tagged with a :class:`TriangularKind`. Unit diagonals are always
stored explicitly, so a unit triangular factor is an ordinary CSR matrix whose diagonal
values all equal one.
"""

from dataclasses import dataclass
from enum import Enum, auto


class Triangle(Enum):
	"""Which triangle of a square matrix holds its off-diagonal entries."""

	LOWER = auto()
	UPPER = auto()

@dataclass(frozen=True)
class TriangularKind:
	triangle: Triangle
	unit_diagonal: bool = False

	@property
	def lower(self) -> bool:
		return self.triangle is Triangle.LOWER

	def __str__(self) -> str:
		unit = "unit " if self.unit_diagonal else ""
		return f"{unit}{self.triangle.name.lower()}"

LOWER = TriangularKind(Triangle.LOWER)
UPPER = TriangularKind(Triangle.UPPER)
UNIT_LOWER = TriangularKind(Triangle.LOWER, unit_diagonal=True)

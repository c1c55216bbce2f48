# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Sparse approximate inverses of triangular matrices based on Jacobi iteration.

For a triangular ``T`` with diagonal ``D`` let ``tT = I - D^-1 T``, a strictly triangular
and therefore nilpotent matrix. The Jacobi iterates for ``T x = b`` from ``x = 0`` are
``x_k = (I + tT + ... + tT^(k-1)) D^-1 b``, and the series is finite, so

	T^-1 = (I + tT + ... + tT^(n-1)) D^-1.

The approximate inverse evaluates the truncated series in Horner form,
``M <- tT @ M + I`` for ``m`` steps starting from ``M = I``, drops entries after every
step and finally scales by ``D^-1``:

* :func:`~saitpc.sait.construction.sait_thr` drops off-diagonal entries below a threshold.
* :func:`~saitpc.sait.construction.sait_pat` freezes the pattern reached after ``p``
  undropped steps and masks all later steps to it.

``m`` counts loop steps, so ``m`` undropped steps give a polynomial of degree ``m``:
``SAIT_Thr(0, m)`` applied to ``b`` equals ``m + 1`` Jacobi sweeps, see
:func:`~saitpc.sait.jacobi.jacobi_sweeps_apply`.
"""

from dataclasses import dataclass

from .. import SaitValueError


@dataclass(frozen=True)
class SaitThrParams:
	"""Parameters of the threshold-based construction."""

	tau: float
	m: int

	def __post_init__(self):
		if not 0.0 <= self.tau < 1.0:
			raise SaitValueError(f"threshold tau must lie in [0, 1), got {self.tau}")
		if self.m < 1:
			raise SaitValueError(f"step count m must be positive, got {self.m}")

	def __str__(self) -> str:
		return f"SAIT_Thr({self.tau:g},{self.m})"

@dataclass(frozen=True)
class SaitPatParams:
	"""Parameters of the pattern-based construction. Pattern size grows quickly with
	``p``, values beyond 3 or 4 are rarely useful.
	"""

	p: int
	m: int

	def __post_init__(self):
		if self.p < 0:
			raise SaitValueError(f"pattern steps p must be non-negative, got {self.p}")
		if self.m < 1:
			raise SaitValueError(f"step count m must be positive, got {self.m}")

	def __str__(self) -> str:
		return f"SAIT_Pat({self.p},{self.m})"

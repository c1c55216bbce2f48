# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""This is the top-level saitpc package. The project is divided into five parts:

* :mod:`saitpc.sparse`, CSR storage, the sparse kernels and level-of-fill ILU.
* :mod:`saitpc.sait`, sparse approximate inverses of triangular matrices built from
  the truncated Jacobi series, and the Jacobi sweep applicator.
* :mod:`saitpc.krylov`, preconditioners and the PCG / LOBPCG solvers using them.
* :mod:`saitpc.problems`, test problem generators and Matrix Market I/O.
* :mod:`saitpc.bench`, the experiment harness and its command line tools.
"""

class SaitError(Exception):
	pass

class SaitValueError(ValueError, SaitError):
	pass

class SaitDimensionError(SaitValueError):
	pass

class SaitIndexError(IndexError, SaitError):
	pass

class SaitSyntaxError(SyntaxError, SaitError):
	pass

class SaitCapacityError(MemoryError, SaitError):
	pass

class SaitRowError(ArithmeticError, SaitError):
	"""Base class for numerical failures attributable to a single matrix row."""

	def __init__(self, msg: str, row: int):
		super().__init__(msg)
		self.row = row

class SaitSingularError(SaitRowError):
	pass

class SaitBreakdownError(SaitRowError):
	pass

class SaitIndefiniteError(ArithmeticError, SaitError):
	pass

class SaitConvergenceError(ArithmeticError, SaitError):
	pass

class SaitStageError(SaitError):
	"""Wraps an error raised inside one stage of an experiment run."""

	def __init__(self, stage: str, cause: Exception):
		super().__init__(f"{stage}: {cause}")
		self.stage = stage
		self.cause = cause

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Run configuration.

Every part of an experiment has a compact string form used on the command line and in
reports, parsed with ``parse`` and rendered back with ``str``:

* problems: ``laplacian:<n>``, ``mtx:<path>``
* preconditioners: ``none``, ``exact``, ``sait-thr:<tau>:<m>``, ``sait-pat:<p>:<m>``,
  ``jacobi:<k>``
* solvers: ``pcg``, ``lobpcg:<nev>``
* sweep axes: ``<name>=<values>`` with a comma separated list of values or integer
  ranges ``a..b``, e.g. ``tau=0,0.01,0.05`` or ``m=1..15``
"""

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .. import SaitSyntaxError, SaitValueError
from ..krylov.pcg import DEFAULT_TOL
from ..problems.rhs import RhsMode
from ..sait import SaitPatParams, SaitThrParams


class ProblemKind(Enum):
	LAPLACIAN = "laplacian"
	MTX = "mtx"

class PrecondKind(Enum):
	NONE = "none"
	EXACT = "exact"
	SAIT_THR = "sait-thr"
	SAIT_PAT = "sait-pat"
	JACOBI = "jacobi"

class SolverKind(Enum):
	PCG = "pcg"
	LOBPCG = "lobpcg"


def _split(text: str, what: str, kinds: "type[Enum]", maxsplit: int = -1) -> "tuple[Enum, list[str]]":
	name, *args = text.strip().split(":", maxsplit)
	try:
		return kinds(name.lower()), args
	except ValueError:
		choices = ", ".join(k.value for k in kinds)
		raise SaitSyntaxError(f"unknown {what} '{name}' in '{text}', expected one of {choices}") from None

def _number(text: str, conv: type, what: str, spec: str) -> Union[int, float]:
	try:
		return conv(text)
	except ValueError:
		raise SaitSyntaxError(f"invalid {what} '{text}' in '{spec}'") from None

def _float(x: float) -> str:
	short = f"{x:g}"
	return short if float(short) == x else repr(x)

def _arity(args: "list[str]", count: int, usage: str, spec: str):
	if len(args) != count:
		raise SaitSyntaxError(f"'{spec}' does not match '{usage}'")


@dataclass(frozen=True)
class ProblemSpec:
	kind: ProblemKind
	n: int = None
	path: str = None

	def __post_init__(self):
		if self.kind is ProblemKind.LAPLACIAN and (self.n is None or self.n < 1):
			raise SaitValueError(f"laplacian needs a positive grid size, got {self.n}")
		if self.kind is ProblemKind.MTX and not self.path:
			raise SaitValueError("mtx problem needs a file path")

	@classmethod
	def parse(cls, text: str) -> "ProblemSpec":
		# paths may contain colons
		kind, args = _split(text, "problem", ProblemKind, maxsplit=1)

		if kind is ProblemKind.LAPLACIAN:
			_arity(args, 1, "laplacian:<n>", text)
			return cls(kind, n=_number(args[0], int, "grid size", text))

		_arity(args, 1, "mtx:<path>", text)
		return cls(kind, path=args[0])

	def __str__(self) -> str:
		if self.kind is ProblemKind.LAPLACIAN:
			return f"laplacian:{self.n}"
		return f"mtx:{self.path}"

@dataclass(frozen=True)
class PrecondSpec:
	kind: PrecondKind
	tau: float = None
	p: int = None
	m: int = None
	k: int = None

	def __post_init__(self):
		if self.kind is PrecondKind.SAIT_THR:
			if self.tau is None or self.m is None:
				raise SaitValueError("sait-thr needs a threshold and a step count")
			self.thr_params
		elif self.kind is PrecondKind.SAIT_PAT:
			if self.p is None or self.m is None:
				raise SaitValueError("sait-pat needs pattern steps and a step count")
			self.pat_params
		elif self.kind is PrecondKind.JACOBI and (self.k is None or self.k < 1):
			raise SaitValueError(f"jacobi sweep count must be positive, got {self.k}")

	@property
	def thr_params(self) -> SaitThrParams:
		return SaitThrParams(self.tau, self.m)

	@property
	def pat_params(self) -> SaitPatParams:
		return SaitPatParams(self.p, self.m)

	@property
	def needs_factors(self) -> bool:
		return self.kind is not PrecondKind.NONE

	@classmethod
	def parse(cls, text: str) -> "PrecondSpec":
		kind, args = _split(text, "preconditioner", PrecondKind)

		if kind is PrecondKind.SAIT_THR:
			_arity(args, 2, "sait-thr:<tau>:<m>", text)
			return cls(kind, tau=_number(args[0], float, "threshold", text), m=_number(args[1], int, "step count", text))

		if kind is PrecondKind.SAIT_PAT:
			_arity(args, 2, "sait-pat:<p>:<m>", text)
			return cls(kind, p=_number(args[0], int, "pattern steps", text), m=_number(args[1], int, "step count", text))

		if kind is PrecondKind.JACOBI:
			_arity(args, 1, "jacobi:<k>", text)
			return cls(kind, k=_number(args[0], int, "sweep count", text))

		_arity(args, 0, kind.value, text)
		return cls(kind)

	def __str__(self) -> str:
		if self.kind is PrecondKind.SAIT_THR:
			return f"sait-thr:{_float(self.tau)}:{self.m}"
		if self.kind is PrecondKind.SAIT_PAT:
			return f"sait-pat:{self.p}:{self.m}"
		if self.kind is PrecondKind.JACOBI:
			return f"jacobi:{self.k}"
		return self.kind.value

@dataclass(frozen=True)
class SolverSpec:
	kind: SolverKind
	nev: int = None

	def __post_init__(self):
		if self.kind is SolverKind.LOBPCG and (self.nev is None or self.nev < 1):
			raise SaitValueError(f"lobpcg needs a positive number of eigenpairs, got {self.nev}")

	@classmethod
	def parse(cls, text: str) -> "SolverSpec":
		kind, args = _split(text, "solver", SolverKind)

		if kind is SolverKind.LOBPCG:
			_arity(args, 1, "lobpcg:<nev>", text)
			return cls(kind, nev=_number(args[0], int, "eigenpair count", text))

		_arity(args, 0, "pcg", text)
		return cls(kind)

	def __str__(self) -> str:
		if self.kind is SolverKind.LOBPCG:
			return f"lobpcg:{self.nev}"
		return self.kind.value

@dataclass(frozen=True)
class ExperimentConfig:
	"""Exactly one problem, preconditioner and solver. ``out`` is where the report of
	the run goes, ``None`` meaning standard output.
	"""

	problem: ProblemSpec
	precond: PrecondSpec
	solver: SolverSpec
	ilu_level: int = 0
	tol: float = DEFAULT_TOL
	maxit: int = 10000
	seed: int = 0
	threads: int = 1
	rhs: RhsMode = RhsMode.ONES
	out: str = None

	def __post_init__(self):
		if self.ilu_level < 0:
			raise SaitValueError(f"ILU level must be non-negative, got {self.ilu_level}")
		if self.tol <= 0.0:
			raise SaitValueError(f"tolerance must be positive, got {self.tol}")
		if self.maxit < 0:
			raise SaitValueError(f"iteration limit must be non-negative, got {self.maxit}")
		if self.threads < 1:
			raise SaitValueError(f"thread count must be positive, got {self.threads}")


class AxisName(Enum):
	TAU = "tau"
	P = "p"
	M = "m"
	K = "k"
	ILU = "ilu"

_AXIS_TARGETS = {
	AxisName.TAU: (PrecondKind.SAIT_THR,),
	AxisName.P: (PrecondKind.SAIT_PAT,),
	AxisName.M: (PrecondKind.SAIT_THR, PrecondKind.SAIT_PAT),
	AxisName.K: (PrecondKind.JACOBI,),
}

@dataclass(frozen=True)
class SweepAxis:
	"""One parameter varied over a list of values."""

	name: AxisName
	values: tuple

	def __post_init__(self):
		if len(self.values) == 0:
			raise SaitValueError(f"sweep axis '{self.name.value}' has no values")

	@classmethod
	def parse(cls, text: str) -> "SweepAxis":
		name, sep, rest = text.partition("=")
		if not sep:
			raise SaitSyntaxError(f"sweep axis '{text}' does not match '<name>=<values>'")

		try:
			name = AxisName(name.strip().lower())
		except ValueError:
			choices = ", ".join(a.value for a in AxisName)
			raise SaitSyntaxError(f"unknown sweep axis '{name}', expected one of {choices}") from None

		conv = float if name is AxisName.TAU else int
		values = []

		for item in filter(None, (i.strip() for i in rest.split(","))):
			if ".." in item:
				if conv is float:
					raise SaitSyntaxError(f"ranges are only allowed for integer axes, got '{item}'")
				start, _, stop = item.partition("..")
				values.extend(range(_number(start, int, "range start", text), _number(stop, int, "range end", text) + 1))
			else:
				values.append(_number(item, conv, "value", text))

		return cls(name, tuple(values))

	def apply(self, config: ExperimentConfig, value) -> ExperimentConfig:
		"""``config`` with this axis set to ``value``."""

		if self.name is AxisName.ILU:
			return dataclasses.replace(config, ilu_level=value)

		if config.precond.kind not in _AXIS_TARGETS[self.name]:
			raise SaitValueError(f"sweep axis '{self.name.value}' does not apply to preconditioner '{config.precond}'")

		return dataclasses.replace(config, precond=dataclasses.replace(config.precond, **{self.name.value: value}))

	def __str__(self) -> str:
		return f"{self.name.value}=" + ",".join(_float(v) if isinstance(v, float) else str(v) for v in self.values)

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""The SPD matrices of the SuiteSparse Matrix Collection used in the experiments.

Files are never downloaded. :func:`lookup` maps a file name like ``apache1.mtx`` to its
entry so that the size read from disk can be checked against the collection.

Every entry carries published PCG iteration counts (tolerance ``1e-10``) for ILU(0) and
ILU(1) based preconditioners, all approximate inverses built with ``m = 10`` steps.
"""

import pathlib
from dataclasses import dataclass
from typing import Union

from .. import SaitValueError

COLLECTION_URL = "https://sparse.tamu.edu"


@dataclass(frozen=True)
class ThrReference:
	"""``SAIT_Thr(tau, 10)``: the threshold used, the nnz ratio reached and the iterations."""

	tau: float
	ratio: float
	sait: int

@dataclass(frozen=True)
class PatReference:
	"""``SAIT_Pat(p, 10)``. The published tables count the identity as the first pattern
	step, their ``p = 2, 3`` are ``p = 1, 2`` here.
	"""

	p: int
	ratio: float
	sait: int

@dataclass(frozen=True)
class LevelReference:
	"""Iteration counts with the factors of one ILU level."""

	exact: int
	thr: ThrReference
	pat: "tuple[PatReference, ...]"

	def pattern(self, p: int) -> Union[PatReference, None]:
		return next((ref for ref in self.pat if ref.p == p), None)

@dataclass(frozen=True)
class CollectionMatrix:
	name: str
	group: str
	rows: int
	nnz: int
	none: int
	"""Iterations without preconditioner."""
	levels: "tuple[LevelReference, ...]"

	@property
	def identifier(self) -> str:
		return f"{self.group}/{self.name}"

	@property
	def url(self) -> str:
		return f"{COLLECTION_URL}/{self.identifier}"

	@property
	def filename(self) -> str:
		return f"{self.name}.mtx"

	def reference(self, ilu_level: int = 0) -> LevelReference:
		if not 0 <= ilu_level < len(self.levels):
			raise SaitValueError(f"no published counts for ILU({ilu_level}) of {self.name}")
		return self.levels[ilu_level]


def _level(exact: int, tau: float, ratio: float, sait: int, pat1: "tuple[float, int]", pat2: "tuple[float, int]") -> LevelReference:
	return LevelReference(exact, ThrReference(tau, ratio, sait), (PatReference(1, *pat1), PatReference(2, *pat2)))

MATRICES = {m.name: m for m in [
	CollectionMatrix("apache1", "GHS_psdef", 80800, 542184, 3777, (
		_level(365, 0.05, 1.46, 439, (1.0, 3252), (2.41, 2236)),
		_level(249, 0.03, 1.80, 316, (1.0, 4102), (3.11, 2570)))),
	CollectionMatrix("apache2", "GHS_psdef", 715176, 4817870, 5528, (
		_level(882, 0.05, 1.39, 1092, (1.0, 2753), (2.42, 1818)),
		_level(587, 0.03, 1.70, 797, (1.0, 3521), (3.12, 2500)))),
	CollectionMatrix("thermal1", "Schmid", 82654, 574458, 1707, (
		_level(651, 0.05, 1.43, 703, (1.0, 847), (1.85, 690)),
		_level(363, 0.04, 1.76, 435, (1.0, 743), (2.49, 440)))),
	CollectionMatrix("thermal2", "Schmid", 1228045, 8580313, 6626, (
		_level(2555, 0.05, 1.42, 2763, (1.0, 3284), (1.85, 2674)),
		_level(1401, 0.04, 1.72, 1674, (1.0, 2868), (2.48, 1635)))),
	CollectionMatrix("parabolic_fem", "Wissgott", 525825, 3674625, 3515, (
		_level(1423, 0.1, 0.96, 1640, (1.0, 1678), (1.56, 1451)),
		_level(845, 0.04, 1.32, 946, (1.0, 1444), (2.38, 893)))),
	CollectionMatrix("G3_circuit", "AMD", 1585478, 7660826, 21205, (
		_level(1182, 0.08, 2.07, 1582, (1.0, 3993), (2.04, 2751)),
		_level(643, 0.08, 2.38, 1174, (1.0, 3713), (2.37, 2245)))),
	CollectionMatrix("ecology2", "McRae", 999999, 4995991, 7127, (
		_level(2123, 0.08, 2.00, 2830, (1.0, 3738), (2.00, 2799)),
		_level(1303, 0.06, 3.25, 1942, (1.0, 3765), (2.25, 2549)))),
	CollectionMatrix("thermomech_dM", "Botonakis", 204316, 1423116, 89, (
		_level(10, 0.06, 1.01, 11, (1.0, 11), (1.60, 10)),
		_level(6, 0.02, 1.02, 8, (1.0, 10), (2.37, 6)))),
	CollectionMatrix("thermomech_TC", "Botonakis", 102158, 711558, 89, (
		_level(10, 0.06, 1.01, 11, (1.0, 11), (1.60, 10)),
		_level(6, 0.02, 1.02, 8, (1.0, 10), (2.37, 6)))),
]}


def lookup(path: Union[str, pathlib.Path]) -> Union[CollectionMatrix, None]:
	"""Collection entry whose name matches the stem of ``path``, if any."""

	return MATRICES.get(pathlib.Path(path).stem)

def describe() -> "list[str]":
	"""One line per matrix, as printed by ``sait_bench --list-matrices``."""

	return [f"{m.name:<15} {m.rows:>9} rows {m.nnz:>9} nnz  {m.url}" for m in MATRICES.values()]

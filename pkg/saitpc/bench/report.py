# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Report rows and their serialization.

Columns are the fields of :class:`ReportRow` in declaration order; this order is part of
the report schema identified by :data:`~saitpc.bench.SCHEMA_VERSION`. Floats are written
with 6 significant digits, missing values as empty csv cells or json ``null``.
"""

import csv
import dataclasses
import io
import json
import logging
import math
import pathlib
import sys
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Union

from mako.template import Template

from .. import SaitSyntaxError, SaitValueError
from . import SCHEMA_VERSION
from .templates import template_dir

logger = logging.getLogger("report")


class ReportFormat(Enum):
	CSV = "csv"
	JSON = "json"
	TABLE = "table"

	@classmethod
	def from_path(cls, path: Union[str, pathlib.Path, None], default: "ReportFormat" = None) -> "ReportFormat":
		suffix = pathlib.Path(path).suffix.lstrip(".").lower() if path is not None else ""
		try:
			return cls(suffix)
		except ValueError:
			return default or cls.CSV


@dataclass(frozen=True)
class ReportRow:
	"""One experiment run, the configuration flattened next to its results. Result fields
	stay ``None`` for the stages a failed run did not reach, ``error`` then holds
	``"<stage>: <message>"``.
	"""

	schema_version: int
	problem: str
	precond: str
	solver: str
	ilu_level: int
	tol: float
	maxit: int
	seed: int
	threads: int
	rhs: str
	rows: int = None
	nnz_a: int = None
	nnz_l: int = None
	nnz_u: int = None
	nnz_ml: int = None
	nnz_mu: int = None
	ratio: float = None
	ratio_l: float = None
	ratio_u: float = None
	iterations: int = None
	converged: bool = None
	residual_final: float = None
	eigenvalues: tuple = None
	time_setup: float = None
	time_precond: float = None
	time_other: float = None
	time_total: float = None
	error: str = ""

	@property
	def failed(self) -> bool:
		return bool(self.error)

	def rounded(self) -> "ReportRow":
		"""This row with every float at the precision it is reported with."""

		changes = {}
		for f in dataclasses.fields(self):
			value = getattr(self, f.name)
			if isinstance(value, float):
				changes[f.name] = _round(value)
			elif isinstance(value, tuple):
				changes[f.name] = tuple(_round(v) for v in value)
		return dataclasses.replace(self, **changes)

	def without_timings(self) -> dict:
		"""All fields except the wall clock times, which differ between identical runs."""

		return {k: v for k, v in dataclasses.asdict(self).items() if k not in TIMING_FIELDS}


COLUMNS = tuple(f.name for f in dataclasses.fields(ReportRow))
TIMING_FIELDS = ("time_setup", "time_precond", "time_other", "time_total")

_INT_FIELDS = {"schema_version", "ilu_level", "maxit", "seed", "threads", "rows", "nnz_a", "nnz_l", "nnz_u",
	"nnz_ml", "nnz_mu", "iterations"}
_FLOAT_FIELDS = {"tol", "ratio", "ratio_l", "ratio_u", "residual_final", *TIMING_FIELDS}


def _round(value: float) -> float:
	if not math.isfinite(value):
		return value
	return float(f"{value:.6g}")

def _cell(value) -> str:
	if value is None:
		return ""
	if isinstance(value, bool):
		return "true" if value else "false"
	if isinstance(value, float):
		return f"{value:.6g}"
	if isinstance(value, tuple):
		return ";".join(f"{v:.6g}" for v in value)
	return str(value)

def _json_value(value):
	if isinstance(value, float):
		return _round(value) if math.isfinite(value) else None
	if isinstance(value, tuple):
		return [_json_value(v) for v in value]
	return value

def _parse_cell(name: str, text: str):
	if name not in ("error", "eigenvalues") and text == "":
		return None

	try:
		if name in _INT_FIELDS:
			return int(text)
		if name in _FLOAT_FIELDS:
			return float(text)
		if name == "converged":
			return {"true": True, "false": False}[text]
		if name == "eigenvalues":
			return tuple(float(v) for v in text.split(";")) if text else None
	except (ValueError, KeyError):
		raise SaitSyntaxError(f"invalid value '{text}' in column '{name}'") from None

	return text

def _check_version(version):
	if version != SCHEMA_VERSION:
		raise SaitValueError(f"report has schema version {version}, this is version {SCHEMA_VERSION}")


def write_csv(rows: "list[ReportRow]", f: IO):
	writer = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
	writer.writeheader()
	for row in rows:
		writer.writerow({k: _cell(v) for k, v in dataclasses.asdict(row).items()})

def write_json(rows: "list[ReportRow]", f: IO):
	data = {
		"schema_version": SCHEMA_VERSION,
		"rows": [{k: _json_value(getattr(row, k)) for k in COLUMNS} for row in rows],
	}
	json.dump(data, f, indent=1)
	f.write("\n")

def write_table(rows: "list[ReportRow]", f: IO):
	"""Human readable table with the ratio, iteration and time columns per run."""

	table_template = Template(filename=str(template_dir/'report_table.mako'))
	f.write(table_template.render(rows=rows, cell=_cell, schema_version=SCHEMA_VERSION))

_WRITERS = {
	ReportFormat.CSV: write_csv,
	ReportFormat.JSON: write_json,
	ReportFormat.TABLE: write_table,
}

def report(rows: Iterable[ReportRow], out: Union[str, pathlib.Path, IO, None] = None, fmt: Union[ReportFormat, str] = ReportFormat.CSV):
	"""Write ``rows`` to the file path or stream ``out``, standard output if ``None``."""

	rows = list(rows)
	if not rows:
		raise SaitValueError("nothing to report")

	writer = _WRITERS[ReportFormat(fmt)]

	if out is None:
		writer(rows, sys.stdout)
	elif isinstance(out, (str, pathlib.Path)):
		logger.info("writing %d rows to %s", len(rows), out)
		with open(out, "w", newline="") as f:
			writer(rows, f)
	else:
		writer(rows, out)

def report_text(rows: Iterable[ReportRow], fmt: Union[ReportFormat, str] = ReportFormat.CSV) -> str:
	buf = io.StringIO()
	report(rows, buf, fmt)
	return buf.getvalue()

def parse_csv(f: IO) -> "list[ReportRow]":
	reader = csv.DictReader(f)
	if tuple(reader.fieldnames or ()) != COLUMNS:
		raise SaitSyntaxError(f"unexpected csv columns {reader.fieldnames}")

	rows = []
	for record in reader:
		row = ReportRow(**{k: _parse_cell(k, v) for k, v in record.items()})
		_check_version(row.schema_version)
		rows.append(row)
	return rows

def parse_json(f: IO) -> "list[ReportRow]":
	data = json.load(f)
	_check_version(data.get("schema_version"))

	rows = []
	for record in data["rows"]:
		if tuple(record) != COLUMNS:
			raise SaitSyntaxError(f"unexpected json fields {list(record)}")
		if record["eigenvalues"] is not None:
			record["eigenvalues"] = tuple(record["eigenvalues"])
		rows.append(ReportRow(**record))
	return rows

def read_report(path: Union[str, pathlib.Path], fmt: Union[ReportFormat, str] = None) -> "list[ReportRow]":
	"""Load a csv or json report, the format taken from the file suffix by default."""

	fmt = ReportFormat(fmt) if fmt is not None else ReportFormat.from_path(path)

	with open(path, "r", newline="") as f:
		if fmt is ReportFormat.CSV:
			return parse_csv(f)
		if fmt is ReportFormat.JSON:
			return parse_json(f)

	raise SaitValueError(f"cannot read reports in {fmt.value} format")

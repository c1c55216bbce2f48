# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Matrix Market coordinate files, read and written through :mod:`scipy.io`.

Supported are ``real`` and ``integer`` fields with ``general`` or ``symmetric``
symmetry. Symmetric files store one triangle and are expanded to full storage on
reading. Whenever scipy rejects a file, the file is scanned once more to report the
offending line as :exc:`~saitpc.SaitSyntaxError`.
"""

import logging
import pathlib
from typing import Union

import numpy as np
import scipy.io
import scipy.sparse

from .. import SaitSyntaxError, SaitValueError
from ..sparse.csr import CsrMatrix

logger = logging.getLogger("matrix_market")

BANNER = "%%MatrixMarket"

FIELDS = ("real", "integer")
SYMMETRIES = ("general", "symmetric")


def _error(path: pathlib.Path, lineno: int, text: str, msg: str) -> SaitSyntaxError:
	return SaitSyntaxError(msg, (str(path), lineno, None, text))

def _bad_banner(banner: str) -> bool:
	tokens = banner.split()
	return len(tokens) != 5 or tokens[0] != BANNER or tokens[1].lower() != "matrix"

def _read_banner(path: pathlib.Path) -> str:
	with open(path, "r") as f:
		banner = f.readline().rstrip("\n")

	if _bad_banner(banner):
		raise _error(path, 1, banner, f"expected '{BANNER} matrix coordinate <field> <symmetry>' header")

	return banner

def _check_header(path: pathlib.Path, banner: str, fmt: str, field: str, symmetry: str):
	if fmt != "coordinate":
		raise _error(path, 1, banner, f"unsupported format '{fmt}', only sparse coordinate files are read")
	if field not in FIELDS:
		raise _error(path, 1, banner, f"unsupported field '{field}', expected one of {', '.join(FIELDS)}")
	if symmetry not in SYMMETRIES:
		raise _error(path, 1, banner, f"unsupported symmetry '{symmetry}', expected one of {', '.join(SYMMETRIES)}")

def _locate(path: pathlib.Path) -> Union[SaitSyntaxError, None]:
	"""The first syntax error of the file at ``path`` with its line number, ``None`` if
	the scan finds nothing to complain about.
	"""

	with open(path, "r") as f:
		lines = enumerate((line.rstrip("\n") for line in f), start=1)

		lineno, banner = next(lines, (1, ""))
		if _bad_banner(banner):
			return _error(path, lineno, banner, f"expected '{BANNER} matrix coordinate <field> <symmetry>' header")

		data = ((n, text) for n, text in lines if text.strip() and not text.startswith("%"))

		lineno, text = next(data, (lineno + 1, ""))
		try:
			nrows, ncols, count = (int(t) for t in text.split())
		except ValueError:
			return _error(path, lineno, text, "size line must hold rows, columns and entry count")

		for k in range(count):
			lineno, text = next(data, (None, ""))
			if lineno is None:
				return _error(path, lineno, text, f"file ends after {k} of {count} entries")

			tokens = text.split()
			if len(tokens) != 3:
				return _error(path, lineno, text, "entry line must hold row, column and value")
			try:
				i, j = int(tokens[0]), int(tokens[1])
			except ValueError:
				return _error(path, lineno, text, f"invalid index in '{text}'")
			try:
				float(tokens[2])
			except ValueError:
				return _error(path, lineno, text, f"invalid value '{tokens[2]}'")
			if not (1 <= i <= nrows and 1 <= j <= ncols):
				return _error(path, lineno, text, f"index ({i}, {j}) out of bounds for {nrows}x{ncols} matrix")

	return None

def mm_read(path: Union[str, pathlib.Path], expected_nnz: int = None) -> CsrMatrix:
	"""Read a Matrix Market file. ``expected_nnz``, if given, is checked against the
	number of entries after symmetric expansion.
	"""

	path = pathlib.Path(path)
	logger.info("reading %s", path)

	banner = _read_banner(path)

	try:
		nrows, ncols, _, fmt, field, symmetry = scipy.io.mminfo(str(path))
		_check_header(path, banner, fmt, field, symmetry)
		mat = CsrMatrix.from_scipy(scipy.sparse.coo_array(scipy.io.mmread(str(path))))
	except SaitSyntaxError:
		raise
	# the exception types differ between the scipy reader backends
	except Exception as e:
		located = _locate(path)
		if located is not None:
			raise located from e
		raise SaitSyntaxError(str(e), (str(path), None, None, None)) from e

	logger.info("read %dx%d matrix with %d entries (%s)", nrows, ncols, mat.nnz, symmetry)

	if expected_nnz is not None and mat.nnz != expected_nnz:
		raise SaitValueError(f"{path} holds {mat.nnz} entries after expansion, expected {expected_nnz}")

	return mat

def mm_write(path: Union[str, pathlib.Path], mat: CsrMatrix, symmetric: bool = False, comment: str = None):
	"""Write ``mat`` as a real coordinate file. With ``symmetric``, ``mat`` must equal its
	transpose and only the lower triangle is written. Values are printed with 17
	significant digits, so reading the file back reproduces them exactly.
	"""

	path = pathlib.Path(path)

	rows, cols, vals = mat.row_idx, mat.col_idx, mat.values
	if symmetric:
		if not mat.is_square or not mat.equals(mat.transpose()):
			raise SaitValueError("matrix written as symmetric is not symmetric")
		lower = rows >= cols
		rows, cols, vals = rows[lower], cols[lower], vals[lower]

	logger.info("writing %s", path)

	coo = scipy.sparse.coo_array((np.asarray(vals), (np.asarray(rows), np.asarray(cols))), shape=mat.shape)
	scipy.io.mmwrite(str(path), coo, comment=comment or "", field="real", precision=17,
		symmetry="symmetric" if symmetric else "general")

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

import os
import pathlib

import numpy as np
import pytest

from saitpc.sparse import LOWER, UPPER
from saitpc.sparse.csr import CsrMatrix, from_arrays

SUITESPARSE_ENV = "SAITPC_SUITESPARSE_DIR"
GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def pytest_addoption(parser):
	parser.addoption("--run-full-scale", action="store_true", default=False,
		help="run the minutes long experiments on the 100^3 laplacian and the collection matrices")
	parser.addoption("--update-golden", action="store_true", default=False,
		help="rewrite the expected files in tests/golden from the current output")

def pytest_configure(config):
	config.addinivalue_line("markers", "full_scale: long running experiments on full size problems")

def pytest_collection_modifyitems(config, items):
	if config.getoption("--run-full-scale"):
		return

	skip = pytest.mark.skip(reason="needs --run-full-scale")
	for item in items:
		if "full_scale" in item.keywords:
			item.add_marker(skip)


def random_sparse(rng: np.random.Generator, nrows: int, ncols: int, density: float) -> CsrMatrix:
	count = max(int(density * nrows * ncols), 1)
	rows = rng.integers(0, nrows, count)
	cols = rng.integers(0, ncols, count)
	return from_arrays(nrows, ncols, rows, cols, rng.uniform(-1.0, 1.0, count))

def random_triangular(rng: np.random.Generator, n: int, kind=LOWER, density: float = 0.1, dominant: bool = True) -> CsrMatrix:
	"""Random sparse triangular matrix with a full diagonal. With ``dominant`` the
	diagonal exceeds the absolute off-diagonal row sum, which keeps ``T`` well conditioned.
	"""

	count = max(int(density * n * n / 2), 1)
	rows = rng.integers(0, n, count)
	cols = rng.integers(0, n, count)
	keep = rows > cols
	rows, cols = rows[keep], cols[keep]
	vals = rng.uniform(-1.0, 1.0, len(rows))

	off = np.zeros(n)
	np.add.at(off, rows, np.abs(vals))
	diag = off + rng.uniform(0.5, 1.5, n) if dominant else rng.uniform(0.5, 1.5, n) * rng.choice([-1.0, 1.0], n)

	idx = np.arange(n)
	t = from_arrays(n, n, np.concatenate([rows, idx]), np.concatenate([cols, idx]), np.concatenate([vals, diag]))
	return t if kind is LOWER else t.transpose()

def random_spd(rng: np.random.Generator, n: int, density: float = 0.1) -> CsrMatrix:
	"""Sparse symmetric strictly diagonally dominant matrix with positive diagonal."""

	s = random_sparse(rng, n, n, density).toarray()
	s = s + s.T
	np.fill_diagonal(s, 0.0)
	s += np.diag(np.abs(s).sum(axis=1) + 1.0)
	return CsrMatrix.from_scipy(s)


@pytest.fixture
def rng():
	return np.random.default_rng(20240611)

@pytest.fixture
def suitesparse_dir() -> pathlib.Path:
	path = os.environ.get(SUITESPARSE_ENV)
	if not path:
		pytest.skip(f"{SUITESPARSE_ENV} not set")
	return pathlib.Path(path)

@pytest.fixture
def bidiagonal_5():
	"""Lower bidiagonal 5x5 matrix with diagonal 2 and subdiagonal -1."""

	n = 5
	idx = np.arange(n)
	return from_arrays(n, n, np.concatenate([idx, idx[1:]]), np.concatenate([idx, idx[:-1]]),
		np.concatenate([np.full(n, 2.0), np.full(n - 1, -1.0)]))

@pytest.fixture
def golden(request):
	"""Compare text against ``tests/golden/<name>``, or rewrite the file with
	``--update-golden``.
	"""

	update = request.config.getoption("--update-golden")

	def check(name: str, text: str):
		path = GOLDEN_DIR / name
		if update:
			path.write_text(text)
		assert text == path.read_text()

	return check

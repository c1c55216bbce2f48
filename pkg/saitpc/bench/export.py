# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Main entrypoint for the sait_export program.

Writes the matrices behind a preconditioner as Matrix Market files into an output
directory: ``L.mtx`` and ``U.mtx`` for the ILU factors, ``M_L.mtx`` and ``M_U.mtx`` for
approximate inverses, and optionally ``A.mtx`` for the system matrix itself.
"""

import argparse
import logging
import pathlib
import sys

from .. import SaitError, SaitValueError
from ..krylov.precond import SaitPairPrecond
from ..problems.matrix_market import mm_write
from ..sparse.ilu import ilu_k
from .cli import BooleanOptionalAction, add_problem_arguments, setup_logging
from .config import PrecondKind
from .runner import build_precond, build_problem, stage

logger = logging.getLogger("sait_export")


def main(argv=None):
	"""sait_export main entrypoint function."""

	parser = argparse.ArgumentParser(prog="sait_export", description="Write ILU factors and approximate inverses as .mtx files.")
	parser.add_argument("outdir", help="directory receiving the .mtx files, created if missing")
	add_problem_arguments(parser)
	parser.add_argument("--matrix", action=BooleanOptionalAction, default=False, help="Also write the system matrix as A.mtx.")
	parser.add_argument("--factors", action=BooleanOptionalAction, default=True, help="Write the ILU factors.")
	args = parser.parse_args(argv)

	setup_logging(args)

	outdir = pathlib.Path(args.outdir)
	comment = f"problem {args.problem}, ILU({args.ilu}), preconditioner {args.precond}"

	try:
		if args.precond.kind in (PrecondKind.NONE, PrecondKind.JACOBI):
			raise SaitValueError(f"preconditioner '{args.precond}' has no matrices to export")

		outdir.mkdir(parents=True, exist_ok=True)

		with stage("problem"):
			a = build_problem(args.problem)
		if args.matrix:
			mm_write(outdir / "A.mtx", a, symmetric=a.equals(a.transpose()), comment=comment)

		with stage("ilu"):
			factors = ilu_k(a, args.ilu)
		if args.factors:
			mm_write(outdir / "L.mtx", factors.L, comment=comment)
			mm_write(outdir / "U.mtx", factors.U, comment=comment)

		with stage("precond"):
			precond = build_precond(args.precond, factors, a.nrows, args.threads)
		if isinstance(precond, SaitPairPrecond):
			logger.info("nnz(M_L)=%d nnz(M_U)=%d ratio=%.3f", precond.m_l.nnz, precond.m_u.nnz, precond.ratio)
			mm_write(outdir / "M_L.mtx", precond.m_l, comment=comment)
			mm_write(outdir / "M_U.mtx", precond.m_u, comment=comment)
	except (SaitError, OSError) as e:
		logger.critical("%s", e)
		sys.exit(1)

if __name__ == "__main__":
	main()

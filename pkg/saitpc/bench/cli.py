# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Main entrypoint for the sait_bench program."""

import argparse
import logging
import sys

from .. import SaitError
from ..problems import suitesparse
from ..problems.rhs import RhsMode
from .config import (ExperimentConfig, PrecondSpec, ProblemSpec, SolverSpec,
                     SweepAxis)
from .report import ReportFormat, report
from .runner import exit_code, run_recorded, sweep

logger = logging.getLogger("sait_bench")

LOG_LEVELS = ["critical", "error", "warning", "info", "debug"]


class BooleanOptionalAction(argparse.Action):
	"""Boolean flag with an automatically generated ``--no-x`` counterpart."""

	def __init__(self, option_strings, dest, default=None, required=False, help=None):
		all_options = []
		for option in option_strings:
			all_options.append(option)
			if option.startswith("--"):
				all_options.append("--no-" + option[2:])

		if help is not None and default is not None:
			help += " (default: %(default)s)"

		super().__init__(option_strings=all_options, dest=dest, nargs=0, default=default, required=required, help=help)

	def __call__(self, parser, namespace, values, option_string=None):
		if option_string in self.option_strings:
			setattr(namespace, self.dest, not option_string.startswith("--no-"))

	def format_usage(self):
		return " | ".join(self.option_strings)


def spec_type(parse):
	"""argparse type converting the library errors of a spec parser into usage errors."""

	def convert(text: str):
		try:
			return parse(text)
		except SaitError as e:
			raise argparse.ArgumentTypeError(str(e)) from None

	convert.__name__ = parse.__qualname__
	return convert

def add_problem_arguments(parser: argparse.ArgumentParser, required: bool = True):
	"""Arguments selecting the matrix and its ILU factorization, shared with sait_export."""

	parser.add_argument("--problem", type=spec_type(ProblemSpec.parse), required=required, help="laplacian:<n> or mtx:<path>")
	parser.add_argument("--ilu", type=int, default=0, help="ILU fill level (default: %(default)s)")
	parser.add_argument("--precond", type=spec_type(PrecondSpec.parse), default=PrecondSpec.parse("exact"),
		help="none, exact, sait-thr:<tau>:<m>, sait-pat:<p>:<m> or jacobi:<k> (default: exact)")
	parser.add_argument("--threads", type=int, default=1, help="threads for sparse products (default: %(default)s)")
	parser.add_argument("--log", default="info", choices=LOG_LEVELS)

def setup_logging(args: argparse.Namespace):
	logging.basicConfig(level=getattr(logging, args.log.upper()))

def parse_args(argv=None) -> argparse.Namespace:
	parser = argparse.ArgumentParser(prog="sait_bench", description="Run PCG / LOBPCG experiments with ILU based preconditioners.")
	add_problem_arguments(parser, required=False)
	parser.add_argument("--solver", type=spec_type(SolverSpec.parse), default=SolverSpec.parse("pcg"), help="pcg or lobpcg:<nev> (default: pcg)")
	parser.add_argument("--tol", type=float, default=ExperimentConfig.tol, help="stopping tolerance (default: %(default)s)")
	parser.add_argument("--maxit", type=int, default=ExperimentConfig.maxit, help="iteration limit (default: %(default)s)")
	parser.add_argument("--seed", type=int, default=0, help="seed for random right hand sides and initial blocks (default: %(default)s)")
	parser.add_argument("--rhs", default=RhsMode.ONES.value, choices=[m.value for m in RhsMode], help="right hand side of linear solves (default: %(default)s)")
	parser.add_argument("--sweep", type=spec_type(SweepAxis.parse), action="append", default=[],
		help="sweep a parameter, e.g. tau=0,0.01,0.05 or m=1..15; repeat for a cartesian product")
	parser.add_argument("--jobs", type=int, default=1, help="sweep points run in parallel processes (default: %(default)s)")
	parser.add_argument("--progress", action=BooleanOptionalAction, default=True, help="Show a progress bar for sweeps.")
	parser.add_argument("-o", "--out", help="report file, standard output if omitted")
	parser.add_argument("--format", choices=[f.value for f in ReportFormat], help="report format, taken from the --out suffix by default")
	parser.add_argument("--list-matrices", action="store_true", help="print the collection matrices used in the experiments and exit")

	args = parser.parse_args(argv)

	if not args.list_matrices and args.problem is None:
		parser.error("the following arguments are required: --problem")

	return args

def main(argv=None):
	"""sait_bench main entrypoint function."""

	args = parse_args(argv)
	setup_logging(args)

	if args.list_matrices:
		for line in suitesparse.describe():
			print(line)
		return

	try:
		config = ExperimentConfig(
			problem=args.problem,
			precond=args.precond,
			solver=args.solver,
			ilu_level=args.ilu,
			tol=args.tol,
			maxit=args.maxit,
			seed=args.seed,
			threads=args.threads,
			rhs=RhsMode(args.rhs),
			out=args.out,
		)

		if args.sweep:
			rows = sweep(config, args.sweep, args.jobs, args.progress)
		else:
			rows = [run_recorded(config)]

		fmt = ReportFormat(args.format) if args.format else ReportFormat.from_path(args.out)
		report(rows, config.out, fmt)
	except (SaitError, OSError) as e:
		logger.critical("%s", e)
		sys.exit(1)

	code = exit_code(rows)
	if code == 2:
		logger.warning("not all runs converged")
	sys.exit(code)

if __name__ == "__main__":
	main()

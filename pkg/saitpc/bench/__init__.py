# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Experiment harness around the library.

* :mod:`saitpc.bench.config`, run configuration and its compact string forms.
* :mod:`saitpc.bench.runner`, a single run and parameter sweeps.
* :mod:`saitpc.bench.report`, report rows and their csv, json and table output.
* :mod:`saitpc.bench.cli`, the ``sait_bench`` program.
* :mod:`saitpc.bench.export`, the ``sait_export`` program.
"""

SCHEMA_VERSION = 1
"""Version of the report columns, bumped on every incompatible change."""

# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

"""Test problems for the solvers.

* :mod:`saitpc.problems.laplacian`, the finite difference Laplacian on the unit cube.
* :mod:`saitpc.problems.matrix_market`, reading and writing ``.mtx`` coordinate files.
* :mod:`saitpc.problems.suitesparse`, the collection matrices used in the experiments.
* :mod:`saitpc.problems.rhs`, right hand side generation.
"""

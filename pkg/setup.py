# SPDX-License-Identifier: Apache-2.0
#
# This file is part of the saitpc project.
#
# Copyright (C) 2024
# Chair of Electrical Design Automation
# Technical University of Munich

import setuptools

setuptools.setup(
	name="saitpc",
	use_scm_version=True,
	packages=setuptools.find_packages(exclude=["tests"]),
	package_data={
		"": ["*.mako"]
	},
	python_requires=">=3.9",
	setup_requires=["setuptools_scm"],
	install_requires=[
		"numpy",
		"scipy >= 1.12",
		"mako",
		"tqdm"
	],
	extras_require={
		"tests": ["pytest"]
	},
	entry_points={
		"console_scripts": [
			"sait_bench=saitpc.bench.cli:main",
			"sait_export=saitpc.bench.export:main"
		]
	},
	zip_safe=False
)

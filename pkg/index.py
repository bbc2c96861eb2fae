#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""ncuncertainty entry.

- Single entry: `python index.py <subcommand> [flags]`; `python index.py --help` lists them.
- Parameters come from flags, then `--config` (YAML/JSON), then NCU_* environment.
- Reports go to stdout as JSON; logs go to stderr (NCU_LOG_LEVEL, NCU_LOG_JSON).
"""

from __future__ import annotations

import sys

from ncuncertainty.cli.main import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))

#!/usr/bin/env python3
"""
Standalone runner for the ISAC APM emulator.

Use this to run the command line without installing the package:
    ./run_emulator.py run --scenario drone_pair_adtr --out out/
"""

import os
import sys

# Add the package to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from isac_apm_emulator.cli.main import main

if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3

"""
Allow running the command line as `python -m treetransfer`.
"""

import sys
from treetransfer.cli import main

sys.exit(main())

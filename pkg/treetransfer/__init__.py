#!/usr/bin/env python3

"""
Init file for the treetransfer library modules.
"""

from treetransfer import log
from treetransfer.dyadic import Dyadic, parse

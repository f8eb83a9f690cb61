"""python -m ghz_steering entry point."""

import sys

from .cli import main

sys.exit(main())

"""Entry point for ``python -m webtiles``."""

import sys

from .cli import main

sys.exit(main())

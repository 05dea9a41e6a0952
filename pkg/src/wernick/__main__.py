"""``python -m wernick``."""
import sys

from .cli import main

sys.exit(main())

import sys

from qbound.cli import main

sys.exit(main())

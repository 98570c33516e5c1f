import sys

from garopack.cli import main

sys.exit(main())

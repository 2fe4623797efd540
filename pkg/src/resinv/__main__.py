import sys

from resinv.cli import main

sys.exit(main())

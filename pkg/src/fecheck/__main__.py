import sys

from fecheck.cli import main

sys.exit(main())

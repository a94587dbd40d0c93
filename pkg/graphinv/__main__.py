import sys

from graphinv.cli import main

sys.exit(main())

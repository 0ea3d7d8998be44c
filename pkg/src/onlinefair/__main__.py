import sys

from onlinefair.cli import main

sys.exit(main())

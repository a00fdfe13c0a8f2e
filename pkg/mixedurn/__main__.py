import sys

from mixedurn.cli import main

sys.exit(main())

import sys

from momentcs.cli import main

sys.exit(main())

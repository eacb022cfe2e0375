import sys

from cnoidal.cli import main

sys.exit(main())

import sys

from grpdlab.cli import main

sys.exit(main())

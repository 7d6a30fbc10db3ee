import sys

from hnfilt.cli import main

sys.exit(main())

import sys

from mscfb.harness.cli import main

sys.exit(main())

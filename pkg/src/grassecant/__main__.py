import sys

from grassecant.cli import main

sys.exit(main())

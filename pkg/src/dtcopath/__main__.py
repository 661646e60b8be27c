import sys

from .pathcli.cli import main

sys.exit(main())

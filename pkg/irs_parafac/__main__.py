import sys

from irs_parafac.cli import main

sys.exit(main())

import sys

from hfgen.main import main

sys.exit(main())

from divsudoku.cli import main
import sys

sys.exit(main())

import sys

from coherent_amp.cli import main

sys.exit(main())

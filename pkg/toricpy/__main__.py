# -*- coding: utf-8 -*-
import sys

from toric_cli import main

sys.exit(main())

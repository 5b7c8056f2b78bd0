#!/usr/bin/env python3
"""
MAPFlow - Multi-Agent Production flow simulator
Builds the eleven production architectures, simulates their resource flow
and scores them by work, dispersion and transition time.
"""

import sys
import os

# Add the current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ui.cli import main


if __name__ == "__main__":
    sys.exit(main())

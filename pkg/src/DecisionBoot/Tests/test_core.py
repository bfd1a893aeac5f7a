import sys

import pytest

from DecisionBoot.Core import main_entry


def test_main_entry():
    sys.argv = ["dtb", "--version"]
    with pytest.raises(SystemExit, match="0"):
        main_entry()

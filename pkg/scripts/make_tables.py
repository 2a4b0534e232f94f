#!/usr/bin/env python3
"""Write the two lower-bound tables as CSV files.

Usage: python3 scripts/make_tables.py [OUT_DIR]
"""

import sys
from pathlib import Path

from cyclerep.bounds import table1_csv, table2_csv


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tables_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "table1.csv").write_text(table1_csv(), encoding="utf-8")
    (out_dir / "table2.csv").write_text(table2_csv(), encoding="utf-8")
    print(table1_csv())
    print(table2_csv())
    print(f"written to {out_dir}/table1.csv and {out_dir}/table2.csv")


if __name__ == "__main__":
    main()

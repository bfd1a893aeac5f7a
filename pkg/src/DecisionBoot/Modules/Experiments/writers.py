# This module writes experiment outputs: JSON documents and sweep CSV files.
import csv
import json
import logging

from DecisionBoot.Core.Utils import PathLike, TypeCheck

logger = logging.getLogger("DecisionBoot.Modules.Experiments")
logger.setLevel(logging.DEBUG)

__all__ = [
    "write_json",
    "write_rows_csv",
]


def write_json(path: PathLike, document: dict[str, ...]) -> None:
    """Writes a JSON document with sorted keys, so that equal documents give identical files."""
    TypeCheck.ensure_path_like(path, "path")
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(document, fp, indent=2, sort_keys=True)
        fp.write("\n")
    logger.info(f"Wrote {path}")


def write_rows_csv(path: PathLike, rows: list[dict[str, ...]], columns: tuple[str, ...]) -> None:
    """Writes rows of a sweep as CSV, one column per key of `columns`."""
    TypeCheck.ensure_path_like(path, "path")
    with open(path, "w", newline="", encoding="utf-8") as fp:
        writer = csv.DictWriter(fp, fieldnames=list(columns), extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} row(s) to {path}")

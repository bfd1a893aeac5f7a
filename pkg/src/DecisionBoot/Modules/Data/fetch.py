# This module defines the dataset registry and the cached HTTP fetcher.
import hashlib
import io
import json
import logging
import zipfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional
from urllib.error import URLError
from urllib.request import urlopen

import DecisionBoot
from DecisionBoot.Core.Utils import DataError, PathLike, TypeCheck
from DecisionBoot.Modules.Data.dataset import Dataset, load_csv

logger = logging.getLogger("DecisionBoot.Modules.Data")
logger.setLevel(logging.DEBUG)

CACHE_DIR = DecisionBoot.AppDir / "Cache"
"""Default cache directory of fetched datasets."""

DATASET_REGISTRY: dict[str, dict[str, ...]] = {
    "housing": {
        "url": "https://raw.githubusercontent.com/ageron/handson-ml2/master/datasets/housing/housing.csv",
        "target_column": "median_house_value",
        "exclude_columns": ["ocean_proximity"],
        # Targets in units of 100k USD
        "target_scale": 1e-5,
    },
    "grid": {
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/00471/Data_for_UCI_named.csv",
        "target_column": "stab",
        "exclude_columns": ["stabf"],
        "target_scale": 100.0,
    },
    "sc": {
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/00464/superconduct.zip",
        "archive_member": "train.csv",
        "target_column": "critical_temp",
        "exclude_columns": [],
        "target_scale": 0.1,
    },
    "bike": {
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/00275/Bike-Sharing-Dataset.zip",
        "archive_member": "hour.csv",
        "target_column": "cnt",
        # casual + registered == cnt
        "exclude_columns": ["instant", "dteday", "casual", "registered"],
        "target_scale": 0.01,
    },
}
"""Built-in public datasets, by short name."""

__all__ = [
    "CACHE_DIR",
    "DATASET_REGISTRY",
    "fetch_dataset",
    "fetch_registered",
    "load_registered",
]


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _metadata_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def _cache_problem(path: Path, digest: Optional[str]) -> Optional[str]:
    """Gets why a cached download cannot be used, or None when its size and SHA-256 match the records."""
    meta_path = _metadata_path(path)
    recorded = {}
    if meta_path.is_file():
        try:
            with open(meta_path) as fp:
                recorded = json.load(fp)
        except json.JSONDecodeError:
            return f"unreadable metadata '{meta_path}'"
    size = path.stat().st_size
    if recorded.get("bytes") is not None and recorded["bytes"] != size:
        return f"{size} bytes, {recorded['bytes']} recorded"
    expected = [value.lower() for value in (recorded.get("sha256"), digest) if value is not None]
    if expected and set(expected) != {_sha256(path)}:
        return "SHA-256 digest mismatch"
    return None


def fetch_dataset(name: str, url: str, cache_dir: PathLike = None, digest: str = None,
                  archive_member: str = None) -> Path:
    """Downloads a dataset file unless a cached copy exists.

    The file is stored as `<cache_dir>/<name>/<basename(url)>` next to a `.meta.json` sidecar that records the url, the
    byte length, the SHA-256 digest and the retrieval time. When `archive_member` is given the download is a zip
    archive, and the member is extracted next to it; its path is returned instead. A cached copy is used only while its
    size and SHA-256 digest match the sidecar (and `digest`, when given); otherwise the file is downloaded again.

    Args:
        name (str): Short name of the dataset (cache sub-directory).
        url (str): The URL of the file.
        cache_dir (PathLike): The cache root. Defaults to `CACHE_DIR`.
        digest (str): The expected SHA-256 hex digest of the downloaded file, if known.
        archive_member (str): Name of the member to extract from a zip archive.

    Returns:
        The local path of the data file.

    Raises:
        DataError: The url is unreachable and nothing is cached, or the digest does not match.
    """
    TypeCheck.ensure_str(name, "name")
    TypeCheck.ensure_str(url, "url")
    target_dir = Path(cache_dir if cache_dir is not None else CACHE_DIR) / name
    target_dir.mkdir(parents=True, exist_ok=True)
    download_path = target_dir / Path(url).name
    result_path = target_dir / Path(archive_member).name if archive_member is not None else download_path
    if result_path.is_file() and download_path.is_file():
        problem = _cache_problem(download_path, digest)
        if problem is None:
            logger.debug(f"Cache hit for '{name}': {result_path}")
            return result_path
        logger.warning(f"Cached copy of '{name}' is stale ({problem}); fetching it again")
    logger.info(f"Downloading '{name}' from {url}")
    try:
        with urlopen(url) as response:
            raw_data = response.read()
    except (URLError, OSError) as ex:
        raise DataError(f"Dataset '{name}' is unreachable and not cached ({ex})")
    if digest is not None and hashlib.sha256(raw_data).hexdigest() != digest.lower():
        raise DataError(f"Digest mismatch for '{name}' downloaded from {url}")
    with open(download_path, "wb") as fp:
        fp.write(raw_data)
    with open(_metadata_path(download_path), "w") as fp:
        json.dump({
            "url": url,
            "bytes": len(raw_data),
            "sha256": hashlib.sha256(raw_data).hexdigest(),
            "retrieved_at": datetime.now(timezone.utc).isoformat(),
        }, fp, indent=2, sort_keys=True)
    if archive_member is not None:
        try:
            with zipfile.ZipFile(io.BytesIO(raw_data)) as archive:
                member = next((m for m in archive.namelist() if Path(m).name == Path(archive_member).name), None)
                if member is None:
                    raise DataError(f"Archive of '{name}' has no member '{archive_member}'")
                with open(result_path, "wb") as fp:
                    fp.write(archive.read(member))
        except zipfile.BadZipFile:
            raise DataError(f"Download of '{name}' is not a zip archive")
    return result_path


def fetch_registered(name: str, cache_dir: PathLike = None) -> Path:
    """Fetches a dataset of the built-in registry.

    Raises:
        DataError: The name is unknown (the message lists the known names), or the fetch fails.
    """
    if name not in DATASET_REGISTRY:
        raise DataError(f"Unknown dataset '{name}' (known: {', '.join(sorted(DATASET_REGISTRY))})")
    entry = DATASET_REGISTRY[name]
    return fetch_dataset(name, entry["url"], cache_dir, entry.get("digest"), entry.get("archive_member"))


def load_registered(name: str, cache_dir: PathLike = None) -> Dataset:
    """Fetches (if needed) and loads a dataset of the built-in registry with its target scale."""
    path = fetch_registered(name, cache_dir)
    entry = DATASET_REGISTRY[name]
    return load_csv(path, entry["target_column"], entry["target_scale"], entry["exclude_columns"])

"""
Optional download of q-expansion files over HTTP.

Nothing here runs unless a fetch URL is given explicitly. Downloaded files go
through load_qexpansion, so they face the same invariant suite as local files.
"""

import os
from typing import Optional
from urllib.parse import urlparse

import requests

from ..newforms.table import NewformTable, load_qexpansion
from ..utils.errors import ValidationError
from ..utils.logger import get_logger

DEFAULT_TIMEOUT = 60


class QExpansionFetcher:
    """Downloads q-expansion files into a local directory."""

    def __init__(self, download_dir: str = "cache/downloads", timeout: int = DEFAULT_TIMEOUT):
        self.download_dir = download_dir
        self.timeout = timeout
        self.logger = get_logger()
        self.session = requests.Session()
        self.session.headers.update({
            'User-Agent': 'wildtwist/1.0.0 (q-expansion fetch)',
            'Accept': 'text/plain,*/*;q=0.8',
        })

    def _destination(self, url: str, name: Optional[str]) -> str:
        if name is None:
            name = os.path.basename(urlparse(url).path) or "qexpansion.txt"
        return os.path.join(self.download_dir, name)

    def fetch(self, url: str, name: Optional[str] = None) -> NewformTable:
        """
        Download url and load it as a q-expansion file.

        Args:
            url: http or https URL supplied by the user
            name: File name inside the download directory (defaults to the URL's)

        Returns:
            The validated table

        Raises:
            ValidationError: On a bad URL, an HTTP failure or an invalid file
        """
        if not url.startswith(('http://', 'https://')):
            raise ValidationError(f"--fetch-url must start with http:// or https://, got '{url}'")
        path = self._destination(url, name)
        self.logger.info(f"Fetching q-expansion from {url}", path)
        try:
            response = self.session.get(url, timeout=self.timeout, allow_redirects=True, verify=True)
            response.raise_for_status()
        except requests.exceptions.Timeout:
            raise ValidationError(f"Fetching {url} timed out after {self.timeout}s")
        except requests.exceptions.ConnectionError as e:
            raise ValidationError(f"Connection error fetching {url}: {e}")
        except requests.exceptions.RequestException as e:
            raise ValidationError(f"Fetching {url} failed: {e}")

        os.makedirs(self.download_dir, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as file:
            file.write(response.text)
        self.logger.log_cache_event("download", path)
        return load_qexpansion(path)

    def close(self) -> None:
        self.session.close()

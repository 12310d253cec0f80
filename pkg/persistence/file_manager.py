#!/usr/bin/env python3
"""
File Manager for the averaging toolkit.
Handles file I/O for configs, fields and result tables.
"""

import os
import csv
import json
import yaml
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence

# Set up logging
logger = logging.getLogger(__name__)


class FileManager:
    """Manager for file operations. All text is UTF-8 with LF line endings."""

    @staticmethod
    def read_file(path: str) -> str:
        """
        Read a text file.

        Args:
            path (str): Path to file

        Returns:
            str: File content
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                return f.read()

        except Exception as e:
            logger.error(f"Failed to read file {path}: {str(e)}")
            raise

    @staticmethod
    def write_file(path: str, content: str) -> None:
        """
        Write a text file, creating parent directories.

        Args:
            path (str): Path to file
            content (str): Content to write
        """
        try:
            # Create directory if it doesn't exist
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)

        except Exception as e:
            logger.error(f"Failed to write file {path}: {str(e)}")
            raise

    @staticmethod
    def read_json(path: str) -> Dict[str, Any]:
        """
        Read a JSON file. Decode errors propagate as json.JSONDecodeError.

        Args:
            path (str): Path to file

        Returns:
            Dict[str, Any]: JSON content
        """
        return json.loads(FileManager.read_file(path))

    @staticmethod
    def write_json(path: str, content: Any, indent: int = 2) -> None:
        """
        Write to a JSON file.

        Args:
            path (str): Path to file
            content (Any): Content to write
            indent (int, optional): JSON indentation. Defaults to 2.
        """
        FileManager.write_file(path, json.dumps(content, indent=indent) + "\n")

    @staticmethod
    def read_yaml(path: str) -> Dict[str, Any]:
        """
        Read a YAML file.

        Args:
            path (str): Path to file

        Returns:
            Dict[str, Any]: YAML content
        """
        return yaml.safe_load(FileManager.read_file(path))

    @staticmethod
    def read_document(path: str) -> Dict[str, Any]:
        """Read a JSON or YAML document, chosen by file extension."""
        if path.endswith((".yaml", ".yml")):
            return FileManager.read_yaml(path)
        return FileManager.read_json(path)

    @staticmethod
    def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]],
                  preamble: Optional[List[str]] = None) -> None:
        """
        Write a CSV table.

        Args:
            path (str): Path to file
            header (Sequence[str]): Column names
            rows (Iterable[Sequence[Any]]): Table rows, already formatted
            preamble (List[str], optional): Metadata lines written first, prefixed with '#'
        """
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            with open(path, "w", encoding="utf-8", newline="") as f:
                for line in preamble or []:
                    f.write(f"# {line}\n")
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)

            logger.debug(f"Wrote CSV table {path}")

        except Exception as e:
            logger.error(f"Failed to write CSV file {path}: {str(e)}")
            raise

    @staticmethod
    def read_csv(path: str) -> List[Dict[str, str]]:
        """
        Read a CSV table written by write_csv, skipping '#' metadata lines.

        Args:
            path (str): Path to file

        Returns:
            List[Dict[str, str]]: One dict per row keyed by column name
        """
        lines = [line for line in FileManager.read_file(path).splitlines() if not line.startswith("#")]
        return list(csv.DictReader(lines))

import csv
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import Config

logger = logging.getLogger(__name__)


class ReportFileService:
    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = Path(output_dir or Config.OUTPUT_DIR)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, filename: str) -> Path:
        return self.output_dir / filename

    def write_json(self, filename: str, payload: Dict[str, Any]) -> Path:
        file_path = self.path_for(filename)
        try:
            with open(file_path, "w", encoding="utf-8", newline="\n") as buffer:
                json.dump(payload, buffer, sort_keys=True, indent=2, ensure_ascii=False)
                buffer.write("\n")

            logger.info(f"✅ Report saved: {file_path}")
            return file_path

        except Exception as e:
            logger.error(f"❌ Error saving report {file_path}: {e}")
            self.cleanup_file(file_path)
            raise

    def write_csv(self, filename: str, header: Sequence[str], rows: List[Sequence[Any]]) -> Path:
        file_path = self.path_for(filename)
        try:
            with open(file_path, "w", encoding="utf-8", newline="") as buffer:
                writer = csv.writer(buffer, lineterminator="\n")
                writer.writerow(header)
                for row in rows:
                    writer.writerow([_cell(value) for value in row])

            logger.info(f"✅ Table saved: {file_path}")
            return file_path

        except Exception as e:
            logger.error(f"❌ Error saving table {file_path}: {e}")
            self.cleanup_file(file_path)
            raise

    def write_distance_matrix(self, filename: str, matrix: np.ndarray) -> Path:
        header = ["point"] + [str(j) for j in range(matrix.shape[1])]
        rows = [[i] + list(row) for i, row in enumerate(matrix)]
        return self.write_csv(filename, header, rows)

    @staticmethod
    def read_json(file_path: str) -> Dict[str, Any]:
        with open(file_path, "r", encoding="utf-8") as buffer:
            return json.load(buffer)

    def cleanup_file(self, file_path):
        try:
            if os.path.exists(file_path):
                os.remove(file_path)
                logger.info(f"Cleaned up file: {file_path}")
        except Exception as e:
            logger.error(f"Error cleaning up file {file_path}: {e}")


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)

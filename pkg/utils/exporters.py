from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, TypeAdapter

from config.settings import settings
from core.errors import OutputError

MESH_COLUMNS = ["u_index", "v_index", "p1", "p2", "p3"]


class ReportExporter:
    """Writes reports, sweep tables and ellipsoid meshes"""

    def __init__(self):
        self.float_format = f"%.{settings.output_digits}g"

    def frame(self, rows: Sequence[BaseModel]) -> pd.DataFrame:
        """Table with one column per model field"""
        return pd.DataFrame([row.model_dump(by_alias=True) for row in rows])

    def mesh_frame(self, rows: Iterable[Tuple[int, int, float, float, float]]) -> pd.DataFrame:
        return pd.DataFrame(list(rows), columns=MESH_COLUMNS)

    def csv_text(self, frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, float_format=self.float_format, lineterminator="\n")

    def json_text(self, model: BaseModel) -> str:
        return model.model_dump_json(indent=2)

    def rows_json(self, rows: Sequence[BaseModel]) -> str:
        """JSON array of rows, serialized with field aliases like the CSV header"""
        if not rows:
            return "[]"
        adapter = TypeAdapter(List[type(rows[0])])
        return adapter.dump_json(list(rows), indent=2, by_alias=True).decode("utf-8")

    def write_text(self, text: str, path: Path) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc}") from exc
        return path

    def write_csv(self, frame: pd.DataFrame, path: Path) -> Path:
        return self.write_text(self.csv_text(frame), path)

    def write_mesh(self, rows, sidecar: BaseModel, path: Path) -> List[Path]:
        """Mesh CSV at ``path`` plus a JSON sidecar next to it"""
        path = Path(path)
        csv_path = self.write_csv(self.mesh_frame(rows), path)
        json_path = self.write_text(self.json_text(sidecar), path.with_suffix(".json"))
        return [csv_path, json_path]

    def emit(self, text: str, out: Optional[Path] = None) -> None:
        """Print to stdout or write to ``out``"""
        if out is None:
            print(text, end="" if text.endswith("\n") else "\n")
        else:
            self.write_text(text if text.endswith("\n") else text + "\n", out)


# Global exporter instance
exporter = ReportExporter()

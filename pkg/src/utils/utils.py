import csv
import json
import logging
from pathlib import Path

from pydantic import BaseModel
from slugify import slugify

from src.config import Config
from src.misc import OutputFormat
from src.utils.sort import Sort

LOGGER = logging.getLogger(__name__)


class Utils:
    @staticmethod
    def default_report_path(
        command: str, qualifiers: str, output_format: OutputFormat
    ) -> Path:
        name = slugify(f"{command} {qualifiers}".strip())
        return Config.output_dir() / f"{name}.{output_format.value}"

    @staticmethod
    def columns(row_type: type[BaseModel]) -> list[str]:
        """
        Report columns in field order, computed fields last
        """
        schema = row_type.model_json_schema(mode="serialization", by_alias=True)
        return list(schema["properties"])

    @staticmethod
    def csv_cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    @staticmethod
    def write_report(
        output_file: Path | str,
        command: str,
        rows: list[BaseModel],
        row_type: type[BaseModel],
        output_format: OutputFormat,
    ) -> None:
        Path(output_file).parent.absolute().mkdir(parents=True, exist_ok=True)

        dumped = Sort.sort_nested(
            [json.loads(row.model_dump_json(by_alias=True)) for row in rows]
        )
        if output_format == OutputFormat.json:
            with open(output_file, "w") as fd:
                json.dump(
                    Sort.sort_nested({"command": command, "rows": dumped}), fd, indent=2
                )
        else:
            columns = Utils.columns(row_type)
            with open(output_file, "w", newline="") as fd:
                writer = csv.writer(fd)
                writer.writerow(columns)
                for row in dumped:
                    writer.writerow([Utils.csv_cell(row.get(column)) for column in columns])

        LOGGER.info("wrote %d %s rows to %s", len(rows), command, output_file)

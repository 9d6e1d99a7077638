import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import pandas as pd

from cr_regular_spheres.catalog import GraphEmbedding, embedding_from_dict, embedding_to_dict
from cr_regular_spheres.errors import SerializationError
from cr_regular_spheres.structures import CertificateReport, IdentityCheck, RunManifest
from cr_regular_spheres.wirtinger_poly import WPolynomial, poly_from_dict, poly_to_dict

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def file_sha256(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_json(path: PathLike, data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + '\n', encoding='utf-8')
    logger.debug('wrote %s', path)


def read_json(path: PathLike) -> Any:
    text = Path(path).read_text(encoding='utf-8')
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializationError(f'{path} is not valid JSON: {e}') from e


def save_polynomial(path: PathLike, p: WPolynomial) -> None:
    write_json(path, poly_to_dict(p))


def load_polynomial(path: PathLike) -> WPolynomial:
    return poly_from_dict(_expect_object(read_json(path), path))


def save_embedding(path: PathLike, embedding: GraphEmbedding) -> None:
    write_json(path, embedding_to_dict(embedding))


def load_embedding(path: PathLike) -> GraphEmbedding:
    return embedding_from_dict(_expect_object(read_json(path), path))


def _expect_object(data: Any, path: PathLike) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise SerializationError(f'{path} must contain a JSON object')
    return data


def manifest_path(report_path: PathLike) -> Path:
    report_path = Path(report_path)
    return report_path.with_name(f'{report_path.stem}.manifest.json')


def save_manifest(output_path: PathLike, manifest: RunManifest) -> Path:
    path = manifest_path(output_path)
    write_json(path, manifest.to_dict())
    return path


def save_report(path: PathLike, report: CertificateReport, manifest: RunManifest) -> None:
    """The report embeds the reproducible part of the manifest; wall time only goes to the sidecar file."""
    data = report.to_dict()
    data['manifest'] = manifest.to_dict(include_wall_time=False)
    data['manifest']['sidecar'] = manifest_path(path).name
    write_json(path, data)
    save_manifest(path, manifest)


def load_report(path: PathLike) -> Tuple[CertificateReport, Dict[str, Any]]:
    data = _expect_object(read_json(path), path)
    try:
        return CertificateReport.from_dict(data), data.get('manifest', {})
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f'malformed report {path}: {e!r}') from e


def identity_to_dict(check: IdentityCheck) -> Dict[str, Any]:
    return {
        'holds': check.holds,
        'lhs': poly_to_dict(check.lhs),
        'rhs': poly_to_dict(check.rhs),
        'residual': poly_to_dict(check.residual),
    }


def save_histogram(path: PathLike, histogram: pd.DataFrame) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    histogram.to_csv(path, index=False, float_format='%.17g')

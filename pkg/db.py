"""
db.py

Caches homology results, keyed by a deterministic complex id such as
'ind-e-n7'. Results live in PostgreSQL when a connection string is
configured and in JSON files under the cache directory otherwise.

A cached payload is only handed back after it passes the same schema the
homology module writes: the complex id it was stored under, a face count,
integer Betti numbers per dimension and, when torsion was checked, the
invariant factors per dimension. Anything else is logged and treated as a
miss.
"""

import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import psycopg2
from psycopg2 import OperationalError
from psycopg2.extensions import connection as PgConnection
from psycopg2.extras import DictCursor, Json

# --- Database Schema ---
CREATE_TABLE_SQL = """
CREATE TABLE IF NOT EXISTS homology_cache (
    complex_id VARCHAR(64) PRIMARY KEY,
    num_faces BIGINT NOT NULL,
    data JSONB NOT NULL,
    computed_at TIMESTAMP WITH TIME ZONE
);
"""

REQUIRED_KEYS = ("complex_id", "num_faces", "betti", "torsion")
FILE_ONLY_KEYS = ("_computed_at",)

db_conn: Optional[PgConnection] = None


# --- Payload schema ---
def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _dimension_keys_ok(table: Dict[str, Any]) -> bool:
    try:
        return all(int(d) >= -1 for d in table)
    except (TypeError, ValueError):
        return False


def payload_problem(complex_id: str, data: Any) -> Optional[str]:
    """Why `data` is not a usable homology payload for `complex_id`, or None."""
    if not isinstance(data, dict):
        return f"payload is a {type(data).__name__}, not an object"
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        return f"missing keys {missing}"
    if data["complex_id"] != complex_id:
        return f"stored under {complex_id} but names {data['complex_id']}"
    if not _is_int(data["num_faces"]) or data["num_faces"] < 1:
        return f"bad face count {data['num_faces']!r}"

    betti = data["betti"]
    if not isinstance(betti, dict) or not _dimension_keys_ok(betti):
        return "betti must map dimensions to counts"
    if not all(_is_int(b) and b >= 0 for b in betti.values()):
        return "betti numbers must be non-negative integers"

    torsion = data["torsion"]
    if torsion is None:
        return None
    if not isinstance(torsion, dict) or not _dimension_keys_ok(torsion):
        return "torsion must map dimensions to factor lists"
    for dim, factors in torsion.items():
        if not isinstance(factors, list) or not all(_is_int(t) and t > 1 for t in factors):
            return f"torsion in dimension {dim} must list factors greater than 1"
        if any(b % a for a, b in zip(factors, factors[1:])):
            return f"torsion factors in dimension {dim} do not divide each other"
    return None


def _accept(complex_id: str, data: Any, source: str) -> Optional[Dict[str, Any]]:
    problem = payload_problem(complex_id, data)
    if problem:
        logging.warning("Ignoring %s cache entry for %s: %s", source, complex_id, problem)
        return None
    logging.debug("%s cache hit for %s.", source, complex_id)
    return data


# --- Database tier ---
def setup_database(connection_string: Optional[str]):
    """Connects to PostgreSQL and creates the cache table; without a string the file tier is used."""
    global db_conn
    if not connection_string:
        logging.debug("No database connection string. Using file-based cache.")
        db_conn = None
        return

    try:
        db_conn = psycopg2.connect(connection_string)
        with db_conn.cursor() as cursor:
            cursor.execute(CREATE_TABLE_SQL)
        db_conn.commit()
        logging.info("Connected to PostgreSQL and ensured homology_cache exists.")
    except OperationalError as e:
        logging.error("Could not connect to PostgreSQL: %s. Falling back to file cache.", e)
        db_conn = None


def db_load_from_cache(complex_id: str) -> Optional[Dict[str, Any]]:
    if not db_conn:
        return None

    try:
        with db_conn.cursor(cursor_factory=DictCursor) as cursor:
            cursor.execute("SELECT data FROM homology_cache WHERE complex_id = %s", (complex_id,))
            row = cursor.fetchone()
    except psycopg2.Error as e:
        logging.error("Error loading %s from the DB cache: %s", complex_id, e)
        db_conn.rollback()
        return None
    if row is None:
        logging.debug("DB cache miss for %s.", complex_id)
        return None
    return _accept(complex_id, row['data'], "DB")


def db_save_to_cache(complex_id: str, data: Dict[str, Any]):
    if not db_conn:
        return

    try:
        with db_conn.cursor() as cursor:
            cursor.execute(
                """
                INSERT INTO homology_cache (complex_id, num_faces, data, computed_at)
                VALUES (%s, %s, %s, %s)
                ON CONFLICT (complex_id) DO UPDATE SET
                    num_faces = EXCLUDED.num_faces,
                    data = EXCLUDED.data,
                    computed_at = EXCLUDED.computed_at;
                """,
                (complex_id, data["num_faces"], Json(data), datetime.now(timezone.utc))
            )
        db_conn.commit()
        logging.debug("Saved %s to DB cache.", complex_id)
    except psycopg2.Error as e:
        logging.error("Error saving %s to the DB cache: %s", complex_id, e)
        db_conn.rollback()


# --- File tier ---
def _cache_file(cache_dir: str, complex_id: str) -> str:
    return os.path.join(cache_dir, f"{complex_id}.json")


def file_load_from_cache(complex_id: str, cache_dir: str) -> Optional[Dict[str, Any]]:
    path = _cache_file(cache_dir, complex_id)
    if not os.path.exists(path):
        return None
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logging.warning("Ignoring unreadable cache file %s: %s", path, e)
        return None
    if isinstance(data, dict):
        for key in FILE_ONLY_KEYS:
            data.pop(key, None)
    return _accept(complex_id, data, "File")


def file_save_to_cache(complex_id: str, data: Dict[str, Any], cache_dir: str):
    """Writes through a temporary file so a crash never leaves half a payload behind."""
    os.makedirs(cache_dir, exist_ok=True)
    payload = dict(data)
    payload['_computed_at'] = datetime.now(timezone.utc).isoformat()
    path = _cache_file(cache_dir, complex_id)
    tmp = path + ".tmp"
    with open(tmp, 'w', encoding='utf-8') as f:
        json.dump(payload, f, ensure_ascii=False, indent=4, sort_keys=True)
    os.replace(tmp, path)


# --- Two-tier cache ---
def load_from_cache(complex_id: str, cache_dir: str) -> Optional[Dict[str, Any]]:
    """Database first, then the JSON file cache. Invalid entries count as misses."""
    cached = db_load_from_cache(complex_id)
    if cached is not None:
        return cached
    return file_load_from_cache(complex_id, cache_dir)


def save_to_cache(complex_id: str, data: Dict[str, Any], cache_dir: str):
    problem = payload_problem(complex_id, data)
    if problem:
        logging.error("Refusing to cache %s: %s", complex_id, problem)
        return
    if db_conn:
        db_save_to_cache(complex_id, data)
    else:
        file_save_to_cache(complex_id, data, cache_dir)

import os
from datetime import datetime

from config import SIMULATION_FILE_PREFIX

def get_unique_filename(output_dir, base_name):
    """
    Return a unique file name by appending (1), (2), etc., if a file already exists.
    """
    name, ext = os.path.splitext(base_name)
    candidate = base_name
    i = 1
    while os.path.exists(os.path.join(output_dir, candidate)):
        candidate = f"{name} ({i}){ext}"
        i += 1
    return candidate

def get_simulation_output_filename(prefix=SIMULATION_FILE_PREFIX, ext=".csv"):
    """
    Generate a simulation CSV filename with timestamp.
    e.g., simulation_20250730_153000.csv
    """
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return f"{prefix}_{timestamp}{ext}"

def resolve_output_path(out=None, prefix=SIMULATION_FILE_PREFIX):
    """
    Determine where the per-trial CSV goes.
    Priority:
    1. out as given, when it names a file
    2. a timestamped, unique file inside out (when out is a directory) or the cwd
    """
    if out and not os.path.isdir(out):
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return out
    output_dir = out or os.getcwd()
    return os.path.join(output_dir, get_unique_filename(output_dir, get_simulation_output_filename(prefix)))
